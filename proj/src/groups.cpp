#include "normbr/groups.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace groups {

namespace {

void check_table(const std::vector<std::vector<int>>& t) {
    const std::size_t n = t.size();
    if (n == 0) throw std::invalid_argument("empty multiplication table");
    for (const auto& row : t) {
        if (row.size() != n) throw std::invalid_argument("multiplication table is not square");
        for (int v : row)
            if (v < 0 || (std::size_t)v >= n)
                throw std::invalid_argument("table entry out of range");
    }
    // rows and columns are permutations
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<char> seen_row(n, 0), seen_col(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (seen_row[t[i][j]]++) throw std::invalid_argument("table row is not a permutation");
            if (seen_col[t[j][i]]++) throw std::invalid_argument("table column is not a permutation");
        }
    }
    // identity law for element 0
    for (std::size_t i = 0; i < n; ++i)
        if (t[0][i] != (int)i || t[i][0] != (int)i)
            throw std::invalid_argument("element 0 is not the identity");
    // associativity: exhaustive at small orders, sampled above
    auto assoc = [&](int a, int b, int c) {
        if (t[t[a][b]][c] != t[a][t[b][c]])
            throw std::invalid_argument("multiplication table is not associative");
    };
    if (n <= 128) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) assoc((int)a, (int)b, (int)c);
    } else {
        std::mt19937 rng(0xA55EC1A7u);
        std::uniform_int_distribution<int> pick(0, (int)n - 1);
        for (int k = 0; k < 200000; ++k) assoc(pick(rng), pick(rng), pick(rng));
    }
}

}  // namespace

void FiniteGroup::finish_and_check(std::size_t cap) {
    if (table_.size() > cap) throw GroupCapError(table_.size(), cap);
    check_table(table_);
    const std::size_t n = table_.size();
    inv_.assign(n, -1);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (table_[a][b] == 0) inv_[a] = (int)b;
    for (std::size_t a = 0; a < n; ++a)
        if (inv_[a] < 0 || table_[inv_[a]][a] != 0)
            throw std::invalid_argument("inverse law fails");
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table,
                                    std::string label, std::size_t cap) {
    FiniteGroup g;
    g.table_ = std::move(table);
    g.label_ = std::move(label);
    g.finish_and_check(cap);
    return g;
}

FiniteGroup FiniteGroup::trivial() { return cyclic(1); }

FiniteGroup FiniteGroup::cyclic(int n, std::size_t cap) {
    if (n < 1) throw std::invalid_argument("cyclic order must be positive");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return from_table(std::move(t), "cyclic(" + std::to_string(n) + ")", cap);
}

FiniteGroup FiniteGroup::dihedral(int n, std::size_t cap) {
    if (n < 1) throw std::invalid_argument("dihedral parameter must be positive");
    // element eps*n + k represents s^eps r^k;
    // s^e1 r^k1 * s^e2 r^k2 = s^(e1+e2) r^(k1*(-1)^e2 + k2)
    const int N = 2 * n;
    std::vector<std::vector<int>> t(N, std::vector<int>(N));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            int e1 = a / n, k1 = a % n, e2 = b / n, k2 = b % n;
            int e = (e1 + e2) % 2;
            int k = ((e2 ? -k1 : k1) + k2) % n;
            if (k < 0) k += n;
            t[a][b] = e * n + k;
        }
    return from_table(std::move(t), "dihedral(" + std::to_string(n) + ")", cap);
}

FiniteGroup FiniteGroup::symmetric(int n, std::size_t cap) {
    if (n < 1 || n > 5) throw std::invalid_argument("symmetric group parameter must be in 1..5");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p); while (std::next_permutation(p.begin(), p.end()));
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = (int)i;
    const std::size_t N = perms.size();
    std::vector<std::vector<int>> t(N, std::vector<int>(N));
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b) {
            std::vector<int> c(n);
            for (int x = 0; x < n; ++x) c[x] = perms[a][perms[b][x]];
            t[a][b] = index[c];
        }
    return from_table(std::move(t), "sym(" + std::to_string(n) + ")", cap);
}

FiniteGroup FiniteGroup::direct(const FiniteGroup& a, const FiniteGroup& b,
                                std::size_t cap) {
    const std::size_t na = a.order(), nb = b.order(), N = na * nb;
    std::vector<std::vector<int>> t(N, std::vector<int>(N));
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t y = 0; y < N; ++y) {
            int x1 = (int)(x / nb), x2 = (int)(x % nb);
            int y1 = (int)(y / nb), y2 = (int)(y % nb);
            t[x][y] = a.mul(x1, y1) * (int)nb + b.mul(x2, y2);
        }
    return from_table(std::move(t), "direct(" + a.label_ + "," + b.label_ + ")", cap);
}

FiniteGroup FiniteGroup::semidirect(const FiniteGroup& a, const FiniteGroup& b,
                                    const std::vector<std::vector<int>>& action,
                                    std::size_t cap) {
    const std::size_t na = a.order(), nb = b.order();
    if (action.size() != nb)
        throw std::invalid_argument("semidirect action needs one automorphism per element of the acting group");
    for (const auto& phi : action) {
        if (phi.size() != na || phi[0] != 0)
            throw std::invalid_argument("semidirect action entry is not an identity-preserving map");
        for (std::size_t x = 0; x < na; ++x)
            for (std::size_t y = 0; y < na; ++y)
                if (phi[a.mul((int)x, (int)y)] != a.mul(phi[x], phi[y]))
                    throw std::invalid_argument("semidirect action entry is not an automorphism");
        std::vector<char> seen(na, 0);
        for (int v : phi)
            if (seen[v]++) throw std::invalid_argument("semidirect action entry is not bijective");
    }
    for (std::size_t x = 0; x < na; ++x)
        if (action[0][x] != (int)x)
            throw std::invalid_argument("semidirect action of the identity must be trivial");
    for (std::size_t y1 = 0; y1 < nb; ++y1)
        for (std::size_t y2 = 0; y2 < nb; ++y2)
            for (std::size_t x = 0; x < na; ++x)
                if (action[b.mul((int)y1, (int)y2)][x] != action[y1][action[y2][x]])
                    throw std::invalid_argument("semidirect action is not a homomorphism");
    // (x1,y1)(x2,y2) = (x1 * phi_{y1}(x2), y1 y2); index = x*nb + y
    const std::size_t N = na * nb;
    std::vector<std::vector<int>> t(N, std::vector<int>(N));
    for (std::size_t u = 0; u < N; ++u)
        for (std::size_t v = 0; v < N; ++v) {
            int x1 = (int)(u / nb), y1 = (int)(u % nb);
            int x2 = (int)(v / nb), y2 = (int)(v % nb);
            t[u][v] = a.mul(x1, action[y1][x2]) * (int)nb + b.mul(y1, y2);
        }
    return from_table(std::move(t), "semidirect(" + a.label_ + "," + b.label_ + ")", cap);
}

int FiniteGroup::power(int g, long e) const {
    const long n = element_order(g);
    e %= n;
    if (e < 0) e += n;
    int r = 0;
    for (long i = 0; i < e; ++i) r = mul(r, g);
    return r;
}

int FiniteGroup::element_order(int g) const {
    int r = g, k = 1;
    while (r != 0) {
        r = mul(r, g);
        ++k;
    }
    return k;
}

bool FiniteGroup::is_abelian() const {
    const std::size_t n = order();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (table_[a][b] != table_[b][a]) return false;
    return true;
}

std::size_t FiniteGroup::exponent() const {
    std::size_t e = 1;
    for (std::size_t g = 0; g < order(); ++g)
        e = std::lcm(e, (std::size_t)element_order((int)g));
    return e;
}

std::vector<std::vector<int>> FiniteGroup::automorphisms() const {
    // brute force: extend partial maps on a generating sequence
    const std::size_t n = order();
    std::vector<int> gens;
    {
        Subgroup h = trivial_subgroup(*this);
        for (std::size_t g = 1; g < n; ++g)
            if (!h.contains((int)g)) {
                gens.push_back((int)g);
                std::vector<int> gg = h.elements;
                gg.push_back((int)g);
                h = subgroup_closure(*this, gg);
                if (h.order() == n) break;
            }
    }
    std::vector<std::vector<int>> result;
    std::vector<int> images(gens.size(), -1);
    // expand images of the generators into a full map, or return empty
    auto build = [&]() -> std::vector<int> {
        std::vector<int> phi(n, -1);
        phi[0] = 0;
        std::size_t defined = 1;
        // close under right multiplication by generators
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t g = 0; g < n; ++g) {
                if (phi[g] < 0) continue;
                for (std::size_t i = 0; i < gens.size(); ++i) {
                    int src = mul((int)g, gens[i]);
                    int dst = mul(phi[g], images[i]);
                    if (phi[src] < 0) {
                        phi[src] = dst;
                        ++defined;
                        grew = true;
                    } else if (phi[src] != dst) {
                        return {};
                    }
                }
            }
        }
        if (defined != n) return {};
        std::vector<char> seen(n, 0);
        for (int v : phi)
            if (seen[v]++) return {};
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (phi[mul((int)a, (int)b)] != mul(phi[a], phi[b])) return {};
        return phi;
    };
    // candidate images must match element orders
    std::vector<std::vector<int>> candidates(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t g = 0; g < n; ++g)
            if (element_order((int)g) == element_order(gens[i]))
                candidates[i].push_back((int)g);
    std::vector<std::size_t> pos(gens.size(), 0);
    if (gens.empty()) return {std::vector<int>{0}};
    std::size_t level = 0;
    while (true) {
        if (pos[level] == candidates[level].size()) {
            if (level == 0) break;
            pos[level] = 0;
            --level;
            ++pos[level];
            continue;
        }
        images[level] = candidates[level][pos[level]];
        if (level + 1 < gens.size()) {
            ++level;
            continue;
        }
        auto phi = build();
        if (!phi.empty()) result.push_back(std::move(phi));
        ++pos[level];
    }
    // identity automorphism first, rest in table order
    std::sort(result.begin(), result.end());
    return result;
}

exactlin::FinAb FiniteGroup::abelian_invariants() const {
    // Z^N on all elements, one relation per table cell: e_a + e_b - e_{ab} = 0
    using exactlin::Int;
    const std::size_t n = order();
    exactlin::IntMatrix rel(n, n * n);
    std::size_t c = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b, ++c) {
            rel.set(a, c, rel.at(a, c) + 1);
            rel.set(b, c, rel.at(b, c) + 1);
            std::size_t ab = (std::size_t)table_[a][b];
            rel.set(ab, c, rel.at(ab, c) - 1);
        }
    return exactlin::cokernel(rel, n).group;
}

bool Subgroup::contains(int g) const {
    return std::binary_search(elements.begin(), elements.end(), g);
}

int Subgroup::position(int g) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), g);
    if (it == elements.end() || *it != g)
        throw std::invalid_argument("element is not in the subgroup");
    return (int)(it - elements.begin());
}

bool Subgroup::operator<(const Subgroup& other) const {
    if (elements.size() != other.elements.size())
        return elements.size() < other.elements.size();
    return elements < other.elements;
}

Subgroup subgroup_closure(const FiniteGroup& g, const std::vector<int>& gens) {
    for (int x : gens)
        if (x < 0 || (std::size_t)x >= g.order())
            throw std::invalid_argument("generator outside the group");
    std::set<int> elems{0};
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        int x = frontier.back();
        frontier.pop_back();
        for (int s : gens) {
            for (int y : {g.mul(x, s), g.mul(x, g.inv(s))})
                if (elems.insert(y).second) frontier.push_back(y);
        }
    }
    Subgroup h;
    h.parent = &g;
    h.elements.assign(elems.begin(), elems.end());
    return h;
}

Subgroup trivial_subgroup(const FiniteGroup& g) {
    Subgroup h;
    h.parent = &g;
    h.elements = {0};
    return h;
}

Subgroup full_subgroup(const FiniteGroup& g) {
    Subgroup h;
    h.parent = &g;
    h.elements.resize(g.order());
    std::iota(h.elements.begin(), h.elements.end(), 0);
    return h;
}

FiniteGroup as_group(const Subgroup& h) {
    const FiniteGroup& g = *h.parent;
    const std::size_t n = h.order();
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            t[i][j] = h.position(g.mul(h.elements[i], h.elements[j]));
    return FiniteGroup::from_table(std::move(t), g.label() + ".sub", g.order());
}

Subgroup dihedral_rotations(const FiniteGroup& d) {
    if (d.order() % 2 != 0 || d.label().rfind("dihedral(", 0) != 0)
        throw std::invalid_argument("not a dihedral group");
    Subgroup h;
    h.parent = &d;
    h.elements.resize(d.order() / 2);
    std::iota(h.elements.begin(), h.elements.end(), 0);
    return h;
}

std::vector<Subgroup> cyclic_subgroups(const FiniteGroup& g) {
    std::set<std::vector<int>> seen;
    for (std::size_t x = 0; x < g.order(); ++x) {
        std::vector<int> elems;
        int r = 0;
        do {
            elems.push_back(r);
            r = g.mul(r, (int)x);
        } while (r != 0);
        std::sort(elems.begin(), elems.end());
        seen.insert(std::move(elems));
    }
    std::vector<Subgroup> out;
    for (const auto& e : seen) {
        Subgroup h;
        h.parent = &g;
        h.elements = e;
        out.push_back(std::move(h));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
    std::set<std::vector<int>> seen;
    for (const Subgroup& h : cyclic_subgroups(g)) seen.insert(h.elements);
    // close the set of known subgroups under pairwise join until stable
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<int>> cur(seen.begin(), seen.end());
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = i + 1; j < cur.size(); ++j) {
                std::vector<int> gens = cur[i];
                gens.insert(gens.end(), cur[j].begin(), cur[j].end());
                Subgroup join = subgroup_closure(g, gens);
                if (seen.insert(join.elements).second) grew = true;
            }
    }
    std::vector<Subgroup> out;
    for (const auto& e : seen) {
        Subgroup h;
        h.parent = &g;
        h.elements = e;
        out.push_back(std::move(h));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_normal(const FiniteGroup& g, const Subgroup& h, std::pair<int, int>* witness) {
    for (std::size_t a = 0; a < g.order(); ++a)
        for (int x : h.elements)
            if (!h.contains(g.conj((int)a, x))) {
                if (witness) *witness = {(int)a, x};
                return false;
            }
    return true;
}

Quotient quotient(const FiniteGroup& g, const Subgroup& n) {
    if (n.parent->order() != g.order())
        throw std::invalid_argument("subgroup belongs to a different group");
    std::pair<int, int> w;
    if (!is_normal(g, n, &w)) throw NotNormalError(w.first, w.second);
    const std::size_t N = g.order();
    std::vector<int> coset_min(N, -1);  // element -> least member of its coset
    std::vector<int> reps;
    for (std::size_t a = 0; a < N; ++a) {
        if (coset_min[a] >= 0) continue;
        int least = (int)a;
        std::vector<int> members;
        for (int x : n.elements) members.push_back(g.mul((int)a, x));
        for (int m : members) least = std::min(least, m);
        for (int m : members) coset_min[m] = least;
        reps.push_back(least);
    }
    std::sort(reps.begin(), reps.end());
    std::vector<int> proj(N);
    for (std::size_t a = 0; a < N; ++a)
        proj[a] = (int)(std::lower_bound(reps.begin(), reps.end(), coset_min[a]) - reps.begin());
    const std::size_t Q = reps.size();
    std::vector<std::vector<int>> t(Q, std::vector<int>(Q));
    for (std::size_t i = 0; i < Q; ++i)
        for (std::size_t j = 0; j < Q; ++j) t[i][j] = proj[g.mul(reps[i], reps[j])];
    Quotient out;
    out.group = FiniteGroup::from_table(std::move(t), g.label() + "/N", g.order());
    out.projection = std::move(proj);
    out.reps = std::move(reps);
    // sanity: projection is a homomorphism
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b)
            if (out.projection[g.mul((int)a, (int)b)] !=
                out.group.mul(out.projection[a], out.projection[b]))
                throw std::logic_error("quotient projection is not a homomorphism");
    return out;
}

bool GSet::is_transitive() const {
    return size() > 0 && orbit(0).size() == size();
}

std::vector<int> GSet::orbit(int x) const {
    std::set<int> seen{x};
    std::vector<int> frontier{x};
    while (!frontier.empty()) {
        int p = frontier.back();
        frontier.pop_back();
        for (std::size_t g = 0; g < group->order(); ++g)
            if (seen.insert(act[g][p]).second) frontier.push_back(act[g][p]);
    }
    return {seen.begin(), seen.end()};
}

std::size_t GSet::stabilizer_order(int x) const {
    std::size_t c = 0;
    for (std::size_t g = 0; g < group->order(); ++g)
        if (act[g][x] == x) ++c;
    return c;
}

void GSet::check() const {
    const std::size_t N = group->order(), P = size();
    if (act.size() != N) throw std::logic_error("GSet action has wrong number of rows");
    for (const auto& row : act) {
        if (row.size() != P) throw std::logic_error("GSet action row has wrong size");
        std::vector<char> seen(P, 0);
        for (int v : row) {
            if (v < 0 || (std::size_t)v >= P || seen[v]++)
                throw std::logic_error("GSet action row is not a permutation");
        }
    }
    for (std::size_t x = 0; x < P; ++x)
        if (act[0][x] != (int)x) throw std::logic_error("GSet identity law fails");
    for (std::size_t g = 0; g < N; ++g)
        for (std::size_t h = 0; h < N; ++h)
            for (std::size_t x = 0; x < P; ++x)
                if (act[g][act[h][x]] != act[group->mul((int)g, (int)h)][x])
                    throw std::logic_error("GSet compatibility law fails");
    if (!labels.empty() && labels.size() != P)
        throw std::logic_error("GSet label count mismatch");
}

GSet cosets(const FiniteGroup& g, const Subgroup& h) {
    const std::size_t N = g.order();
    std::vector<int> coset_min(N, -1);
    std::vector<int> reps;
    for (std::size_t a = 0; a < N; ++a) {
        if (coset_min[a] >= 0) continue;
        int least = (int)a;
        std::vector<int> members;
        for (int x : h.elements) members.push_back(g.mul((int)a, x));
        for (int m : members) least = std::min(least, m);
        for (int m : members) coset_min[m] = least;
        reps.push_back(least);
    }
    std::sort(reps.begin(), reps.end());
    auto idx = [&](int e) {
        return (int)(std::lower_bound(reps.begin(), reps.end(), coset_min[e]) - reps.begin());
    };
    GSet s;
    s.group = &g;
    s.act.assign(N, std::vector<int>(reps.size()));
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t i = 0; i < reps.size(); ++i)
            s.act[a][i] = idx(g.mul((int)a, reps[i]));
    for (int r : reps) s.labels.push_back(std::to_string(r) + "H");
    s.check();
    return s;
}

GSet regular_gset(const FiniteGroup& g) {
    return cosets(g, trivial_subgroup(g));
}

}  // namespace groups
