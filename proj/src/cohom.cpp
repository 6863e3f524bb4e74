#include "normbr/cohom.hpp"

#include <algorithm>

namespace cohom {

namespace {

bool same_group(const groups::FiniteGroup& a, const groups::FiniteGroup& b) {
    if (&a == &b) return true;
    if (a.order() != b.order()) return false;
    for (std::size_t x = 0; x < a.order(); ++x)
        for (std::size_t y = 0; y < a.order(); ++y)
            if (a.mul((int)x, (int)y) != b.mul((int)x, (int)y)) return false;
    return true;
}

void add_entry(IntMatrix& m, std::size_t r, std::size_t c, const Int& v) {
    if (v == 0) return;
    m.set(r, c, m.at(r, c) + v);
}

std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// odometer over n-tuples of non-identity elements (values 1..N-1);
// returns false when no tuple exists (n > 0 and N = 1)
bool first_tuple(std::vector<int>& t, int n, std::size_t nelem) {
    t.assign(n, 1);
    return n == 0 || nelem > 1;
}

bool next_tuple(std::vector<int>& t, std::size_t nelem) {
    for (std::size_t i = t.size(); i-- > 0;) {
        if (t[i] + 1 < (int)nelem) {
            ++t[i];
            for (std::size_t j = i + 1; j < t.size(); ++j) t[j] = 1;
            return true;
        }
    }
    return false;
}

std::size_t tuple_index(const std::vector<int>& t, std::size_t nelem) {
    std::size_t idx = 0;
    for (int g : t) idx = idx * (nelem - 1) + (std::size_t)(g - 1);
    return idx;
}

// modulus-aware congruence of two matrices: rows with modulus 0 compare exact
bool congruent_rows(const IntMatrix& a, const IntMatrix& b, const std::vector<Int>& mod) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Int diff = a.at(i, j) - b.at(i, j);
            if (mod[i] == 0 ? diff != 0 : diff % mod[i] != 0) return false;
        }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Module

Module Module::lattice(const gmod::GLattice& l) {
    Module m;
    m.group = &l.group();
    m.rank = l.rank();
    m.moduli.assign(l.rank(), Int(0));
    for (std::size_t g = 0; g < l.group().order(); ++g) m.action.push_back(l.act((int)g));
    m.labels = l.labels();
    return m;
}

Module Module::finite(const gmod::FinGModule& f) {
    Module m;
    m.group = &f.group();
    m.rank = f.ngens();
    m.moduli = f.moduli();
    for (std::size_t g = 0; g < f.group().order(); ++g) m.action.push_back(f.act((int)g));
    m.labels = f.labels();
    return m;
}

Module Module::trivial_z(const groups::FiniteGroup& g) {
    Module m;
    m.group = &g;
    m.rank = 1;
    m.moduli = {Int(0)};
    m.action.assign(g.order(), IntMatrix::identity(1));
    m.labels = {"Z"};
    return m;
}

bool Module::is_free() const {
    for (const auto& d : moduli)
        if (d != 0) return false;
    return true;
}

IntMatrix Module::relation_cols() const {
    std::size_t k = 0;
    for (const auto& d : moduli)
        if (d != 0) ++k;
    IntMatrix r(rank, k);
    std::size_t c = 0;
    for (std::size_t i = 0; i < rank; ++i)
        if (moduli[i] != 0) r.set(i, c++, moduli[i]);
    return r;
}

Module restricted_module(const Module& m, const groups::Subgroup& h,
                         const groups::FiniteGroup& hgroup) {
    Module r;
    r.group = &hgroup;
    r.rank = m.rank;
    r.moduli = m.moduli;
    r.labels = m.labels;
    for (int x : h.elements) r.action.push_back(m.action[x]);
    return r;
}

Module quotient_module(const Module& m, const groups::Quotient& q,
                       const groups::Subgroup& n) {
    for (int x : n.elements)
        if (!congruent_rows(m.action[x], IntMatrix::identity(m.rank), m.moduli))
            throw std::invalid_argument(
                "coefficient action does not factor through the quotient");
    Module r;
    r.group = &q.group;
    r.rank = m.rank;
    r.moduli = m.moduli;
    r.labels = m.labels;
    for (int rep : q.reps) r.action.push_back(m.action[rep]);
    return r;
}

ModuleMap::ModuleMap(Module s, Module d, IntMatrix mat)
    : src(std::move(s)), dst(std::move(d)), matrix(std::move(mat)) {
    if (!same_group(*src.group, *dst.group))
        throw std::invalid_argument("module map between different groups");
    if (matrix.rows() != dst.rank || matrix.cols() != src.rank)
        throw std::invalid_argument("module map matrix has wrong shape");
    // relation compatibility: d_src,j * column j dies in dst
    for (std::size_t j = 0; j < src.rank; ++j) {
        if (src.moduli[j] == 0) continue;
        for (std::size_t i = 0; i < dst.rank; ++i) {
            Int v = matrix.at(i, j) * src.moduli[j];
            if (dst.moduli[i] == 0 ? v != 0 : v % dst.moduli[i] != 0)
                throw std::invalid_argument("module map not well defined mod relations");
        }
    }
    for (std::size_t g = 0; g < src.group->order(); ++g)
        if (!congruent_rows(dst.action[g].mul(matrix), matrix.mul(src.action[g]),
                            dst.moduli))
            throw std::invalid_argument("module map is not equivariant");
}

ModuleMap ModuleMap::of(const gmod::LatticeMap& f) {
    return ModuleMap(Module::lattice(f.src()), Module::lattice(f.dst()), f.matrix());
}

// ---------------------------------------------------------------------------
// CochainComplex

CochainComplex::CochainComplex(Module m, int n_max, const Caps& caps)
    : mod_(std::move(m)), n_max_(n_max) {
    (void)caps;
    if (n_max_ < 0) throw std::invalid_argument("negative degree");
    const std::size_t N = mod_.group->order();
    const std::size_t r = mod_.rank;
    const groups::FiniteGroup& G = *mod_.group;

    for (int n = 0; n <= n_max_; ++n) {
        IntMatrix dn(dim(n + 1), dim(n));
        std::vector<int> T;
        if (first_tuple(T, n + 1, N)) do {
            const std::size_t row0 = tuple_index(T, N) * r;
            // first face: g_1 acts on f(g_2..g_{n+1})
            std::vector<int> tail(T.begin() + 1, T.end());
            const std::size_t c1 = tuple_index(tail, N) * r;
            mod_.action[T[0]].for_each([&](std::size_t i, std::size_t j, const Int& v) {
                add_entry(dn, row0 + i, c1 + j, v);
            });
            // middle faces: merge positions i, i+1 (dropped when the product
            // is the identity, by normalization)
            int sign = 1;
            for (int i = 0; i + 1 <= n; ++i) {
                sign = -sign;
                int prod = G.mul(T[i], T[i + 1]);
                if (prod != 0) {
                    std::vector<int> merged;
                    merged.reserve(n);
                    for (int a = 0; a <= n; ++a) {
                        if (a == i) merged.push_back(prod);
                        else if (a != i + 1) merged.push_back(T[a]);
                    }
                    const std::size_t cm = tuple_index(merged, N) * r;
                    for (std::size_t j = 0; j < r; ++j)
                        add_entry(dn, row0 + j, cm + j, Int(sign));
                }
            }
            // last face: drop g_{n+1}
            std::vector<int> head(T.begin(), T.end() - 1);
            const std::size_t cl = tuple_index(head, N) * r;
            for (std::size_t j = 0; j < r; ++j)
                add_entry(dn, row0 + j, cl + j, Int(-sign));
        } while (next_tuple(T, N));
        d_.push_back(std::move(dn));
    }

    // d(n+1) . d(n) = 0 modulo the coefficient relations
    for (int n = 0; n + 1 <= n_max_; ++n) {
        IntMatrix prod = d_[n + 1].mul(d_[n]);
        bool ok = true;
        prod.for_each([&](std::size_t row, std::size_t, const Int& v) {
            const Int& mod = mod_.moduli[row % r];
            if (mod == 0 ? v != 0 : v % mod != 0) ok = false;
        });
        if (!ok) throw std::logic_error("bar differential does not square to zero");
    }
}

std::size_t CochainComplex::dim(int n) const {
    if (n < 0 || n > n_max_ + 1) throw std::out_of_range("degree outside complex");
    const std::size_t N = mod_.group->order();
    if (n > 0 && N == 1) return 0;
    return mod_.rank * ipow(N - 1, n);
}

const IntMatrix& CochainComplex::d(int n) const {
    if (n < 0 || n > n_max_) throw std::out_of_range("no differential at this degree");
    return d_[n];
}

IntMatrix CochainComplex::relations(int n) const {
    const std::size_t N = mod_.group->order();
    const std::size_t r = mod_.rank;
    const std::size_t tuples = (n > 0 && N == 1) ? 0 : ipow(N - 1, n);
    std::vector<std::size_t> finite;
    for (std::size_t i = 0; i < r; ++i)
        if (mod_.moduli[i] != 0) finite.push_back(i);
    IntMatrix rel(dim(n), tuples * finite.size());
    std::size_t c = 0;
    for (std::size_t t = 0; t < tuples; ++t)
        for (std::size_t i : finite) rel.set(t * r + i, c++, mod_.moduli[i]);
    return rel;
}

std::size_t CochainComplex::index(const std::vector<int>& tuple, std::size_t gen) const {
    for (int g : tuple)
        if (g <= 0 || (std::size_t)g >= mod_.group->order())
            throw std::invalid_argument("tuple entries must be non-identity elements");
    return tuple_index(tuple, mod_.group->order()) * mod_.rank + gen;
}

// ---------------------------------------------------------------------------
// cohomology

CohomGroup cohomology(const CochainComplex& cx, int n, const Caps& caps) {
    if (n < 0 || n > cx.n_max()) throw std::out_of_range("degree outside complex");
    const std::size_t dn = cx.dim(n);

    IntMatrix dr = cx.d(n).hstack(cx.relations(n + 1));
    IntMatrix full_kernel = exactlin::kernel_lattice(dr, caps);
    IntMatrix numerator(dn, full_kernel.cols());
    full_kernel.for_each([&](std::size_t i, std::size_t j, const Int& v) {
        if (i < dn) numerator.set(i, j, v);
    });

    IntMatrix denominator = (n > 0 ? cx.d(n - 1) : IntMatrix::zero(dn, 0))
                                .hstack(cx.relations(n));

    CohomGroup out;
    out.degree = n;
    out.classes = exactlin::Subquotient(dn, numerator, denominator, caps);
    out.group = out.classes.group();
    out.reps = out.group.generators;
    return out;
}

CohomGroup cohomology(const Module& m, int n, const Caps& caps) {
    return cohomology(CochainComplex(m, n, caps), n, caps);
}

CohomGroup qz_cohomology(const groups::FiniteGroup& g, int n, const Caps& caps) {
    if (n < 0 || n > 2) throw std::out_of_range("Q/Z cohomology supported for n <= 2");
    CohomGroup h = cohomology(Module::trivial_z(g), n + 1, caps);
    h.degree = n;  // reported in Q/Z degrees
    return h;
}

// ---------------------------------------------------------------------------
// cochain-level maps

IntMatrix induced_cochain(const ModuleMap& f, int n) {
    const std::size_t N = f.src.group->order();
    const std::size_t tuples = (n > 0 && N == 1) ? 0 : ipow(N - 1, n);
    IntMatrix m(tuples * f.dst.rank, tuples * f.src.rank);
    for (std::size_t t = 0; t < tuples; ++t)
        f.matrix.for_each([&](std::size_t i, std::size_t j, const Int& v) {
            m.set(t * f.dst.rank + i, t * f.src.rank + j, v);
        });
    return m;
}

IntMatrix restriction_cochain(const Module& m, const groups::Subgroup& h,
                              const groups::FiniteGroup& hg, int n) {
    const std::size_t N = m.group->order(), NH = hg.order(), r = m.rank;
    const std::size_t small_tuples = (n > 0 && NH == 1) ? 0 : ipow(NH - 1, n);
    const std::size_t big_tuples = (n > 0 && N == 1) ? 0 : ipow(N - 1, n);
    IntMatrix out(small_tuples * r, big_tuples * r);
    std::vector<int> t;
    if (first_tuple(t, n, NH)) do {
        std::vector<int> big;
        for (int s : t) big.push_back(h.elements[s]);
        const std::size_t rs = tuple_index(t, NH) * r;
        const std::size_t cb = tuple_index(big, N) * r;
        for (std::size_t j = 0; j < r; ++j) out.set(rs + j, cb + j, 1);
    } while (next_tuple(t, NH));
    return out;
}

namespace {

struct CosetData {
    std::vector<int> coset_of;  // element -> coset index
    std::vector<int> rep;       // coset index -> least representative
};

CosetData coset_data(const groups::FiniteGroup& g, const groups::Subgroup& h) {
    groups::GSet gs = groups::cosets(g, h);
    CosetData cd;
    cd.coset_of.resize(g.order());
    cd.rep.assign(gs.size(), -1);
    for (std::size_t x = 0; x < g.order(); ++x) {
        int c = gs.apply((int)x, 0);
        cd.coset_of[x] = c;
        if (cd.rep[c] < 0) cd.rep[c] = (int)x;  // ascending scan -> least rep
    }
    return cd;
}

}  // namespace

IntMatrix corestriction_cochain(const Module& m, const groups::Subgroup& h,
                                const groups::FiniteGroup& hg, int n) {
    const groups::FiniteGroup& G = *m.group;
    const std::size_t N = G.order(), NH = hg.order(), r = m.rank;
    const std::size_t small_tuples = (n > 0 && NH == 1) ? 0 : ipow(NH - 1, n);
    const std::size_t big_tuples = (n > 0 && N == 1) ? 0 : ipow(N - 1, n);
    CosetData cd = coset_data(G, h);
    const std::size_t ncosets = cd.rep.size();

    IntMatrix out(big_tuples * r, small_tuples * r);
    std::vector<int> T;
    if (first_tuple(T, n, N)) do {
        const std::size_t rowt = tuple_index(T, N) * r;
        for (std::size_t p = 0; p < ncosets; ++p) {
            // walk the coset chain p_n = p, p_{i-1} = g_i p_i and collect
            // the H-components h_i = rep(p_{i-1})^-1 g_i rep(p_i)
            std::vector<int> pts(n + 1);
            pts[n] = (int)p;
            for (int i = n; i >= 1; --i)
                pts[i - 1] = cd.coset_of[G.mul(T[i - 1], cd.rep[pts[i]])];
            std::vector<int> small(n);
            bool skip = false;
            for (int i = 1; i <= n; ++i) {
                int hv = G.mul(G.mul(G.inv(cd.rep[pts[i - 1]]), T[i - 1]), cd.rep[pts[i]]);
                int pos = h.position(hv);
                if (pos == 0) { skip = true; break; }  // normalized cochain
                small[i - 1] = pos;
            }
            if (skip) continue;
            const std::size_t colt = tuple_index(small, NH) * r;
            m.action[cd.rep[pts[0]]].for_each(
                [&](std::size_t i, std::size_t j, const Int& v) {
                    add_entry(out, rowt + i, colt + j, v);
                });
        }
    } while (next_tuple(T, N));
    return out;
}

IntMatrix inflation_cochain(const Module& m, const groups::Quotient& q,
                            const groups::Subgroup& n_sub, int n) {
    (void)n_sub;
    const std::size_t N = m.group->order(), NQ = q.group.order(), r = m.rank;
    const std::size_t small_tuples = (n > 0 && NQ == 1) ? 0 : ipow(NQ - 1, n);
    const std::size_t big_tuples = (n > 0 && N == 1) ? 0 : ipow(N - 1, n);
    IntMatrix out(big_tuples * r, small_tuples * r);
    std::vector<int> T;
    if (first_tuple(T, n, N)) do {
        std::vector<int> small(n);
        bool skip = false;
        for (int i = 0; i < n; ++i) {
            small[i] = q.projection[T[i]];
            if (small[i] == 0) { skip = true; break; }
        }
        if (skip) continue;
        const std::size_t rowt = tuple_index(T, N) * r;
        const std::size_t colt = tuple_index(small, NQ) * r;
        for (std::size_t j = 0; j < r; ++j) out.set(rowt + j, colt + j, 1);
    } while (next_tuple(T, N));
    return out;
}

exactlin::AbHom descend(const IntMatrix& cochain_map, const CohomGroup& src,
                        const CohomGroup& dst) {
    const std::size_t ks = src.reps.size();
    const std::size_t kd = dst.group.invariant_factors.size() + dst.group.free_rank;
    IntMatrix m(kd, ks);
    for (std::size_t c = 0; c < ks; ++c) {
        Vec img = cochain_map.mul_vec(src.reps[c]);
        Vec coords = dst.classes.project(img);
        for (std::size_t i = 0; i < kd; ++i) m.set(i, c, coords[i]);
    }
    exactlin::AbHom hom{src.presentation(), dst.presentation(), std::move(m)};
    if (!hom.well_defined())
        throw std::logic_error("descended map is not well defined");
    return hom;
}

InducedMap induced_map(const ModuleMap& f, int n, const Caps& caps) {
    CohomGroup src = cohomology(f.src, n, caps);
    CohomGroup dst = cohomology(f.dst, n, caps);
    exactlin::AbHom map = descend(induced_cochain(f, n), src, dst);
    return InducedMap{std::move(src), std::move(dst), std::move(map)};
}

InducedMap restriction(const Module& m, const groups::Subgroup& h, int n,
                       const Caps& caps) {
    groups::FiniteGroup hg = groups::as_group(h);
    Module rm = restricted_module(m, h, hg);
    CohomGroup big = cohomology(m, n, caps);
    CohomGroup small = cohomology(rm, n, caps);
    exactlin::AbHom map = descend(restriction_cochain(m, h, hg, n), big, small);
    return InducedMap{std::move(big), std::move(small), std::move(map)};
}

InducedMap corestriction(const Module& m, const groups::Subgroup& h, int n,
                         const Caps& caps) {
    groups::FiniteGroup hg = groups::as_group(h);
    Module rm = restricted_module(m, h, hg);
    CohomGroup small = cohomology(rm, n, caps);
    CohomGroup big = cohomology(m, n, caps);
    exactlin::AbHom map = descend(corestriction_cochain(m, h, hg, n), small, big);
    return InducedMap{std::move(small), std::move(big), std::move(map)};
}

InducedMap inflation(const Module& m, const groups::Subgroup& n_sub, int n,
                     const Caps& caps) {
    groups::Quotient q = groups::quotient(*m.group, n_sub);
    Module qm = quotient_module(m, q, n_sub);
    CohomGroup src = cohomology(qm, n, caps);
    CohomGroup dst = cohomology(m, n, caps);
    exactlin::AbHom map = descend(inflation_cochain(m, q, n_sub, n), src, dst);
    return InducedMap{std::move(src), std::move(dst), std::move(map)};
}

// ---------------------------------------------------------------------------
// connecting map

namespace {

void check_exact(const ShortExact& s) {
    const IntMatrix& i = s.i.matrix();
    const IntMatrix& p = s.p.matrix();
    if (s.i.dst().rank() != s.p.src().rank() ||
        !same_group(s.i.dst().group(), s.p.src().group()))
        throw std::invalid_argument("short exact sequence: middle terms disagree");
    if (exactlin::kernel_lattice(i).cols() != 0)
        throw std::invalid_argument("short exact sequence: first map not injective");
    if (!p.mul(i).is_zero())
        throw std::invalid_argument("short exact sequence: composite not zero");
    auto snf = exactlin::smith_normal_form(p);
    if (snf.rank() != p.rows())
        throw std::invalid_argument("short exact sequence: second map not surjective");
    for (const auto& d : snf.diagonal())
        if (d != 1 && d != -1)
            throw std::invalid_argument("short exact sequence: second map not surjective over Z");
    if (i.cols() + p.rows() != p.cols())
        throw std::invalid_argument("short exact sequence: rank mismatch");
    // ker p = im i
    IntMatrix kp = exactlin::kernel_lattice(p);
    exactlin::ColumnSolver isolve(i), ksolve(kp);
    for (std::size_t c = 0; c < kp.cols(); ++c)
        if (!isolve.solve(kp.col(c)))
            throw std::invalid_argument("short exact sequence: kernel exceeds image");
    for (std::size_t c = 0; c < i.cols(); ++c)
        if (!ksolve.solve(i.col(c)))
            throw std::invalid_argument("short exact sequence: image exceeds kernel");
}

}  // namespace

Connecting connecting(const ShortExact& s, int n, const Caps& caps) {
    check_exact(s);
    const std::size_t rA = s.i.src().rank(), rB = s.i.dst().rank(), rC = s.p.dst().rank();
    const groups::FiniteGroup& G = s.i.src().group();
    const std::size_t N = G.order();

    // integer section S of p
    exactlin::ColumnSolver psolve(s.p.matrix(), caps);
    IntMatrix S(rB, rC);
    for (std::size_t c = 0; c < rC; ++c) {
        Vec e(rC, 0), x;
        e[c] = 1;
        if (!psolve.solve(e, &x)) throw std::logic_error("section solve failed");
        for (std::size_t i = 0; i < rB; ++i) S.set(i, c, x[i]);
    }

    Module mA = Module::lattice(s.i.src());
    Module mB = Module::lattice(s.i.dst());
    Module mC = Module::lattice(s.p.dst());
    CochainComplex cxB(mB, n, caps);
    CohomGroup src = cohomology(mC, n, caps);
    CohomGroup dst = cohomology(mA, n + 1, caps);

    exactlin::ColumnSolver isolve(s.i.matrix(), caps);
    const std::size_t tuples_n = (n > 0 && N == 1) ? 0 : ipow(N - 1, n);
    const std::size_t tuples_n1 = (N == 1) ? 0 : ipow(N - 1, n + 1);

    const std::size_t ks = src.reps.size();
    const std::size_t kd = dst.group.invariant_factors.size() + dst.group.free_rank;
    IntMatrix m(kd, ks);
    for (std::size_t c = 0; c < ks; ++c) {
        // lift the C-cocycle through the section, take d in B, pull back along i
        Vec X(tuples_n * rB, 0);
        for (std::size_t t = 0; t < tuples_n; ++t)
            for (std::size_t i = 0; i < rB; ++i)
                for (std::size_t j = 0; j < rC; ++j)
                    X[t * rB + i] += S.at(i, j) * src.reps[c][t * rC + j];
        Vec y = cxB.d(n).mul_vec(X);
        Vec a(tuples_n1 * rA, 0);
        for (std::size_t t = 0; t < tuples_n1; ++t) {
            Vec yb(y.begin() + t * rB, y.begin() + (t + 1) * rB), xb;
            if (!isolve.solve(yb, &xb))
                throw std::logic_error("connecting lift failed");
            for (std::size_t i = 0; i < rA; ++i) a[t * rA + i] = xb[i];
        }
        Vec coords = dst.classes.project(a);
        for (std::size_t i = 0; i < kd; ++i) m.set(i, c, coords[i]);
    }
    exactlin::AbHom hom{src.presentation(), dst.presentation(), std::move(m)};
    if (!hom.well_defined()) throw std::logic_error("connecting map not well defined");
    return Connecting{std::move(src), std::move(dst), std::move(hom)};
}

CoboundarySolver::CoboundarySolver(const CochainComplex& cx, int n, const Caps& caps) {
    if (n < 1 || n > cx.n_max() + 1) throw std::out_of_range("degree outside complex");
    solver_ = exactlin::ColumnSolver(cx.d(n - 1).hstack(cx.relations(n)), caps);
}

bool CoboundarySolver::is_coboundary(const Vec& cochain) const {
    return solver_.solve(cochain);
}

// ---------------------------------------------------------------------------
// Shapiro

Shapiro shapiro(const groups::FiniteGroup& g, const groups::Subgroup& h, int n,
                const Caps& caps) {
    groups::GSet gs = groups::cosets(g, h);
    gmod::GLattice perm = gmod::perm_lattice(g, gs);
    Module mp = Module::lattice(perm);
    groups::FiniteGroup hg = groups::as_group(h);
    Module mz = Module::trivial_z(hg);

    const std::size_t N = g.order(), NH = hg.order(), X = gs.size();
    const std::size_t small_tuples = (n > 0 && NH == 1) ? 0 : ipow(NH - 1, n);

    Shapiro out;
    out.big = cohomology(mp, n, caps);
    out.small = cohomology(mz, n, caps);

    // alpha: restrict to H-tuples, take the coefficient of the base coset
    IntMatrix alpha(small_tuples, (n > 0 && N == 1) ? 0 : ipow(N - 1, n) * X);
    std::vector<int> t;
    if (first_tuple(t, n, NH)) do {
        std::vector<int> big;
        for (int s : t) big.push_back(h.elements[s]);
        alpha.set(tuple_index(t, NH), tuple_index(big, N) * X + 0, 1);
    } while (next_tuple(t, NH));

    // beta: embed Z at the base coset, then transfer
    IntMatrix emb(small_tuples * X, small_tuples);
    for (std::size_t tt = 0; tt < small_tuples; ++tt) emb.set(tt * X + 0, tt, 1);
    IntMatrix beta = corestriction_cochain(mp, h, hg, n).mul(emb);

    out.cochain_to_small = std::move(alpha);
    out.cochain_to_big = std::move(beta);
    out.to_small = descend(out.cochain_to_small, out.big, out.small);
    out.to_big = descend(out.cochain_to_big, out.small, out.big);
    return out;
}

// ---------------------------------------------------------------------------
// Sha^2_omega

Sha2 sha2_omega(const Module& m, const Caps& caps) {
    Sha2 out;
    out.h2 = cohomology(m, 2, caps);
    if (out.h2.group.free_rank != 0)
        throw std::logic_error("H^2 of a finite group must be finite");
    const std::size_t ks = out.h2.reps.size();

    std::vector<Vec> rows;     // stacked restriction images
    std::vector<Int> dst_mod;  // their moduli
    for (const groups::Subgroup& c : groups::cyclic_subgroups(*m.group)) {
        if (c.order() == 1) continue;
        groups::FiniteGroup hg = groups::as_group(c);
        Module rm = restricted_module(m, c, hg);
        CohomGroup small = cohomology(rm, 2, caps);
        if (small.group.free_rank != 0)
            throw std::logic_error("H^2 of a finite group must be finite");
        IntMatrix rc = restriction_cochain(m, c, hg, 2);
        const std::size_t kd = small.group.invariant_factors.size();
        std::vector<Vec> block(kd, Vec(ks, 0));
        for (std::size_t col = 0; col < ks; ++col) {
            Vec coords = small.classes.project(rc.mul_vec(out.h2.reps[col]));
            for (std::size_t i = 0; i < kd; ++i) block[i][col] = coords[i];
        }
        for (std::size_t i = 0; i < kd; ++i) {
            rows.push_back(std::move(block[i]));
            dst_mod.push_back(small.group.invariant_factors[i]);
        }
    }

    exactlin::Presentation dstp;
    dstp.ambient = rows.size();
    IntMatrix rel(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rel.set(i, i, dst_mod[i]);
    dstp.relations = std::move(rel);

    exactlin::AbHom hom{out.h2.presentation(), dstp, IntMatrix::from_rows(rows)};
    if (rows.empty()) hom.matrix = IntMatrix::zero(0, ks);
    auto analysis = exactlin::hom_analyze(hom, caps);
    out.group = analysis.kernel;
    out.coords = analysis.kernel.generators;
    for (const Vec& c : out.coords) out.reps.push_back(out.h2.classes.lift(c));
    return out;
}

// ---------------------------------------------------------------------------
// character <-> 2-cocycle translation

namespace {

// numerators of phi over denominator D for every element of h
std::vector<Int> phi_numerators(const gmod::AbelianizationData& ab, const Vec& chi,
                                std::size_t nelem, Int* denom) {
    Int D = 1;
    for (const auto& d : ab.moduli) D = exactlin::lcm(D, d);
    std::vector<Int> num(nelem, 0);
    for (std::size_t p = 0; p < nelem; ++p) {
        Int v = 0;
        for (std::size_t i = 0; i < ab.moduli.size(); ++i)
            v += chi[i] * ab.elem_coords.at(i, p) * (D / ab.moduli[i]);
        v %= D;
        if (v < 0) v += D;
        num[p] = v;
    }
    *denom = D;
    return num;
}

}  // namespace

Vec character_cocycle(const groups::FiniteGroup& g, const gmod::AbelianizationData& ab,
                      const Vec& chi) {
    const std::size_t N = g.order(), q = N - 1;
    if (chi.size() != ab.moduli.size())
        throw std::invalid_argument("character coordinate size mismatch");
    Int D;
    std::vector<Int> phi = phi_numerators(ab, chi, N, &D);
    Vec out(q * q, 0);
    for (std::size_t a = 1; a < N; ++a)
        for (std::size_t b = 1; b < N; ++b) {
            Int v = phi[a] + phi[b] - phi[g.mul((int)a, (int)b)];
            if (v % D != 0) throw std::logic_error("character cocycle not integral");
            out[(a - 1) * q + (b - 1)] = v / D;
        }
    return out;
}

Vec cocycle_character(const groups::FiniteGroup& g, const gmod::AbelianizationData& ab,
                      const Vec& cocycle) {
    const std::size_t N = g.order(), q = N - 1;
    if (cocycle.size() != q * q)
        throw std::invalid_argument("cocycle vector has wrong length");
    // phi(x) = (1/N) sum_y c(x, y); c vanishes when either argument is e
    std::vector<Int> phin(N, 0);
    for (std::size_t a = 1; a < N; ++a)
        for (std::size_t b = 1; b < N; ++b) phin[a] += cocycle[(a - 1) * q + (b - 1)];
    Vec chi(ab.moduli.size(), 0);
    for (std::size_t i = 0; i < ab.moduli.size(); ++i) {
        Int v = 0;
        for (std::size_t p = 0; p < N; ++p) v += ab.gen_reps[i][p] * phin[p];
        v *= ab.moduli[i];
        if (v % Int(N) != 0)
            throw std::invalid_argument("vector is not a 2-cocycle");
        v /= Int(N);
        v %= ab.moduli[i];
        if (v < 0) v += ab.moduli[i];
        chi[i] = v;
    }
    return chi;
}

// ---------------------------------------------------------------------------
// PermCohom

PermCohom::PermCohom(const groups::FiniteGroup& g, const groups::GSet& x,
                     const Caps& caps)
    : group_(&g), x_(x) {
    (void)caps;
    const std::size_t P = x.size();
    std::vector<char> seen(P, 0);
    for (std::size_t p0 = 0; p0 < P; ++p0) {
        if (seen[p0]) continue;
        Orbit orb;
        orb.points = x.orbit((int)p0);
        for (int pt : orb.points) seen[pt] = 1;
        orb.base = orb.points.front();  // orbit() returns sorted points
        orb.stab.parent = &g;
        for (std::size_t e = 0; e < g.order(); ++e)
            if (x.apply((int)e, orb.base) == orb.base) orb.stab.elements.push_back((int)e);
        orb.rep.assign(P, -1);
        for (std::size_t e = 0; e < g.order(); ++e) {
            int pt = x.apply((int)e, orb.base);
            if (orb.rep[pt] < 0) orb.rep[pt] = (int)e;
        }
        orb.ab = gmod::abelianization_data(g, orb.stab);
        orb.offset = moduli_.size();
        for (const auto& d : orb.ab.moduli) moduli_.push_back(d);
        orbits_.push_back(std::move(orb));
    }
}

exactlin::FinAb PermCohom::finab() const {
    exactlin::FinAb out;
    for (const auto& d : moduli_)
        out = exactlin::direct_sum(out, exactlin::FinAb::cyclic(d));
    return out;
}

exactlin::Presentation PermCohom::presentation() const {
    exactlin::Presentation p;
    p.ambient = moduli_.size();
    IntMatrix rel(moduli_.size(), moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) rel.set(i, i, moduli_[i]);
    p.relations = std::move(rel);
    return p;
}

std::size_t PermCohom::cochain_dim() const {
    const std::size_t N = group_->order();
    if (N == 1) return 0;
    return (N - 1) * (N - 1) * x_.size();
}

Vec PermCohom::project(const Vec& cocycle) const {
    const std::size_t N = group_->order(), q = N - 1, P = x_.size();
    if (cocycle.size() != cochain_dim())
        throw std::invalid_argument("cochain vector has wrong length");
    Vec out(moduli_.size(), 0);
    for (const Orbit& orb : orbits_) {
        const std::size_t nh = orb.stab.order();
        // small cocycle on the stabilizer: coefficient of the base point
        // phi(s) = (1/|H|) sum_t c(s, t)
        std::vector<Int> phin(nh, 0);
        for (std::size_t a = 1; a < nh; ++a)
            for (std::size_t b = 1; b < nh; ++b) {
                int ga = orb.stab.elements[a], gb = orb.stab.elements[b];
                std::size_t idx =
                    (((std::size_t)(ga - 1)) * q + (std::size_t)(gb - 1)) * P +
                    (std::size_t)orb.base;
                phin[a] += cocycle[idx];
            }
        for (std::size_t i = 0; i < orb.ab.moduli.size(); ++i) {
            Int v = 0;
            for (std::size_t p = 0; p < nh; ++p) v += orb.ab.gen_reps[i][p] * phin[p];
            v *= orb.ab.moduli[i];
            if (v % Int(nh) != 0)
                throw std::invalid_argument("vector is not a cocycle on a stabilizer");
            v /= Int(nh);
            v %= orb.ab.moduli[i];
            if (v < 0) v += orb.ab.moduli[i];
            out[orb.offset + i] = v;
        }
    }
    return out;
}

Vec PermCohom::rep(std::size_t k) const {
    const std::size_t N = group_->order(), q = N - 1, P = x_.size();
    if (k >= moduli_.size()) throw std::out_of_range("generator index");
    const Orbit* orb = nullptr;
    std::size_t local = 0;
    for (const Orbit& o : orbits_)
        if (k >= o.offset && k < o.offset + o.ab.moduli.size()) {
            orb = &o;
            local = k - o.offset;
        }
    const groups::FiniteGroup& G = *group_;
    const std::size_t nh = orb->stab.order();
    Vec chi(orb->ab.moduli.size(), 0);
    chi[local] = 1;
    Int D;
    std::vector<Int> phin = phi_numerators(orb->ab, chi, nh, &D);
    auto phi_of = [&](int hv) { return phin[orb->stab.position(hv)]; };

    Vec out(cochain_dim(), 0);
    for (std::size_t a = 1; a < N; ++a)
        for (std::size_t b = 1; b < N; ++b) {
            for (int p : orb->points) {
                int p1 = x_.apply((int)b, p);
                int p0 = x_.apply((int)a, p1);
                int h1 = G.mul(G.mul(G.inv(orb->rep[p0]), (int)a), orb->rep[p1]);
                int h2 = G.mul(G.mul(G.inv(orb->rep[p1]), (int)b), orb->rep[p]);
                Int v = phi_of(h1) + phi_of(h2) - phi_of(G.mul(h1, h2));
                if (v % D != 0) throw std::logic_error("transfer cocycle not integral");
                v /= D;
                if (v != 0) {
                    std::size_t idx = ((a - 1) * q + (b - 1)) * P + (std::size_t)p0;
                    out[idx] += v;
                }
            }
        }
    return out;
}

}  // namespace cohom
