#include "normbr/gmod.hpp"

#include <algorithm>
#include <map>

namespace gmod {

namespace {

bool same_group(const groups::FiniteGroup& a, const groups::FiniteGroup& b) {
    if (&a == &b) return true;
    if (a.order() != b.order()) return false;
    for (std::size_t x = 0; x < a.order(); ++x)
        for (std::size_t y = 0; y < a.order(); ++y)
            if (a.mul((int)x, (int)y) != b.mul((int)x, (int)y)) return false;
    return true;
}

std::string torsion_message(const std::vector<Int>& factors) {
    std::string s = "cokernel has torsion:";
    for (const auto& d : factors) s += " Z/" + d.str();
    return s;
}

}  // namespace

GLattice::GLattice(const groups::FiniteGroup& group, std::size_t rank,
                   std::vector<IntMatrix> action, std::vector<std::string> labels)
    : group_(&group), rank_(rank), action_(std::move(action)), labels_(std::move(labels)) {
    const std::size_t n = group.order();
    if (action_.size() != n)
        throw std::invalid_argument("lattice needs one action matrix per group element");
    for (const auto& m : action_)
        if (m.rows() != rank_ || m.cols() != rank_)
            throw std::invalid_argument("action matrix has wrong shape");
    if (labels_.empty()) {
        for (std::size_t i = 0; i < rank_; ++i) labels_.push_back("e" + std::to_string(i));
    } else if (labels_.size() != rank_) {
        throw std::invalid_argument("label count does not match rank");
    }
    const IntMatrix id = IntMatrix::identity(rank_);
    if (action_[0] != id) throw std::invalid_argument("identity must act trivially");
    // the homomorphism law implies unimodularity (rho(g) rho(g^-1) = I)
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t h = 0; h < n; ++h)
            if (action_[g].mul(action_[h]) != action_[group.mul((int)g, (int)h)])
                throw std::invalid_argument("lattice action is not a homomorphism");
}

bool GLattice::is_permutation() const {
    for (const auto& m : action_) {
        std::vector<char> seen(rank_, 0);
        bool ok = true;
        m.for_each([&](std::size_t r, std::size_t c, const Int& v) {
            (void)c;
            if (v != 1 || seen[r]++) ok = false;
        });
        if (!ok || m.nnz() != rank_) return false;
    }
    return true;
}

GLattice trivial_lattice(const groups::FiniteGroup& g, std::string label) {
    std::vector<IntMatrix> action(g.order(), IntMatrix::identity(1));
    return GLattice(g, 1, std::move(action), {std::move(label)});
}

GLattice perm_lattice(const groups::FiniteGroup& g, const groups::GSet& x) {
    const std::size_t p = x.size();
    std::vector<IntMatrix> action;
    for (std::size_t e = 0; e < g.order(); ++e) {
        IntMatrix m(p, p);
        for (std::size_t pt = 0; pt < p; ++pt) m.set(x.apply((int)e, (int)pt), pt, 1);
        action.push_back(std::move(m));
    }
    std::vector<std::string> labels = x.labels;
    return GLattice(g, p, std::move(action), std::move(labels));
}

groups::GSet subsets_gset(const groups::GSet& x, std::size_t d, std::size_t cap) {
    const std::size_t p = x.size();
    if (d < 1 || d > p) throw std::invalid_argument("subset size out of range");
    Int count = 1;
    for (std::size_t i = 0; i < d; ++i) count = count * Int(p - i) / Int(i + 1);
    if (count > Int(cap)) throw SubsetCapError(count.convert_to<std::size_t>(), cap);

    std::vector<std::vector<int>> subsets;
    std::vector<int> cur(d);
    for (std::size_t i = 0; i < d; ++i) cur[i] = (int)i;
    while (true) {
        subsets.push_back(cur);
        // next combination in lexicographic order
        int i = (int)d - 1;
        while (i >= 0 && cur[i] == (int)(p - d + i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (std::size_t j = i + 1; j < d; ++j) cur[j] = cur[j - 1] + 1;
    }
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < subsets.size(); ++i) index[subsets[i]] = (int)i;

    groups::GSet s;
    s.group = x.group;
    s.act.assign(x.group->order(), std::vector<int>(subsets.size()));
    for (std::size_t g = 0; g < x.group->order(); ++g)
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            std::vector<int> img;
            for (int pt : subsets[i]) img.push_back(x.apply((int)g, pt));
            std::sort(img.begin(), img.end());
            s.act[g][i] = index.at(img);
        }
    for (const auto& sub : subsets) {
        std::string lab = "{";
        for (std::size_t j = 0; j < sub.size(); ++j) {
            if (j) lab += ",";
            lab += x.labels.empty() ? std::to_string(sub[j]) : x.labels[sub[j]];
        }
        lab += "}";
        s.labels.push_back(std::move(lab));
    }
    s.check();
    return s;
}

GLattice tensor(const GLattice& a, const GLattice& b) {
    if (!same_group(a.group(), b.group()))
        throw std::invalid_argument("tensor factors live over different groups");
    const std::size_t ra = a.rank(), rb = b.rank(), r = ra * rb;
    std::vector<IntMatrix> action;
    for (std::size_t g = 0; g < a.group().order(); ++g) {
        IntMatrix m(r, r);
        a.act((int)g).for_each([&](std::size_t i, std::size_t j, const Int& u) {
            b.act((int)g).for_each([&](std::size_t k, std::size_t l, const Int& v) {
                m.set(i * rb + k, j * rb + l, u * v);
            });
        });
        action.push_back(std::move(m));
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t k = 0; k < rb; ++k)
            labels.push_back(a.labels()[i] + "⊗" + b.labels()[k]);
    return GLattice(a.group(), r, std::move(action), std::move(labels));
}

GLattice direct_sum(const std::vector<GLattice>& parts) {
    if (parts.empty()) throw std::invalid_argument("empty direct sum");
    const groups::FiniteGroup& grp = parts[0].group();
    std::size_t r = 0;
    for (const auto& p : parts) {
        if (!same_group(p.group(), grp))
            throw std::invalid_argument("direct sum parts live over different groups");
        r += p.rank();
    }
    std::vector<IntMatrix> action;
    for (std::size_t g = 0; g < grp.order(); ++g) {
        IntMatrix m(r, r);
        std::size_t off = 0;
        for (const auto& p : parts) {
            p.act((int)g).for_each([&](std::size_t i, std::size_t j, const Int& v) {
                m.set(off + i, off + j, v);
            });
            off += p.rank();
        }
        action.push_back(std::move(m));
    }
    std::vector<std::string> labels;
    for (const auto& p : parts)
        labels.insert(labels.end(), p.labels().begin(), p.labels().end());
    return GLattice(grp, r, std::move(action), std::move(labels));
}

LatticeMap::LatticeMap(GLattice src, GLattice dst, IntMatrix matrix)
    : src_(std::move(src)), dst_(std::move(dst)), matrix_(std::move(matrix)) {
    if (!same_group(src_.group(), dst_.group()))
        throw std::invalid_argument("lattice map between different groups");
    if (matrix_.rows() != dst_.rank() || matrix_.cols() != src_.rank())
        throw std::invalid_argument("lattice map matrix has wrong shape");
    for (std::size_t g = 0; g < src_.group().order(); ++g)
        if (dst_.act((int)g).mul(matrix_) != matrix_.mul(src_.act((int)g)))
            throw std::invalid_argument("lattice map is not equivariant at element " +
                                        std::to_string(g));
}

TorsionError::TorsionError(std::vector<Int> f)
    : std::runtime_error(torsion_message(f)), factors(std::move(f)) {}

CokernelLattice cokernel_lattice(const LatticeMap& f) {
    const IntMatrix& m = f.matrix();
    const std::size_t n = m.rows();
    if (exactlin::kernel_lattice(m).cols() != 0)
        throw std::invalid_argument("cokernel_lattice requires an injective map");
    auto snf = exactlin::smith_normal_form(m);
    const std::size_t r = snf.rank();
    std::vector<Int> torsion;
    for (const auto& d : snf.diagonal())
        if (d > 1 || d < -1) torsion.push_back(abs(d));
    if (!torsion.empty()) throw TorsionError(std::move(torsion));

    // quotient coordinates: rows r..n-1 of U; section: matching columns of U^-1
    IntMatrix proj(n - r, n);
    snf.U.for_each([&](std::size_t i, std::size_t j, const Int& v) {
        if (i >= r) proj.set(i - r, j, v);
    });
    exactlin::ColumnSolver usolve(snf.U);
    IntMatrix section(n, n - r);
    for (std::size_t j = r; j < n; ++j) {
        exactlin::Vec e(n, 0), x;
        e[j] = 1;
        if (!usolve.solve(e, &x)) throw std::logic_error("unimodular solve failed");
        for (std::size_t i = 0; i < n; ++i) section.set(i, j - r, x[i]);
    }

    std::vector<IntMatrix> action;
    for (std::size_t g = 0; g < f.src().group().order(); ++g)
        action.push_back(proj.mul(f.dst().act((int)g)).mul(section));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n - r; ++i) labels.push_back("q" + std::to_string(i));
    GLattice coker(f.src().group(), n - r, std::move(action), std::move(labels));
    LatticeMap pmap(f.dst(), coker, proj);
    return CokernelLattice{std::move(coker), std::move(pmap), std::move(section)};
}

FinGModule::FinGModule(const groups::FiniteGroup& group, std::vector<Int> moduli,
                       std::vector<IntMatrix> action, std::vector<std::string> labels)
    : group_(&group), moduli_(std::move(moduli)), action_(std::move(action)),
      labels_(std::move(labels)) {
    const std::size_t n = group.order(), k = moduli_.size();
    for (const auto& d : moduli_)
        if (d < 2) throw std::invalid_argument("moduli must be >= 2");
    if (action_.size() != n)
        throw std::invalid_argument("module needs one action matrix per group element");
    if (labels_.empty()) {
        for (std::size_t i = 0; i < k; ++i) labels_.push_back("chi" + std::to_string(i));
    } else if (labels_.size() != k) {
        throw std::invalid_argument("label count does not match generator count");
    }
    for (auto& m : action_) {
        if (m.rows() != k || m.cols() != k)
            throw std::invalid_argument("action matrix has wrong shape");
        // normalize entries into [0, d_i)
        IntMatrix red(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                Int v = m.at(i, j) % moduli_[i];
                if (v < 0) v += moduli_[i];
                red.set(i, j, v);
            }
        m = std::move(red);
    }
    // well-definedness: d_j * column j must vanish, i.e. d_i | d_j A_ij
    for (const auto& m : action_)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if ((m.at(i, j) * moduli_[j]) % moduli_[i] != 0)
                    throw std::invalid_argument("module action not well defined mod relations");
    auto congruent = [&](const IntMatrix& a, const IntMatrix& b) {
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if ((a.at(i, j) - b.at(i, j)) % moduli_[i] != 0) return false;
        return true;
    };
    if (!congruent(action_[0], IntMatrix::identity(k)))
        throw std::invalid_argument("identity must act trivially on module");
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t h = 0; h < n; ++h)
            if (!congruent(action_[g].mul(action_[h]), action_[group.mul((int)g, (int)h)]))
                throw std::invalid_argument("module action is not a homomorphism");
}

exactlin::FinAb FinGModule::abelian_group() const {
    exactlin::FinAb g;
    g.invariant_factors = moduli_;
    return g;
}

Int FinGModule::order() const {
    Int o = 1;
    for (const auto& d : moduli_) o *= d;
    return o;
}

exactlin::Vec FinGModule::reduce(exactlin::Vec v) const {
    if (v.size() != moduli_.size())
        throw std::invalid_argument("coordinate vector has wrong length");
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] %= moduli_[i];
        if (v[i] < 0) v[i] += moduli_[i];
    }
    return v;
}

FinGModule zero_module(const groups::FiniteGroup& g) {
    return FinGModule(g, {}, std::vector<IntMatrix>(g.order(), IntMatrix(0, 0)));
}

AbelianizationData abelianization_data(const groups::FiniteGroup& g,
                                       const groups::Subgroup& h) {
    const std::size_t nh = h.order();
    // H^ab as Z^|H| modulo e_a + e_b - e_{ab}
    IntMatrix rel(nh, nh * nh);
    std::size_t c = 0;
    for (std::size_t a = 0; a < nh; ++a)
        for (std::size_t b = 0; b < nh; ++b, ++c) {
            int x = h.elements[a], y = h.elements[b];
            std::size_t ab = (std::size_t)h.position(g.mul(x, y));
            rel.set(a, c, rel.at(a, c) + 1);
            rel.set(b, c, rel.at(b, c) + 1);
            rel.set(ab, c, rel.at(ab, c) - 1);
        }
    auto coker = exactlin::cokernel(rel, nh);
    AbelianizationData out;
    out.moduli = coker.group.invariant_factors;
    const std::size_t k = out.moduli.size();
    out.elem_coords = IntMatrix(k, nh);
    for (std::size_t p = 0; p < nh; ++p) {
        exactlin::Vec e(nh, 0);
        e[p] = 1;
        exactlin::Vec coords = coker.data.project(e);
        for (std::size_t i = 0; i < k; ++i) out.elem_coords.set(i, p, coords[i]);
    }
    for (std::size_t j = 0; j < k; ++j) {
        exactlin::Vec e(k, 0);
        e[j] = 1;
        out.gen_reps.push_back(coker.data.lift(e));
    }
    return out;
}

FinGModule dual_abelianization(const groups::FiniteGroup& g, const groups::Subgroup& h) {
    return dual_abelianization_data(g, h).module;
}

DualAbData dual_abelianization_data(const groups::FiniteGroup& g,
                                    const groups::Subgroup& h) {
    std::pair<int, int> w;
    if (!groups::is_normal(g, h, &w)) throw groups::NotNormalError(w.first, w.second);
    const std::size_t nh = h.order();
    AbelianizationData ab = abelianization_data(g, h);
    const auto& d = ab.moduli;
    const std::size_t k = d.size();

    std::vector<IntMatrix> action;
    for (std::size_t u = 0; u < g.order(); ++u) {
        // conjugation by u^-1 on H^ab, in canonical generator coordinates
        int ui = g.inv((int)u);
        IntMatrix a(k, k);
        for (std::size_t j = 0; j < k; ++j) {
            const exactlin::Vec& rep = ab.gen_reps[j];
            exactlin::Vec col(k, 0);
            for (std::size_t p = 0; p < nh; ++p) {
                if (rep[p] == 0) continue;
                int conj = g.conj(ui, h.elements[p]);
                std::size_t q = (std::size_t)h.position(conj);
                for (std::size_t i = 0; i < k; ++i)
                    col[i] += rep[p] * ab.elem_coords.at(i, q);
            }
            for (std::size_t i = 0; i < k; ++i) {
                Int v = col[i] % d[i];
                if (v < 0) v += d[i];
                a.set(i, j, v);
            }
        }
        // dual action on Hom(H^ab, Q/Z): B_ji = d_j * A_ij / d_i  (mod d_j)
        IntMatrix b(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                Int num = d[j] * a.at(i, j);
                if (num % d[i] != 0)
                    throw std::logic_error("dual action entry is not integral");
                b.set(j, i, num / d[i]);
            }
        action.push_back(std::move(b));
    }
    FinGModule mod(g, d, std::move(action));
    return DualAbData{std::move(mod), std::move(ab)};
}

}  // namespace gmod
