#include "normbr/normic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>

namespace normic {

namespace {

using exactlin::AbHom;
using exactlin::ColumnSolver;
using exactlin::HomAnalysis;
using exactlin::Presentation;
using exactlin::Subquotient;

groups::Subgroup sub(const groups::FiniteGroup& g, const std::vector<int>& elems) {
    return groups::Subgroup{&g, elems};
}

bool is_full(const groups::FiniteGroup& g, const std::vector<int>& elems) {
    return elems.size() == g.order();
}

// ---- small G-set algebra (bases of the permutation lattices) ----

groups::GSet point_gset(const groups::FiniteGroup& g, const std::string& label) {
    groups::GSet s;
    s.group = &g;
    s.act.assign(g.order(), std::vector<int>{0});
    s.labels = {label};
    return s;
}

groups::GSet gset_union(const groups::FiniteGroup& g,
                        const std::vector<groups::GSet>& parts) {
    groups::GSet s;
    s.group = &g;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    s.act.assign(g.order(), std::vector<int>(total, 0));
    std::size_t off = 0;
    for (const auto& p : parts) {
        for (std::size_t e = 0; e < g.order(); ++e)
            for (std::size_t x = 0; x < p.size(); ++x)
                s.act[e][off + x] = static_cast<int>(off) + p.act[e][x];
        for (const auto& lab : p.labels) s.labels.push_back(lab);
        off += p.size();
    }
    return s;
}

// pairs (a, b) indexed a * |B| + b, matching the tensor basis order
groups::GSet gset_product(const groups::GSet& a, const groups::GSet& b) {
    groups::GSet s;
    s.group = a.group;
    const std::size_t na = a.size(), nb = b.size();
    s.act.assign(a.group->order(), std::vector<int>(na * nb, 0));
    for (std::size_t e = 0; e < a.group->order(); ++e)
        for (std::size_t x = 0; x < na; ++x)
            for (std::size_t y = 0; y < nb; ++y)
                s.act[e][x * nb + y] = a.act[e][x] * static_cast<int>(nb) + b.act[e][y];
    s.labels.reserve(na * nb);
    for (std::size_t x = 0; x < na; ++x)
        for (std::size_t y = 0; y < nb; ++y)
            s.labels.push_back(a.labels[x] + "*" + b.labels[y]);
    return s;
}

groups::GSet prefixed(groups::GSet s, const std::string& prefix) {
    for (auto& lab : s.labels) lab = prefix + lab;
    return s;
}

// size-d subsets of 0..n-1 in lexicographic order of the sorted tuples;
// matches the point order of subsets_gset
std::vector<std::vector<int>> combinations(int n, int d) {
    std::vector<std::vector<int>> out;
    if (d < 0 || d > n) return out;
    std::vector<int> cur(d);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        int i = d - 1;
        while (i >= 0 && cur[i] == n - d + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < d; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

std::vector<long> divisors_gt1(long v) {
    std::vector<long> out;
    for (long d = 2; d <= v; ++d)
        if (v % d == 0) out.push_back(d);
    return out;
}

// check that elems is a sorted subgroup of g
void check_subgroup(const groups::FiniteGroup& g, const std::vector<int>& elems,
                    const std::string& what) {
    if (elems.empty() || !std::is_sorted(elems.begin(), elems.end()))
        throw HypothesisError(what + ": element list must be sorted and non-empty");
    for (int e : elems)
        if (e < 0 || static_cast<std::size_t>(e) >= g.order())
            throw HypothesisError(what + ": element out of range");
    auto cl = groups::subgroup_closure(g, elems);
    if (cl.elements != elems)
        throw HypothesisError(what + ": element list is not a subgroup");
}

Vec ones_vec(std::size_t n) { return Vec(n, Int(1)); }

IntMatrix diag_cols(const std::vector<Int>& moduli) {
    IntMatrix m(moduli.size(), moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) m.set(i, i, moduli[i]);
    return m;
}

IntMatrix cols_with_relations(std::size_t ambient, const std::vector<Vec>& gens,
                              const std::vector<Int>& moduli) {
    IntMatrix m(ambient, gens.size() + moduli.size());
    for (std::size_t c = 0; c < gens.size(); ++c)
        for (std::size_t r = 0; r < ambient; ++r)
            if (gens[c][r] != 0) m.set(r, c, gens[c][r]);
    for (std::size_t i = 0; i < moduli.size(); ++i)
        m.set(i, gens.size() + i, moduli[i]);
    return m;
}

Vec combine(const std::vector<Vec>& reps, const Vec& coeffs, std::size_t dim) {
    Vec out(dim, Int(0));
    for (std::size_t t = 0; t < reps.size(); ++t)
        if (t < coeffs.size() && coeffs[t] != 0)
            for (std::size_t i = 0; i < dim; ++i) out[i] += coeffs[t] * reps[t][i];
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// normalize
// ---------------------------------------------------------------------------

Normalized normalize(const ProblemSpec& spec) {
    const groups::FiniteGroup& g = spec.group;
    if (g.order() < 2) throw HypothesisError("splitting group must be non-trivial");
    Normalized out;
    out.spec = spec;
    auto& factors = out.spec.factors;
    auto& components = out.spec.components;

    if (components.empty()) throw HypothesisError("at least one component of K required");
    for (auto& c : components) check_subgroup(g, c, "component");
    if (spec.variant == Variant::X) {
        if (components.size() != 1 || components[0] != std::vector<int>{0})
            throw HypothesisError(
                "variant X requires K to be a Galois field: exactly one component "
                "with trivial subgroup");
    }
    std::size_t n = 0;
    for (const auto& c : components) n += g.order() / c.size();
    if (n < 2) throw HypothesisError("[K:k] must be at least 2");
    out.n = n;

    if (factors.empty()) throw HypothesisError("at least one factor of P required");
    for (auto& f : factors) {
        check_subgroup(g, f.v, "factor");
        if (f.e <= 0) throw HypothesisError("factor exponent must be positive");
        if (f.l < 1) throw HypothesisError("factor degree ratio l must be at least 1");
        Int r = f.e % Int(n);
        if (r == 0)
            throw HypothesisError(
                "factor exponent divisible by [K:k]: the factor contributes no "
                "singular stratum and the model does not cover it");
        if (r != f.e) {
            out.notes.push_back("reduced an exponent modulo [K:k]");
            f.e = r;
        }
    }
    // Distinct proper factors must be distinct subfields in this model; rational
    // factors (V = G) repeat freely since distinct roots share all invariants.
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (std::size_t j = i + 1; j < factors.size(); ++j)
            if (factors[i].v == factors[j].v && !is_full(g, factors[i].v))
                throw HypothesisError("duplicate proper factor subgroup");

    bool separable = std::all_of(factors.begin(), factors.end(),
                                 [](const Factor& f) { return f.e == 1; });
    if (spec.variant == Variant::X && separable) {
        // Separable system: l enters deg P, no synthetic factor needed.
        out.section3 = true;
        Int m = 0;
        for (const auto& f : factors) m += f.l * Int(g.order() / f.v.size());
        out.m = m;
        out.eprime3 = exactlin::gcd(Int(n), m);
        Int r = m % Int(n);
        if (r != 0) {
            out.delta = Int(n) - r;
            out.delta_prime = (m + out.delta) / Int(n);
            out.notes.push_back("deg P not divisible by [K:k]; using the affine chart bookkeeping");
        } else {
            out.delta = 0;
            out.delta_prime = m / Int(n);
        }
        return out;
    }

    for (const auto& f : factors)
        if (f.l != 1)
            throw HypothesisError("degree ratio l requires a separable variant-X spec");

    Int m = 0;
    for (const auto& f : factors) m += f.e * Int(g.order() / f.v.size());
    Int r = m % Int(n);
    if (r != 0) {
        Factor syn;
        syn.v.resize(g.order());
        std::iota(syn.v.begin(), syn.v.end(), 0);
        syn.e = Int(n) - r;
        syn.synthetic = true;
        factors.push_back(syn);
        m += syn.e;
        out.notes.push_back("appended a synthetic rational factor t^s to make deg P divisible by [K:k]");
    }
    out.m = m;
    for (const auto& f : factors) out.eprime.push_back(exactlin::gcd(f.e, Int(n)));
    return out;
}

// ---------------------------------------------------------------------------
// build_system
// ---------------------------------------------------------------------------

LatticeSystem build_system(const Normalized& norm, const Caps& caps,
                           std::size_t omega_cap) {
    auto gown = std::make_shared<const groups::FiniteGroup>(norm.spec.group);
    const groups::FiniteGroup& g = *gown;
    const auto& factors = norm.spec.factors;
    const std::size_t n = norm.n;
    const std::size_t s = factors.size();

    // Z_K: disjoint union of the component coset spaces.
    std::vector<groups::GSet> kparts;
    for (std::size_t j = 0; j < norm.spec.components.size(); ++j)
        kparts.push_back(prefixed(groups::cosets(g, sub(g, norm.spec.components[j])),
                                  "K" + std::to_string(j + 1) + ":"));
    groups::GSet xk = gset_union(g, kparts);
    if (xk.size() != n) throw std::logic_error("Z_K size mismatch");

    // Z_P: disjoint union of the factor coset spaces.
    std::vector<groups::GSet> pparts;
    std::vector<std::size_t> p_off(s), p_sz(s);
    {
        std::size_t off = 0;
        for (std::size_t i = 0; i < s; ++i) {
            auto cs = prefixed(groups::cosets(g, sub(g, factors[i].v)),
                               "L" + std::to_string(i + 1) + ":");
            p_off[i] = off;
            p_sz[i] = cs.size();
            off += cs.size();
            pparts.push_back(std::move(cs));
        }
    }
    groups::GSet xp = gset_union(g, pparts);

    // D and the offsets of its blocks.
    std::vector<groups::GSet> dparts;
    std::vector<std::size_t> tens_off(s);  // factor i tensor block, size p_sz[i] * n
    std::size_t running = 0;
    for (std::size_t i = 0; i < s; ++i) {
        auto t = gset_product(pparts[i], xk);
        tens_off[i] = running;
        running += t.size();
        dparts.push_back(std::move(t));
    }

    // Exceptional blocks. Section-2 systems carry, per factor, coset x subset
    // blocks; the separable X system carries one Z[K/k] copy and one subset
    // block (or a single trivial summand when [K:k] | deg P).
    struct OmegaBlock {
        std::size_t factor;      // owning factor (section-2 only)
        long d;                  // subset size
        std::size_t offset;      // first index in D
        std::size_t nsubsets;
        std::vector<std::vector<int>> members;
    };
    std::vector<OmegaBlock> omegas;
    std::size_t point_off = 0;   // Z block (section 2, and separable with n | m)
    std::size_t komp_off = 0;    // Z[K/k] block (separable with n not dividing m)
    bool have_point = false, have_komp = false;

    if (norm.section3) {
        if (norm.delta == 0) {
            point_off = running;
            have_point = true;
            running += 1;
            dparts.push_back(point_gset(g, "inf"));
        } else {
            komp_off = running;
            have_komp = true;
            running += n;
            dparts.push_back(prefixed(xk, "S:"));
            long d = static_cast<long>(norm.eprime3);
            auto sg = gmod::subsets_gset(xk, static_cast<std::size_t>(d), omega_cap);
            OmegaBlock b;
            b.factor = 0;
            b.d = d;
            b.offset = running;
            b.nsubsets = sg.size();
            b.members = combinations(static_cast<int>(n), static_cast<int>(d));
            if (b.members.size() != sg.size())
                throw std::logic_error("subset enumeration mismatch");
            running += sg.size();
            omegas.push_back(std::move(b));
            dparts.push_back(std::move(sg));
        }
    } else {
        point_off = running;
        have_point = true;
        running += 1;
        dparts.push_back(point_gset(g, "inf"));
        for (std::size_t i = 0; i < s; ++i) {
            long ep = static_cast<long>(norm.eprime[i]);
            std::vector<long> sizes;
            if (norm.spec.variant == Variant::XPrime)
                sizes = divisors_gt1(ep);
            else if (ep > 1)
                sizes = {ep};
            for (long d : sizes) {
                auto sg = gmod::subsets_gset(xk, static_cast<std::size_t>(d), omega_cap);
                auto blk = gset_product(pparts[i], sg);
                OmegaBlock b;
                b.factor = i;
                b.d = d;
                b.offset = running;
                b.nsubsets = sg.size();
                b.members = combinations(static_cast<int>(n), static_cast<int>(d));
                if (b.members.size() != sg.size())
                    throw std::logic_error("subset enumeration mismatch");
                running += blk.size();
                omegas.push_back(std::move(b));
                dparts.push_back(std::move(blk));
            }
        }
    }

    groups::GSet xd = gset_union(g, dparts);
    if (xd.size() != running) throw std::logic_error("D size mismatch");

    gmod::GLattice zk = gmod::perm_lattice(g, xk);
    gmod::GLattice zp = gmod::perm_lattice(g, xp);
    gmod::GLattice dlat = gmod::perm_lattice(g, xd);

    // f: Z_P -> D.
    IntMatrix fmat(running, xp.size());
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t t = 0; t < p_sz[i]; ++t) {
            const std::size_t col = p_off[i] + t;
            for (std::size_t sig = 0; sig < n; ++sig)
                fmat.set(tens_off[i] + t * n + sig, col, 1);
            if (norm.section3) {
                const Int li = factors[i].l;
                if (norm.delta == 0) {
                    fmat.set(point_off, col, -li);
                } else {
                    for (std::size_t sig = 0; sig < n; ++sig)
                        fmat.set(komp_off + sig, col, -li);
                    const auto& b = omegas[0];
                    for (std::size_t mI = 0; mI < b.nsubsets; ++mI)
                        fmat.set(b.offset + mI, col, -li);
                }
            } else {
                fmat.set(point_off, col, -1);
                for (const auto& b : omegas) {
                    if (b.factor != i) continue;
                    for (std::size_t mI = 0; mI < b.nsubsets; ++mI)
                        fmat.set(b.offset + t * b.nsubsets + mI, col, 1);
                }
            }
        }
    }

    // jhat: Z[K/k] -> D.
    IntMatrix jmat(running, n);
    for (std::size_t sig = 0; sig < n; ++sig) {
        if (norm.section3) {
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t t = 0; t < p_sz[i]; ++t)
                    jmat.set(tens_off[i] + t * n + sig, sig, -1);
            if (norm.delta == 0) {
                jmat.set(point_off, sig, norm.delta_prime);  // = m/n
            } else {
                for (std::size_t tau = 0; tau < n; ++tau)
                    jmat.set(komp_off + tau, sig,
                             norm.delta_prime - (tau == sig ? norm.delta : Int(0)));
                const auto& b = omegas[0];
                const Int dove = norm.delta / norm.eprime3;
                for (std::size_t mI = 0; mI < b.nsubsets; ++mI) {
                    bool contains = std::binary_search(b.members[mI].begin(),
                                                       b.members[mI].end(),
                                                       static_cast<int>(sig));
                    jmat.set(b.offset + mI, sig,
                             norm.delta_prime - (contains ? dove : Int(0)));
                }
            }
        } else {
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t t = 0; t < p_sz[i]; ++t)
                    jmat.set(tens_off[i] + t * n + sig, sig, -factors[i].e);
            jmat.set(point_off, sig, norm.m / Int(n));
            for (const auto& b : omegas) {
                const Int w = factors[b.factor].e / Int(b.d);
                for (std::size_t mI = 0; mI < b.nsubsets; ++mI) {
                    if (!std::binary_search(b.members[mI].begin(), b.members[mI].end(),
                                            static_cast<int>(sig)))
                        continue;
                    for (std::size_t t = 0; t < p_sz[b.factor]; ++t)
                        jmat.set(b.offset + t * b.nsubsets + mI, sig, -w);
                }
            }
        }
    }

    // Equivariance of both maps is verified by the LatticeMap constructors.
    gmod::LatticeMap f(zp, dlat, fmat);
    gmod::LatticeMap jcheck(zk, dlat, jmat);

    // v: Z -> Z_P making the square with the diagonal Z -> Z[K/k] commute.
    Vec vvec(xp.size(), Int(0));
    for (std::size_t i = 0; i < s; ++i) {
        const Int c = norm.section3 ? Int(1) : factors[i].e;
        for (std::size_t t = 0; t < p_sz[i]; ++t) vvec[p_off[i] + t] = -c;
    }
    if (jmat.mul_vec(ones_vec(n)) != fmat.mul_vec(vvec))
        throw std::logic_error("divisor map is incompatible with the boundary map");

    gmod::CokernelLattice tprime = gmod::cokernel_lattice(f);
    gmod::CokernelLattice that = gmod::cokernel_lattice(gmod::LatticeMap(
        gmod::trivial_lattice(g), zk, IntMatrix::col_vector(ones_vec(n))));

    IntMatrix jbar_m = tprime.projection.matrix().mul(jmat).mul(that.section);
    if (jbar_m.mul(that.projection.matrix()) != tprime.projection.matrix().mul(jmat))
        throw std::logic_error("descended divisor map fails to commute");
    gmod::LatticeMap jbar(that.lattice, tprime.lattice, jbar_m);

    (void)jcheck;
    (void)caps;
    return LatticeSystem{norm,          std::move(gown), std::move(xk),   std::move(xp),
                         std::move(xd), std::move(zk),   std::move(zp),   std::move(dlat),
                         std::move(f),  std::move(jmat), std::move(vvec), std::move(tprime),
                         std::move(that), std::move(jbar)};
}

// ---------------------------------------------------------------------------
// vertical part
// ---------------------------------------------------------------------------

namespace {

// Degree-2 class coordinates of permutation-lattice cohomology plus the means
// to map cocycles in and out, uniform over the two computation paths.
struct H2View {
    std::vector<Int> moduli;
    std::vector<Vec> reps;  // cochain representatives of the coordinate generators
    std::function<Vec(const Vec&)> project;

    Presentation presentation() const {
        return Presentation{moduli.size(), diag_cols(moduli)};
    }
    Vec rep_of(const Vec& coords, std::size_t dim) const {
        return combine(reps, coords, dim);
    }
};

H2View shapiro_view(const cohom::PermCohom& pc) {
    H2View v;
    v.moduli = pc.moduli();
    for (std::size_t k = 0; k < pc.ngens(); ++k) v.reps.push_back(pc.rep(k));
    v.project = [&pc](const Vec& z) { return pc.project(z); };
    return v;
}

H2View generic_view(std::shared_ptr<cohom::CohomGroup> h) {
    H2View v;
    for (const Int& d : h->group.invariant_factors) v.moduli.push_back(d);
    for (std::size_t k = 0; k < h->group.free_rank; ++k) v.moduli.push_back(0);
    v.reps = h->reps;
    v.project = [h](const Vec& z) { return h->classes.project(z); };
    return v;
}

// Matrix of a cochain-level map in class coordinates.
IntMatrix class_matrix(const H2View& src, const H2View& dst, const IntMatrix& cochain) {
    std::vector<Vec> cols;
    for (const auto& r : src.reps) cols.push_back(dst.project(cochain.mul_vec(r)));
    IntMatrix m(dst.moduli.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < cols[c].size(); ++r)
            if (cols[c][r] != 0) m.set(r, c, cols[c][r]);
    return m;
}

}  // namespace

VerticalPart vertical_part(const LatticeSystem& sys, Path path, const Caps& caps) {
    const groups::FiniteGroup& g = sys.group();
    cohom::Module mz = cohom::Module::trivial_z(g);
    cohom::Module mp = cohom::Module::lattice(sys.zp);
    cohom::Module mk = cohom::Module::lattice(sys.zk);
    cohom::Module md = cohom::Module::lattice(sys.d);

    VerticalPart out;

    H2View hz, hk, hp, hd;
    std::optional<cohom::PermCohom> pcz, pck, pcp, pcd;
    if (path == Path::Shapiro) {
        pcz.emplace(g, point_gset(g, "pt"), caps);
        pck.emplace(g, sys.xk, caps);
        pcp.emplace(g, sys.xp, caps);
        pcd.emplace(g, sys.xd, caps);
        hz = shapiro_view(*pcz);
        hk = shapiro_view(*pck);
        hp = shapiro_view(*pcp);
        hd = shapiro_view(*pcd);
        for (const auto& orb : pcp->orbits()) {
            out.factor_offsets.push_back(orb.offset);
        }
        for (std::size_t i = 0; i < sys.norm.spec.factors.size(); ++i)
            out.factor_names.push_back(sys.norm.spec.factors[i].synthetic
                                           ? std::string("Ls")
                                           : "L" + std::to_string(i + 1));
        out.has_characters = true;
    } else {
        hz = generic_view(std::make_shared<cohom::CohomGroup>(cohom::cohomology(mz, 2, caps)));
        hk = generic_view(std::make_shared<cohom::CohomGroup>(cohom::cohomology(mk, 2, caps)));
        hp = generic_view(std::make_shared<cohom::CohomGroup>(cohom::cohomology(mp, 2, caps)));
        hd = generic_view(std::make_shared<cohom::CohomGroup>(cohom::cohomology(md, 2, caps)));
    }

    // numerator: kernel of H^2(Z_P) -> H^2(D)
    IntMatrix icf = cohom::induced_cochain(cohom::ModuleMap::of(sys.f), 2);
    AbHom to_d{hp.presentation(), hd.presentation(), class_matrix(hp, hd, icf)};
    HomAnalysis han = exactlin::hom_analyze(to_d, caps);
    std::vector<Vec> num = han.kernel.generators;

    // denominator: image of Ker[H^2(Z) -> H^2(Z[K/k])] under 1 -> vvec
    gmod::GLattice zlat = gmod::trivial_lattice(g);
    IntMatrix diag_col = IntMatrix::col_vector(ones_vec(sys.zk.rank()));
    IntMatrix icdiag = cohom::induced_cochain(
        cohom::ModuleMap::of(gmod::LatticeMap(zlat, sys.zk, diag_col)), 2);
    AbHom to_k{hz.presentation(), hk.presentation(), class_matrix(hz, hk, icdiag)};
    HomAnalysis hanz = exactlin::hom_analyze(to_k, caps);

    IntMatrix icv = cohom::induced_cochain(
        cohom::ModuleMap::of(gmod::LatticeMap(zlat, sys.zp, IntMatrix::col_vector(sys.vvec))),
        2);
    const std::size_t czdim = icv.cols();
    std::vector<Vec> den;
    for (const auto& ker : hanz.kernel.generators)
        den.push_back(hp.project(icv.mul_vec(hz.rep_of(ker, czdim))));

    const std::size_t amb = hp.moduli.size();
    Subquotient v(amb, cols_with_relations(amb, num, hp.moduli),
                  cols_with_relations(amb, den, hp.moduli), caps);
    out.group = v.group();
    out.psi = v.group().generators;
    out.psi_moduli = hp.moduli;
    return out;
}

std::vector<std::string> psi_characters(const VerticalPart& v) {
    std::vector<std::string> out;
    if (!v.has_characters) return out;
    for (const auto& gen : v.psi) {
        std::ostringstream line;
        bool first = true;
        for (std::size_t i = 0; i < v.factor_offsets.size(); ++i) {
            std::size_t lo = v.factor_offsets[i];
            std::size_t hi = (i + 1 < v.factor_offsets.size()) ? v.factor_offsets[i + 1]
                                                               : v.psi_moduli.size();
            bool nonzero = false;
            for (std::size_t c = lo; c < hi; ++c)
                if (gen[c] % v.psi_moduli[c] != 0) nonzero = true;
            if (!nonzero) continue;
            if (!first) line << " + ";
            first = false;
            line << "Cor_{" << v.factor_names[i] << "/k}(t - eta" << i + 1 << ", (";
            for (std::size_t c = lo; c < hi; ++c) {
                if (c > lo) line << ", ";
                Int val = gen[c] % v.psi_moduli[c];
                if (val < 0) val += v.psi_moduli[c];
                line << val << "/" << v.psi_moduli[c];
            }
            line << "))";
        }
        out.push_back(first ? std::string("0") : line.str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sha kernel
// ---------------------------------------------------------------------------

ShaKernel sha_kernel(const LatticeSystem& sys, const Caps& caps) {
    cohom::Module mt = cohom::Module::lattice(sys.that.lattice);
    cohom::Module mtp = cohom::Module::lattice(sys.tprime.lattice);
    cohom::Sha2 sha = cohom::sha2_omega(mt, caps);

    ShaKernel out;
    out.sha = sha.group;
    const std::size_t k = sha.reps.size();
    if (k == 0) {
        out.kernel = FinAb::trivial();
        return out;
    }

    IntMatrix icj = cohom::induced_cochain(
        cohom::ModuleMap(mt, mtp, sys.jbar.matrix()), 2);
    std::vector<Vec> images;
    for (const auto& r : sha.reps) images.push_back(icj.mul_vec(r));
    IntMatrix r(images[0].size(), k);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t i = 0; i < images[c].size(); ++i)
            if (images[c][i] != 0) r.set(i, c, images[c][i]);

    cohom::CochainComplex cxp(mtp, 1, caps);
    IntMatrix ker = exactlin::kernel_lattice(r.hstack(cxp.d(1).negated()), caps);
    std::vector<Vec> sol;
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        Vec col(k, Int(0));
        for (std::size_t i = 0; i < k; ++i) col[i] = ker.at(i, c);
        sol.push_back(std::move(col));
    }
    std::vector<Int> moduli = sha.group.invariant_factors;
    Subquotient w(k, cols_with_relations(k, sol, moduli),
                  cols_with_relations(k, std::vector<Vec>{}, moduli), caps);
    out.kernel = w.group();
    return out;
}

FinAb sha_kernel_via_sha(const LatticeSystem& sys, const Caps& caps) {
    cohom::Module mt = cohom::Module::lattice(sys.that.lattice);
    cohom::Module mtp = cohom::Module::lattice(sys.tprime.lattice);
    cohom::Sha2 sha = cohom::sha2_omega(mt, caps);
    if (sha.reps.empty()) return FinAb::trivial();
    cohom::Sha2 shap = cohom::sha2_omega(mtp, caps);
    IntMatrix icj = cohom::induced_cochain(
        cohom::ModuleMap(mt, mtp, sys.jbar.matrix()), 2);

    // Map Sha^2(T) into H^2(T') coordinates; the image must lie in the
    // subgroup Sha^2(T') (verified), and the kernel is read off there.
    std::vector<Vec> images;
    for (const auto& r : sha.reps)
        images.push_back(shap.h2.classes.project(icj.mul_vec(r)));

    std::vector<Int> big_moduli;
    for (const Int& d : shap.h2.group.invariant_factors) big_moduli.push_back(d);
    for (std::size_t i = 0; i < shap.h2.group.free_rank; ++i) big_moduli.push_back(0);
    ColumnSolver inside(cols_with_relations(big_moduli.size(), shap.coords, big_moduli),
                        caps);
    for (const auto& img : images)
        if (!inside.solve(img))
            throw std::logic_error("Sha image escapes the target Sha subgroup");

    AbHom h{Presentation{sha.group.invariant_factors.size(),
                         diag_cols(sha.group.invariant_factors)},
            Presentation{big_moduli.size(), diag_cols(big_moduli)},
            IntMatrix::from_cols(images)};
    return exactlin::hom_analyze(h, caps).kernel;
}

// ---------------------------------------------------------------------------
// colliot-thelene/harari-sansuc style smooth compactification quotient
// ---------------------------------------------------------------------------

FinAb cths_quotient(const Normalized& norm, const Caps& caps) {
    const groups::FiniteGroup& g = norm.spec.group;
    if (norm.spec.variant != Variant::X)
        throw HypothesisError("full compactification quotient requires variant X");
    // H fixes the compositum of the root fields: intersect the factor subgroups
    std::vector<int> inter;
    bool first = true;
    for (const auto& fac : norm.spec.factors) {
        if (fac.synthetic) continue;
        if (first) {
            inter = fac.v;
            first = false;
            continue;
        }
        std::vector<int> next;
        for (int x : inter)
            if (std::find(fac.v.begin(), fac.v.end(), x) != fac.v.end())
                next.push_back(x);
        inter = std::move(next);
    }
    if (first)
        throw HypothesisError("full compactification quotient needs a factor");
    groups::Subgroup h = sub(g, inter);
    if (!groups::is_normal(g, h))
        throw HypothesisError("factor subgroup must be normal");
    // G/[H,H] abelian <=> [G,G] inside [H,H]
    std::vector<int> hcomm_gens;
    for (int a : h.elements)
        for (int b : h.elements)
            hcomm_gens.push_back(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
    groups::Subgroup hcomm = groups::subgroup_closure(g, hcomm_gens);
    for (std::size_t a = 0; a < g.order(); ++a)
        for (std::size_t b = 0; b < g.order(); ++b) {
            int c = g.mul(g.mul(static_cast<int>(a), static_cast<int>(b)),
                          g.mul(g.inv(static_cast<int>(a)), g.inv(static_cast<int>(b))));
            if (!hcomm.contains(c))
                throw HypothesisError("G modulo [H,H] must be abelian");
        }
    cohom::InducedMap res =
        cohom::restriction(cohom::Module::trivial_z(g), h, 3, caps);
    return exactlin::hom_analyze(res.map, caps).kernel;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

namespace {

// n with G dihedral of order 2n and v its rotation-type subgroup
std::optional<long> dihedral_shape(const groups::FiniteGroup& g,
                                   const std::vector<int>& v) {
    if (v.size() * 2 != g.order() || v.size() < 2) return std::nullopt;
    groups::Subgroup h{&g, v};
    if (!groups::is_normal(g, h)) return std::nullopt;
    bool cyclic = false;
    for (int x : v)
        if (g.element_order(x) == static_cast<int>(v.size())) cyclic = true;
    if (!cyclic) return std::nullopt;
    for (std::size_t x = 0; x < g.order(); ++x)
        if (!h.contains(static_cast<int>(x)) &&
            g.mul(static_cast<int>(x), static_cast<int>(x)) != 0)
            return std::nullopt;
    return static_cast<long>(v.size());
}

}  // namespace

BrauerReport brauer_report(const ProblemSpec& spec, Path path, const Caps& caps,
                           std::size_t omega_cap) {
    Normalized norm = normalize(spec);
    LatticeSystem sys = build_system(norm, caps, omega_cap);
    VerticalPart v = vertical_part(sys, path, caps);
    ShaKernel w = sha_kernel(sys, caps);

    BrauerReport rep;
    rep.name = spec.name;
    rep.n = norm.n;
    rep.m = norm.m;
    rep.variant = spec.variant;
    rep.v = v.group;
    rep.w = w.kernel;
    rep.notes = norm.notes;
    if (!rep.v.is_finite() || !rep.w.is_finite())
        throw std::logic_error("Brauer quotient came out infinite");
    rep.order = rep.v.order() * rep.w.order();
    rep.generators = psi_characters(v);

    if (rep.w.is_trivial()) {
        rep.exact_group = rep.v;
    } else if (rep.v.is_trivial()) {
        rep.exact_group = rep.w;
    } else if (norm.section3 && norm.spec.factors.size() == 1) {
        auto nn = dihedral_shape(norm.spec.group, norm.spec.factors[0].v);
        if (nn) {
            Int l = norm.spec.factors[0].l;
            // Z/nn when nn odd or v2(l) >= v2(nn), else Z/(nn/2)
            long v2n = 0, v2l = 0;
            for (long t = *nn; t % 2 == 0; t /= 2) ++v2n;
            for (Int t = l; t % 2 == 0; t /= 2) ++v2l;
            Int total = (v2n == 0 || v2l >= v2n) ? Int(*nn) : Int(*nn / 2);
            if (total == rep.order) {
                rep.exact_group = FinAb::cyclic(total);
                rep.notes.push_back("group structure from the dihedral closed form");
            } else {
                rep.notes.push_back("dihedral closed form disagrees with |V||W|; left open");
            }
        } else {
            rep.notes.push_back("extension of W by V not determined");
        }
    } else {
        rep.notes.push_back("extension of W by V not determined");
    }

    if (spec.variant == Variant::X) {
        try {
            rep.cths = cths_quotient(norm, caps);
        } catch (const HypothesisError&) {
            // hypotheses not met; leave the field empty
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// base change
// ---------------------------------------------------------------------------

ProblemSpec restrict_problem(const ProblemSpec& spec, const std::vector<int>& gens) {
    const groups::FiniteGroup& g = spec.group;
    groups::Subgroup gp = groups::subgroup_closure(g, gens);
    groups::FiniteGroup gg = groups::as_group(gp);

    auto split = [&](const std::vector<int>& subgroup_elems)
        -> std::vector<std::vector<int>> {
        groups::GSet cs = groups::cosets(g, groups::Subgroup{&g, subgroup_elems});
        std::vector<bool> seen(cs.size(), false);
        std::vector<std::vector<int>> parts;
        for (std::size_t p = 0; p < cs.size(); ++p) {
            if (seen[p]) continue;
            std::vector<int> orbit{static_cast<int>(p)};
            seen[p] = true;
            for (std::size_t q = 0; q < orbit.size(); ++q)
                for (int x : gp.elements) {
                    int y = cs.apply(x, orbit[q]);
                    if (!seen[y]) {
                        seen[y] = true;
                        orbit.push_back(y);
                    }
                }
            int base = *std::min_element(orbit.begin(), orbit.end());
            std::vector<int> stab;
            for (int x : gp.elements)
                if (cs.apply(x, base) == base) stab.push_back(gp.position(x));
            std::sort(stab.begin(), stab.end());
            parts.push_back(std::move(stab));
        }
        return parts;
    };

    ProblemSpec out;
    out.name = spec.name + "|restricted";
    out.group = std::move(gg);
    out.variant = spec.variant;
    for (const auto& c : spec.components)
        for (auto& part : split(c)) out.components.push_back(std::move(part));
    for (const auto& f : spec.factors)
        for (auto& part : split(f.v)) {
            Factor nf;
            nf.v = std::move(part);
            nf.e = f.e;
            nf.l = f.l;  // carried through; exact only when the root field splits along
            nf.synthetic = f.synthetic;
            out.factors.push_back(std::move(nf));
        }
    return out;
}

}  // namespace normic
