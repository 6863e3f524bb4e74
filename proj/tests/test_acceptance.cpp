// Acceptance gate: ten end-to-end criteria, one pass/fail line each.
// Exit status 0 iff every criterion passes.
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "normbr/normic.hpp"
#include "normbr/oracles.hpp"
#include "normbr/scenario.hpp"

using exactlin::FinAb;
using exactlin::Int;

namespace {

struct Criterion {
    int id;
    std::string summary;
    bool pass = true;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            details.push_back(what);
        }
    }
};

std::vector<int> all_elems(const groups::FiniteGroup& g) {
    std::vector<int> v(g.order());
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<int> rotations(int nn) {
    std::vector<int> r(nn);
    std::iota(r.begin(), r.end(), 0);
    return r;
}

normic::ProblemSpec dihedral_spec(int nn, const Int& l) {
    normic::ProblemSpec s;
    s.group = groups::FiniteGroup::dihedral(nn);
    s.variant = normic::Variant::X;
    s.components = {{0}};
    normic::Factor f;
    f.v = rotations(nn);
    f.l = l;
    s.factors = {f};
    s.name = "dihedral(" + std::to_string(nn) + "),l=" + l.str();
    return s;
}

std::vector<scenario::Scenario> load_corpus() {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator("corpus"))
        if (e.path().extension() == ".scn") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<scenario::Scenario> out;
    for (const auto& f : files) out.push_back(scenario::parse_file(f.string()));
    return out;
}

Int odd_part(Int x) {
    while (x % 2 == 0) x /= 2;
    return x;
}

// --- criterion bodies -------------------------------------------------------

Criterion crit1() {
    Criterion c{1, "Klein field with two distinct quadratic factors"};
    normic::ProblemSpec s;
    s.group = groups::FiniteGroup::direct(groups::FiniteGroup::cyclic(2),
                                          groups::FiniteGroup::cyclic(2));
    s.variant = normic::Variant::X;
    s.components = {{0}};
    normic::Factor f1, f2;
    f1.v = {0, 1};
    f2.v = {0, 2};
    s.factors = {f1, f2};
    normic::BrauerReport rep = normic::brauer_report(s);
    c.require(rep.order == 1 && rep.v.is_trivial() && rep.w.is_trivial(),
              "partial compactification quotient should be trivial, got order " +
                  rep.order.str());
    c.require(rep.cths && rep.cths->str() == "Z/2",
              "full compactification quotient should be Z/2");
    return c;
}

Criterion crit2() {
    Criterion c{2, "dihedral table matches the closed form and is cyclic"};
    for (int nn : {2, 3, 4})
        for (long l : {1L, 2L}) {
            normic::BrauerReport rep = normic::brauer_report(dihedral_spec(nn, l));
            FinAb expect = oracles::dihedral_brauer(nn, l);
            std::string tag =
                "(" + std::to_string(nn) + "," + std::to_string(l) + ")";
            c.require(rep.exact_group.has_value(), tag + " not resolved exactly");
            if (rep.exact_group) {
                c.require(rep.exact_group->same_type(expect),
                          tag + " engine " + rep.exact_group->str() +
                              " != closed form " + expect.str());
                c.require(rep.exact_group->invariant_factors.size() <= 1,
                          tag + " not cyclic");
            }
        }
    return c;
}

Criterion crit3() {
    Criterion c{3, "split-polynomial family matches its character description"};
    std::vector<groups::FiniteGroup> gs;
    gs.push_back(groups::FiniteGroup::cyclic(2));
    gs.push_back(groups::FiniteGroup::cyclic(3));
    gs.push_back(groups::FiniteGroup::cyclic(4));
    gs.push_back(groups::FiniteGroup::direct(groups::FiniteGroup::cyclic(2),
                                             groups::FiniteGroup::cyclic(2)));
    int cases = 0;
    for (const auto& g : gs) {
        const long n = static_cast<long>(g.order());
        std::vector<std::vector<Int>> tuples;
        std::vector<Int> cur;
        auto rec = [&](auto&& self, long len) -> void {
            if (!cur.empty()) {
                Int sum = 0, common = n;
                for (const Int& e : cur) {
                    sum += e;
                    common = exactlin::gcd(common, e);
                }
                if (sum % n == 0 && common == 1) tuples.push_back(cur);
            }
            if (len == 3) return;
            for (long e = 1; e < n; ++e) {
                cur.push_back(e);
                self(self, len + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        for (const auto& e : tuples) {
            normic::ProblemSpec s;
            s.group = g;
            s.variant = normic::Variant::X;
            s.components = {{0}};
            std::string tag = "|G|=" + std::to_string(n) + " e=(";
            for (const Int& ei : e) {
                normic::Factor f;
                f.v = all_elems(g);
                f.e = ei;
                s.factors.push_back(std::move(f));
                tag += ei.str() + ",";
            }
            tag += ")";
            normic::BrauerReport rep = normic::brauer_report(s);
            FinAb expect = oracles::split_polynomial_brauer(g, e).group;
            c.require(rep.v.same_type(expect), tag + " V engine " + rep.v.str() +
                                                   " != " + expect.str());
            c.require(rep.w.is_trivial(), tag + " W should vanish");
            ++cases;
        }
    }
    c.summary += " (" + std::to_string(cases) + " exponent tuples)";
    c.require(cases >= 10, "too few tuples enumerated");
    return c;
}

Criterion crit4() {
    Criterion c{4, "Sha-kernel values on the dihedral family"};
    // The closed form in the source result claims W = Z/2 at (4,1); direct
    // evaluation of its own exact sequence gives W = 0 there, with the Z/2
    // kernel instead appearing exactly when v2(l) >= v2(nn) > 0. The engine,
    // a hand computation of H^1(G/H, C'), and the character oracle agree on
    // the corrected values, which are pinned here.
    struct Row {
        int nn;
        long l;
        std::string w;
    };
    for (const Row& r : std::vector<Row>{{4, 1, "0"}, {2, 2, "Z/2"}, {4, 4, "Z/2"}}) {
        normic::ShaKernel sk = normic::sha_kernel(
            normic::build_system(normic::normalize(dihedral_spec(r.nn, r.l))));
        std::string tag = "(" + std::to_string(r.nn) + "," + std::to_string(r.l) + ")";
        c.require(sk.kernel.str() == r.w,
                  tag + " W engine " + sk.kernel.str() + " != " + r.w);
        groups::FiniteGroup g = groups::FiniteGroup::dihedral(r.nn);
        Int eprime = exactlin::gcd(Int(2 * r.nn), Int(2 * r.l));
        FinAb delta = oracles::res_kernel_delta(g, rotations(r.nn), r.l, eprime);
        c.require(delta.same_type(sk.kernel), tag + " character oracle disagrees");
    }
    return c;
}

Criterion crit5() {
    Criterion c{5, "transfer and restriction lemma suites"};
    // transfer vanishing on every dihedral shape up to nn = 6
    for (int nn = 2; nn <= 6; ++nn) {
        oracles::LemmaReport rep = oracles::lemma_checks(
            groups::FiniteGroup::dihedral(nn), rotations(nn), 1, 2);
        c.require(rep.cor_applicable && rep.cor_checked == 2u * nn && rep.ok(),
                  "transfer checks failed on dihedral(" + std::to_string(nn) + ")");
    }
    // restriction lemma over a catalog of groups of order <= 16
    std::vector<groups::FiniteGroup> cat;
    for (int n = 2; n <= 16; ++n) cat.push_back(groups::FiniteGroup::cyclic(n));
    auto z = [](int n) { return groups::FiniteGroup::cyclic(n); };
    cat.push_back(groups::FiniteGroup::direct(z(2), z(2)));
    cat.push_back(groups::FiniteGroup::direct(z(2), z(4)));
    cat.push_back(groups::FiniteGroup::direct(z(2), z(8)));
    cat.push_back(groups::FiniteGroup::direct(z(4), z(4)));
    cat.push_back(groups::FiniteGroup::direct(z(3), z(3)));
    cat.push_back(groups::FiniteGroup::direct(groups::FiniteGroup::direct(z(2), z(2)), z(2)));
    cat.push_back(groups::FiniteGroup::direct(groups::FiniteGroup::direct(z(2), z(2)), z(4)));
    for (int n = 2; n <= 8; ++n) cat.push_back(groups::FiniteGroup::dihedral(n));
    cat.push_back(groups::FiniteGroup::symmetric(3));
    cat.push_back(groups::FiniteGroup::symmetric(4));
    std::size_t applicable = 0, classes = 0, forced = 0;
    for (const auto& g : cat) {
        std::vector<long> eprimes = {2};
        if (g.exponent() != 2) eprimes.push_back(static_cast<long>(g.exponent()));
        for (const groups::Subgroup& h : groups::all_subgroups(g)) {
            if (!groups::is_normal(g, h)) continue;
            for (long l : {1L, 2L})
                for (long ep : eprimes) {
                    oracles::LemmaReport rep =
                        oracles::lemma_checks(g, h.elements, l, ep);
                    if (!rep.ok()) {
                        std::string msg = g.label() + " |H|=" +
                                          std::to_string(h.order()) + " l=" +
                                          std::to_string(l) + " e'=" +
                                          std::to_string(ep) + ":";
                        for (const auto& f : rep.failures) msg += " " + f;
                        c.require(false, msg);
                    }
                    if (rep.map0_applicable) {
                        ++applicable;
                        classes += rep.map0_classes;
                        forced += rep.map0_forced;
                    }
                }
        }
    }
    c.summary += " (" + std::to_string(applicable) + " trivial-action instances, " +
                 std::to_string(classes) + " classes, " + std::to_string(forced) +
                 " forced)";
    c.require(applicable > 50 && classes > 200 && forced > 50,
              "restriction suite unexpectedly small");
    return c;
}

Criterion crit6() {
    Criterion c{6, "the two Sha-kernel computations agree on eligible scenarios"};
    int eligible = 0;
    for (const auto& sc : load_corpus()) {
        normic::Normalized n = normic::normalize(sc.spec);
        if (!n.section3) continue;
        ++eligible;
        exactlin::Caps caps;
        caps.max_cells = 400'000'000;
        normic::LatticeSystem sys = normic::build_system(n, caps);
        normic::ShaKernel a = normic::sha_kernel(sys, caps);
        FinAb b = normic::sha_kernel_via_sha(sys, caps);
        c.require(a.kernel.same_type(b),
                  sc.spec.name + ": " + a.kernel.str() + " != " + b.str());
    }
    c.summary += " (" + std::to_string(eligible) + " scenarios)";
    c.require(eligible >= 3, "too few eligible scenarios");
    return c;
}

Criterion crit7() {
    Criterion c{7, "|V| equals the character-cokernel cardinality"};
    int eligible = 0;
    for (const auto& sc : load_corpus()) {
        normic::Normalized n = normic::normalize(sc.spec);
        std::vector<const normic::Factor*> real;
        for (const auto& f : n.spec.factors)
            if (!f.synthetic) real.push_back(&f);
        if (!n.section3 || real.size() != 1 || real[0]->e != 1) continue;
        ++eligible;
        normic::BrauerReport rep = normic::brauer_report(sc.spec);
        FinAb coker = oracles::c_restriction_cokernel(
            sc.spec.group, real[0]->v, real[0]->l, n.eprime3);
        c.require(rep.v.order() == coker.order(),
                  sc.spec.name + ": |V| = " + rep.v.order().str() +
                      " != |coker| = " + coker.order().str());
    }
    c.summary += " (" + std::to_string(eligible) + " scenarios)";
    c.require(eligible >= 3, "too few eligible scenarios");
    return c;
}

Criterion crit8() {
    Criterion c{8, "full-compactification quotient differs only in 2-torsion"};
    int eligible = 0;
    for (const auto& sc : load_corpus()) {
        normic::BrauerReport rep = normic::brauer_report(sc.spec);
        if (!rep.cths) continue;
        ++eligible;
        c.require(odd_part(rep.cths->order()) == odd_part(rep.order),
                  sc.spec.name + ": cths/engine ratio is not a power of 2");
        if (rep.exact_group) {
            std::vector<Int> a, b;
            for (const Int& d : rep.cths->invariant_factors)
                if (odd_part(d) > 1) a.push_back(odd_part(d));
            for (const Int& d : rep.exact_group->invariant_factors)
                if (odd_part(d) > 1) b.push_back(odd_part(d));
            c.require(a == b, sc.spec.name + ": odd invariant factors differ");
        }
    }
    c.summary += " (" + std::to_string(eligible) + " scenarios)";
    c.require(eligible >= 3, "too few scenarios define the quotient");
    return c;
}

Criterion crit9() {
    Criterion c{9, "generic and orbitwise paths agree on V and W"};
    int checked = 0;
    for (const auto& sc : load_corpus()) {
        if (sc.spec.group.order() > 8) continue;
        ++checked;
        exactlin::Caps caps;
        caps.max_cells = 400'000'000;
        normic::BrauerReport a =
            normic::brauer_report(sc.spec, normic::Path::Shapiro, caps);
        normic::BrauerReport b =
            normic::brauer_report(sc.spec, normic::Path::Generic, caps);
        c.require(a.v.same_type(b.v) && a.w.same_type(b.w),
                  sc.spec.name + ": paths disagree (" + a.v.str() + "," +
                      a.w.str() + ") vs (" + b.v.str() + "," + b.w.str() + ")");
    }
    c.summary += " (" + std::to_string(checked) + " scenarios)";
    c.require(checked >= 5, "too few scenarios within the order bound");
    return c;
}

Criterion crit10() {
    Criterion c{10, "infrastructure identities"};
    std::mt19937 rng(20260824);
    std::uniform_int_distribution<int> entry(-9, 9);

    // Smith normal form identities on random matrices
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t rows = 2 + trial % 4, cols = 2 + (trial / 2) % 4;
        std::vector<exactlin::Vec> data(rows, exactlin::Vec(cols));
        for (auto& r : data)
            for (auto& x : r) x = entry(rng);
        exactlin::IntMatrix a = exactlin::IntMatrix::from_rows(data);
        exactlin::SnfResult snf = exactlin::smith_normal_form(a);
        c.require(snf.U.mul(a).mul(snf.V).to_dense() == snf.S.to_dense(),
                  "U*A*V != S");
        std::vector<Int> d = snf.diagonal();
        for (std::size_t i = 1; i < d.size(); ++i)
            c.require(d[i - 1] == 0 || d[i] % d[i - 1] == 0,
                      "diagonal divisibility violated");
    }

    // restriction then corestriction is multiplication by the index
    for (int nn : {3, 4}) {
        groups::FiniteGroup g = groups::FiniteGroup::dihedral(nn);
        groups::Subgroup h = groups::subgroup_closure(g, {1});
        cohom::Module m = cohom::Module::trivial_z(g);
        cohom::InducedMap res = cohom::restriction(m, h, 2);
        cohom::InducedMap cor = cohom::corestriction(m, h, 2);
        exactlin::AbHom comp = exactlin::AbHom::compose(cor.map, res.map);
        const FinAb& h2 = res.src.group;
        for (std::size_t k = 0; k < h2.generators.size(); ++k) {
            exactlin::Vec e(comp.src.ambient, Int(0));
            e[k] = 1;
            exactlin::Vec got = comp.matrix.mul_vec(e);
            got[k] -= Int(2);  // index [G:H] = 2
            bool zero = true;
            for (std::size_t j = 0; j < got.size(); ++j) {
                Int mod = h2.invariant_factors.size() > j
                              ? h2.invariant_factors[j]
                              : Int(0);
                if (mod != 0 ? got[j] % mod != 0 : got[j] != 0) zero = false;
            }
            c.require(zero, "cor(res(x)) != [G:H] x on dihedral(" +
                                std::to_string(nn) + ")");
        }
    }

    // d compose d vanishes on permutation coefficients
    for (int nn : {3, 4}) {
        groups::FiniteGroup g = groups::FiniteGroup::dihedral(nn);
        gmod::GLattice perm = gmod::perm_lattice(g, groups::regular_gset(g));
        cohom::CochainComplex cx(cohom::Module::lattice(perm), 1);
        c.require(cx.d(1).mul(cx.d(0)).is_zero(), "d.d != 0");
    }

    // long exact sequence window for 0 -> Z -> Z[G] -> T -> 0
    {
        groups::FiniteGroup g = groups::FiniteGroup::dihedral(3);
        gmod::GLattice zg = gmod::perm_lattice(g, groups::regular_gset(g));
        gmod::GLattice triv = gmod::trivial_lattice(g);
        exactlin::IntMatrix ones(zg.rank(), 1);
        for (std::size_t i = 0; i < zg.rank(); ++i) ones.set(i, 0, 1);
        gmod::LatticeMap inc(triv, zg, ones);
        gmod::CokernelLattice t = gmod::cokernel_lattice(inc);
        cohom::ShortExact se{inc, t.projection};
        cohom::Connecting delta = cohom::connecting(se, 1);  // verifies exactness
        // the window H^1(T) -> H^2(Z) -> H^2(Z[G]): image of the connecting
        // map kills under the induced inclusion, and fills its kernel
        cohom::InducedMap i2 = cohom::induced_map(
            cohom::ModuleMap::of(inc), 2);
        exactlin::AbHom comp = exactlin::AbHom::compose(i2.map, delta.map);
        exactlin::HomAnalysis comp_an = exactlin::hom_analyze(comp);
        c.require(comp_an.image.is_trivial(), "delta followed by i2 is nonzero");
        exactlin::HomAnalysis im = exactlin::hom_analyze(delta.map);
        exactlin::HomAnalysis ker = exactlin::hom_analyze(i2.map);
        c.require(im.image.order() == ker.kernel.order(),
                  "exactness window cardinality mismatch");
    }
    return c;
}

}  // namespace

int main() {
    std::vector<Criterion (*)()> crits = {crit1, crit2, crit3, crit4, crit5,
                                          crit6, crit7, crit8, crit9, crit10};
    bool all = true;
    for (std::size_t i = 0; i < crits.size(); ++i) {
        Criterion c{static_cast<int>(i + 1), "criterion body threw"};
        try {
            c = crits[i]();
        } catch (const std::exception& e) {
            c.pass = false;
            c.details.push_back(std::string("exception: ") + e.what());
        }
        std::cout << "criterion " << c.id << ": " << (c.pass ? "PASS" : "FAIL")
                  << " — " << c.summary << "\n";
        for (const auto& d : c.details) std::cout << "    " << d << "\n";
        if (!c.pass) all = false;
    }
    std::cout << (all ? "acceptance: ALL CRITERIA PASS\n"
                      : "acceptance: FAILURES PRESENT\n");
    return all ? 0 : 1;
}
