#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "normbr/gmod.hpp"

using exactlin::Int;
using exactlin::IntMatrix;
using gmod::GLattice;
using gmod::LatticeMap;
using groups::FiniteGroup;

namespace {

// rank of the fixed sublattice L^G
std::size_t fixed_rank(const GLattice& l) {
    IntMatrix stacked(0, l.rank());
    const IntMatrix id = IntMatrix::identity(l.rank());
    for (std::size_t g = 0; g < l.group().order(); ++g)
        stacked = stacked.vstack(l.act((int)g).add(id.negated()));
    return exactlin::kernel_lattice(stacked).cols();
}

}  // namespace

TEST_CASE("perm_lattice basics") {
    auto d3 = FiniteGroup::dihedral(3);

    // one point: trivial lattice
    auto pt = groups::cosets(d3, groups::full_subgroup(d3));
    auto triv = gmod::perm_lattice(d3, pt);
    CHECK(triv.rank() == 1);
    for (std::size_t g = 0; g < 6; ++g) CHECK(triv.act((int)g) == IntMatrix::identity(1));

    // regular GSet: Z[G]
    auto zg = gmod::perm_lattice(d3, groups::regular_gset(d3));
    CHECK(zg.rank() == 6);
    CHECK(zg.is_permutation());
    CHECK(fixed_rank(zg) == 1);

    // cosets by the rotation subgroup: rank 2, reflections swap the basis
    auto rot = groups::dihedral_rotations(d3);
    auto l = gmod::perm_lattice(d3, groups::cosets(d3, rot));
    CHECK(l.rank() == 2);
    for (int r = 0; r < 3; ++r) CHECK(l.act(r) == IntMatrix::identity(2));
    IntMatrix swap01(2, 2);
    swap01.set(0, 1, 1);
    swap01.set(1, 0, 1);
    for (int s = 3; s < 6; ++s) CHECK(l.act(s) == swap01);
}

TEST_CASE("GLattice validation") {
    auto z2 = FiniteGroup::cyclic(2);
    IntMatrix neg = IntMatrix::identity(1).negated();

    // sign lattice is fine
    GLattice sign(z2, 1, {IntMatrix::identity(1), neg});
    CHECK_FALSE(sign.is_permutation());
    CHECK(fixed_rank(sign) == 0);

    // identity must act trivially
    CHECK_THROWS_AS(GLattice(z2, 1, {neg, IntMatrix::identity(1)}), std::invalid_argument);

    // homomorphism law: order-2 element acting by a matrix of infinite order
    IntMatrix shear = IntMatrix::identity(2);
    shear.set(0, 1, 1);
    CHECK_THROWS_AS(GLattice(z2, 2, {IntMatrix::identity(2), shear}), std::invalid_argument);

    // wrong number of matrices
    CHECK_THROWS_AS(GLattice(z2, 1, {IntMatrix::identity(1)}), std::invalid_argument);
}

TEST_CASE("subsets_gset") {
    auto z2 = FiniteGroup::cyclic(2);
    auto reg2 = groups::regular_gset(z2);

    // d = |X|: one fixed point
    auto top = gmod::subsets_gset(reg2, 2);
    CHECK(top.size() == 1);
    CHECK(top.apply(1, 0) == 0);

    // d = 1 reproduces X
    auto one = gmod::subsets_gset(reg2, 1);
    CHECK(one.size() == 2);
    for (std::size_t g = 0; g < 2; ++g)
        for (std::size_t x = 0; x < 2; ++x)
            CHECK(one.apply((int)g, (int)x) == reg2.apply((int)g, (int)x));

    // C(4,2) = 6, orbit sizes divide |G|
    auto z4 = FiniteGroup::cyclic(4);
    auto pairs = gmod::subsets_gset(groups::regular_gset(z4), 2);
    CHECK(pairs.size() == 6);
    for (std::size_t x = 0; x < pairs.size(); ++x) {
        auto orb = pairs.orbit((int)x);
        CHECK(orb.size() * pairs.stabilizer_order((int)x) == z4.order());
    }
    // the diagonal pair {0,2} has a 2-element orbit
    CHECK(std::count_if(pairs.labels.begin(), pairs.labels.end(),
                        [](const std::string& s) { return s == "{0H,2H}"; }) == 1);

    // cap
    auto s4 = FiniteGroup::symmetric(4);
    auto reg24 = groups::regular_gset(s4);
    CHECK_THROWS_AS(gmod::subsets_gset(reg24, 12, 5000), gmod::SubsetCapError);
    CHECK_THROWS_AS(gmod::subsets_gset(reg2, 3), std::invalid_argument);
}

TEST_CASE("tensor and direct sum") {
    auto d3 = FiniteGroup::dihedral(3);
    auto zg = gmod::perm_lattice(d3, groups::regular_gset(d3));
    auto triv = gmod::trivial_lattice(d3);

    // tensor with Z is an isomorphic copy
    auto t = gmod::tensor(zg, triv);
    CHECK(t.rank() == 6);
    for (std::size_t g = 0; g < 6; ++g) CHECK(t.act((int)g) == zg.act((int)g));

    // Z[G] (x) Z[G] is a permutation lattice of rank |G|^2
    auto big = gmod::tensor(zg, zg);
    CHECK(big.rank() == 36);
    CHECK(big.is_permutation());
    CHECK(fixed_rank(big) == 6);  // |G| orbits on G x G

    // rank 2 perm (x) rank 3 perm = rank 6 perm
    auto rot = groups::dihedral_rotations(d3);
    auto l2 = gmod::perm_lattice(d3, groups::cosets(d3, rot));
    auto l3 = gmod::perm_lattice(d3, groups::cosets(d3, groups::subgroup_closure(d3, {3})));
    auto t6 = gmod::tensor(l2, l3);
    CHECK(t6.rank() == 6);
    CHECK(t6.is_permutation());

    auto ds = gmod::direct_sum({l2, l3, triv});
    CHECK(ds.rank() == 6);
    CHECK(ds.labels().size() == 6);
    CHECK(ds.is_permutation());

    auto other = FiniteGroup::cyclic(2);
    CHECK_THROWS_AS(gmod::tensor(zg, gmod::trivial_lattice(other)), std::invalid_argument);
    CHECK_THROWS_AS(gmod::direct_sum({zg, gmod::trivial_lattice(other)}), std::invalid_argument);
}

TEST_CASE("LatticeMap equivariance") {
    auto z2 = FiniteGroup::cyclic(2);
    auto zg = gmod::perm_lattice(z2, groups::regular_gset(z2));
    auto triv = gmod::trivial_lattice(z2);

    // diagonal Z -> Z[G] is equivariant
    IntMatrix diag(2, 1);
    diag.set(0, 0, 1);
    diag.set(1, 0, 1);
    LatticeMap f(triv, zg, diag);
    CHECK(f.matrix() == diag);

    // e_0 alone is not equivariant
    IntMatrix e0(2, 1);
    e0.set(0, 0, 1);
    CHECK_THROWS_AS(LatticeMap(triv, zg, e0), std::invalid_argument);
    CHECK_THROWS_AS(LatticeMap(triv, zg, IntMatrix(3, 1)), std::invalid_argument);
}

TEST_CASE("cokernel_lattice") {
    auto z2 = FiniteGroup::cyclic(2);
    auto zg = gmod::perm_lattice(z2, groups::regular_gset(z2));
    auto triv = gmod::trivial_lattice(z2);

    // K = k: Z -> Z identity, cokernel rank 0
    auto idmap = LatticeMap(triv, gmod::trivial_lattice(z2), IntMatrix::identity(1));
    auto zero = gmod::cokernel_lattice(idmap);
    CHECK(zero.lattice.rank() == 0);

    // diagonal Z -> Z[Z/2]: rank-1 quotient, nontrivial element acts by -1
    IntMatrix diag(2, 1);
    diag.set(0, 0, 1);
    diag.set(1, 0, 1);
    auto that = gmod::cokernel_lattice(LatticeMap(triv, zg, diag));
    CHECK(that.lattice.rank() == 1);
    CHECK(that.lattice.act(1) == IntMatrix::identity(1).negated());
    // projection . f = 0, projection surjective over Z
    CHECK(that.projection.matrix().mul(diag).is_zero());
    for (const auto& d : exactlin::smith_normal_form(that.projection.matrix()).diagonal())
        CHECK(abs(d) == 1);
    // section is a right inverse
    CHECK(that.projection.matrix().mul(that.section) == IntMatrix::identity(1));

    // torsion: Z --2--> Z over the trivial group
    auto e = FiniteGroup::trivial();
    auto tlat = gmod::trivial_lattice(e);
    try {
        gmod::cokernel_lattice(LatticeMap(tlat, gmod::trivial_lattice(e),
                                          IntMatrix::identity(1).scaled(2)));
        FAIL("expected torsion error");
    } catch (const gmod::TorsionError& err) {
        REQUIRE(err.factors.size() == 1);
        CHECK(err.factors[0] == 2);
    }

    // non-injective map rejected
    CHECK_THROWS_AS(gmod::cokernel_lattice(LatticeMap(triv, zg, IntMatrix(2, 1))),
                    std::invalid_argument);

    // Galois case: Z -> Z[G] for G = S3, cokernel rank |G|-1 with no invariants
    auto s3 = FiniteGroup::symmetric(3);
    auto zg6 = gmod::perm_lattice(s3, groups::regular_gset(s3));
    IntMatrix diag6(6, 1);
    for (std::size_t i = 0; i < 6; ++i) diag6.set(i, 0, 1);
    auto that6 = gmod::cokernel_lattice(LatticeMap(gmod::trivial_lattice(s3), zg6, diag6));
    CHECK(that6.lattice.rank() == 5);
    CHECK(fixed_rank(that6.lattice) == 0);
}

TEST_CASE("FinGModule validation") {
    auto z2 = FiniteGroup::cyclic(2);

    // Z/3 with inversion
    IntMatrix inv3(1, 1);
    inv3.set(0, 0, 2);
    gmod::FinGModule m(z2, {Int(3)}, {IntMatrix::identity(1), inv3});
    CHECK(m.order() == 3);
    CHECK(m.abelian_group().str() == "Z/3");
    CHECK(m.reduce({Int(-1)}) == exactlin::Vec{Int(2)});

    // multiplication by 2 on Z/4 is not an involution
    IntMatrix two(1, 1);
    two.set(0, 0, 2);
    CHECK_THROWS_AS(gmod::FinGModule(z2, {Int(4)}, {IntMatrix::identity(1), two}),
                    std::invalid_argument);

    // ill-defined: Z/2 generator sent into Z/4 with coefficient 1
    IntMatrix bad = IntMatrix::identity(2);
    bad.set(1, 0, 1);  // gen of order 2 -> has an order-4 component
    CHECK_THROWS_AS(gmod::FinGModule(z2, {Int(2), Int(4)}, {IntMatrix::identity(2), bad}),
                    std::invalid_argument);

    CHECK(gmod::zero_module(z2).order() == 1);
}

TEST_CASE("dual_abelianization") {
    // central H: G = Z/4 x Z/2, H the Z/4 factor -> Z/4 with trivial action
    auto g = FiniteGroup::direct(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2));
    auto h = groups::subgroup_closure(g, {2});  // (1,0)
    REQUIRE(h.order() == 4);
    auto m = gmod::dual_abelianization(g, h);
    CHECK(m.moduli() == std::vector<Int>{Int(4)});
    for (std::size_t x = 0; x < g.order(); ++x) CHECK(m.act((int)x) == IntMatrix::identity(1));

    // G = dihedral(3), H = rotations -> Z/3 with reflections acting by -1
    auto d3 = FiniteGroup::dihedral(3);
    auto md3 = gmod::dual_abelianization(d3, groups::dihedral_rotations(d3));
    CHECK(md3.moduli() == std::vector<Int>{Int(3)});
    for (int r = 0; r < 3; ++r) CHECK(md3.act(r) == IntMatrix::identity(1));
    IntMatrix minus1(1, 1);
    minus1.set(0, 0, 2);  // -1 mod 3
    for (int s = 3; s < 6; ++s) CHECK(md3.act(s) == minus1);

    // trivial H -> zero module
    CHECK(gmod::dual_abelianization(d3, groups::trivial_subgroup(d3)).ngens() == 0);

    // non-normal H rejected
    CHECK_THROWS_AS(gmod::dual_abelianization(d3, groups::subgroup_closure(d3, {3})),
                    groups::NotNormalError);

    // H = G for the quaternion-free case: G = dihedral(4), H = G -> G^ab = (Z/2)^2
    auto d4 = FiniteGroup::dihedral(4);
    auto full = gmod::dual_abelianization(d4, groups::full_subgroup(d4));
    CHECK(full.moduli() == std::vector<Int>{Int(2), Int(2)});
    for (std::size_t x = 0; x < d4.order(); ++x)
        CHECK(full.act((int)x) == IntMatrix::identity(2));
}
