#pragma once

#include <string>
#include <vector>

#include "normbr/exactlin.hpp"
#include "normbr/gmod.hpp"
#include "normbr/groups.hpp"

namespace cohom {

using exactlin::Caps;
using exactlin::Int;
using exactlin::IntMatrix;
using exactlin::Vec;

// Uniform coefficient module: `rank` generators with moduli (0 = a free Z
// coordinate) and a G-action on generators. Lattices have all moduli 0,
// finite modules all moduli >= 2.
struct Module {
    const groups::FiniteGroup* group = nullptr;
    std::size_t rank = 0;
    std::vector<Int> moduli;           // size rank
    std::vector<IntMatrix> action;     // one rank x rank matrix per element
    std::vector<std::string> labels;

    static Module lattice(const gmod::GLattice& l);
    static Module finite(const gmod::FinGModule& m);
    static Module trivial_z(const groups::FiniteGroup& g);
    bool is_free() const;
    // columns d_i * e_i for the finite coordinates
    IntMatrix relation_cols() const;
};

// restriction of scalars to a subgroup, given as its abstract copy
Module restricted_module(const Module& m, const groups::Subgroup& h,
                         const groups::FiniteGroup& hgroup);
// view over G/N; requires every element of N to act trivially (checked)
Module quotient_module(const Module& m, const groups::Quotient& q,
                       const groups::Subgroup& n);

// Equivariant map of modules over the same group (checked modulo moduli).
struct ModuleMap {
    Module src, dst;
    IntMatrix matrix;  // dst.rank x src.rank

    ModuleMap(Module src, Module dst, IntMatrix matrix);
    static ModuleMap of(const gmod::LatticeMap& f);
};

// Normalized bar cochain complex C^0 .. C^{n_max+1} with differentials
// d^0 .. d^{n_max}. Basis of C^n: (tuple of non-identity elements) x
// (module generator), the generator index varying fastest.
class CochainComplex {
public:
    CochainComplex(Module m, int n_max, const Caps& caps = Caps());

    const Module& module() const { return mod_; }
    int n_max() const { return n_max_; }
    std::size_t dim(int n) const;           // rank * (|G|-1)^n, n <= n_max+1
    const IntMatrix& d(int n) const;        // C^n -> C^{n+1}, n <= n_max
    IntMatrix relations(int n) const;       // moduli columns inside C^n
    std::size_t index(const std::vector<int>& tuple, std::size_t gen) const;

private:
    Module mod_;
    int n_max_;
    std::vector<IntMatrix> d_;
};

struct CohomGroup {
    int degree = 0;
    exactlin::FinAb group;
    exactlin::Subquotient classes;  // ambient = C^degree
    std::vector<Vec> reps;          // cochain representatives of the generators

    exactlin::Presentation presentation() const {
        return exactlin::Presentation::of(group);
    }
};

CohomGroup cohomology(const CochainComplex& cx, int n, const Caps& caps = Caps());
CohomGroup cohomology(const Module& m, int n, const Caps& caps = Caps());
// H^n(G, Q/Z) computed as H^{n+1}(G, Z); n <= 2
CohomGroup qz_cohomology(const groups::FiniteGroup& g, int n, const Caps& caps = Caps());

// Cochain-level carriers. All matrices act on the bases described above.
IntMatrix induced_cochain(const ModuleMap& f, int n);
IntMatrix restriction_cochain(const Module& m, const groups::Subgroup& h,
                              const groups::FiniteGroup& hg, int n);
// transfer over least-element left-coset representatives
IntMatrix corestriction_cochain(const Module& m, const groups::Subgroup& h,
                                const groups::FiniteGroup& hg, int n);
IntMatrix inflation_cochain(const Module& m, const groups::Quotient& q,
                            const groups::Subgroup& n_sub, int n);

// Descend a chain map to cohomology in canonical coordinates.
exactlin::AbHom descend(const IntMatrix& cochain_map, const CohomGroup& src,
                        const CohomGroup& dst);

struct InducedMap {
    CohomGroup src, dst;
    exactlin::AbHom map;
};

InducedMap induced_map(const ModuleMap& f, int n, const Caps& caps = Caps());
// H^n(G,M) -> H^n(H, M|_H)
InducedMap restriction(const Module& m, const groups::Subgroup& h, int n,
                       const Caps& caps = Caps());
// H^n(H, M|_H) -> H^n(G,M)
InducedMap corestriction(const Module& m, const groups::Subgroup& h, int n,
                         const Caps& caps = Caps());
// H^n(G/N, M) -> H^n(G,M); N must act trivially on M
InducedMap inflation(const Module& m, const groups::Subgroup& n_sub, int n,
                     const Caps& caps = Caps());

// 0 -> A -i-> B -p-> C -> 0 of lattices; exactness is verified by connecting().
struct ShortExact {
    gmod::LatticeMap i, p;
};

struct Connecting {
    CohomGroup src;  // H^n(G, C)
    CohomGroup dst;  // H^{n+1}(G, A)
    exactlin::AbHom map;
};

Connecting connecting(const ShortExact& s, int n, const Caps& caps = Caps());

// Membership test for coboundaries (image of d^{n-1} plus torsion relations).
class CoboundarySolver {
public:
    CoboundarySolver(const CochainComplex& cx, int n, const Caps& caps = Caps());
    bool is_coboundary(const Vec& cochain) const;

private:
    exactlin::ColumnSolver solver_;
};

// Explicit Shapiro isomorphism H^n(G, Z[G/H]) ~ H^n(H, Z).
struct Shapiro {
    CohomGroup big;    // H^n(G, Z[G/H])
    CohomGroup small;  // H^n(H, Z)
    exactlin::AbHom to_small, to_big;
    IntMatrix cochain_to_small, cochain_to_big;
};

Shapiro shapiro(const groups::FiniteGroup& g, const groups::Subgroup& h, int n,
                const Caps& caps = Caps());

// Sha^2_omega(G, M): classes of H^2(G,M) restricting to 0 on every cyclic
// subgroup (exhaustive intersection over cyclic_subgroups).
struct Sha2 {
    CohomGroup h2;
    exactlin::FinAb group;
    std::vector<Vec> coords;  // generators in h2 canonical coordinates
    std::vector<Vec> reps;    // cochain-level representatives
};

Sha2 sha2_omega(const Module& m, const Caps& caps = Caps());

// Character <-> bar-2-cocycle translation for H^2(G,Z) ~ Hom(G^ab, Q/Z).
// chi is given in the coordinates of abelianization_data(g, full subgroup).
Vec character_cocycle(const groups::FiniteGroup& g, const gmod::AbelianizationData& ab,
                      const Vec& chi);
Vec cocycle_character(const groups::FiniteGroup& g, const gmod::AbelianizationData& ab,
                      const Vec& cocycle);

// H^2(G, Z[X]) assembled orbitwise through the Shapiro identification with
// Hom(Stab^ab, Q/Z); no bar complex over G is built. This is the accelerated
// path for permutation coefficients.
class PermCohom {
public:
    struct Orbit {
        int base = 0;                    // least point of the orbit
        std::vector<int> points;         // sorted
        groups::Subgroup stab;           // stabilizer of base
        std::vector<int> rep;            // per point p: least g with g*base = p
        gmod::AbelianizationData ab;     // of the stabilizer
        std::size_t offset = 0;          // first coordinate of this orbit
    };

    PermCohom(const groups::FiniteGroup& g, const groups::GSet& x,
              const Caps& caps = Caps());

    const groups::FiniteGroup& group() const { return *group_; }
    const std::vector<Int>& moduli() const { return moduli_; }
    exactlin::FinAb finab() const;             // canonical invariant-factor form
    exactlin::Presentation presentation() const;  // diag(moduli), generator order kept
    std::size_t ngens() const { return moduli_.size(); }
    std::size_t cochain_dim() const;           // (|G|-1)^2 * |X|
    Vec project(const Vec& cocycle) const;     // coordinates of a 2-cocycle class
    Vec rep(std::size_t k) const;              // cochain representative of gen k
    const std::vector<Orbit>& orbits() const { return orbits_; }

private:
    const groups::FiniteGroup* group_;
    groups::GSet x_;
    std::vector<Orbit> orbits_;
    std::vector<Int> moduli_;
};

}  // namespace cohom
