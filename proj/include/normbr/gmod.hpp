#pragma once

#include <string>
#include <vector>

#include "normbr/exactlin.hpp"
#include "normbr/groups.hpp"

namespace gmod {

using exactlin::Int;
using exactlin::IntMatrix;

// G-lattice: free Z-module of finite rank with a unimodular G-action.
// Action matrices act on column vectors; rho(g) sends basis column e_i to
// column i of rho(g). Identity/homomorphism/unimodularity are verified at
// construction.
class GLattice {
public:
    GLattice(const groups::FiniteGroup& group, std::size_t rank,
             std::vector<IntMatrix> action, std::vector<std::string> labels = {});

    const groups::FiniteGroup& group() const { return *group_; }
    std::size_t rank() const { return rank_; }
    const IntMatrix& act(int g) const { return action_[g]; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool is_permutation() const;

private:
    const groups::FiniteGroup* group_;
    std::size_t rank_;
    std::vector<IntMatrix> action_;
    std::vector<std::string> labels_;
};

GLattice trivial_lattice(const groups::FiniteGroup& g, std::string label = "Z");
GLattice perm_lattice(const groups::FiniteGroup& g, const groups::GSet& x);

// The GSet of size-d subsets of the points of x, ordered by sorted tuple.
class SubsetCapError : public std::runtime_error {
public:
    SubsetCapError(std::size_t count, std::size_t cap)
        : std::runtime_error("subset G-set would have " + std::to_string(count) +
                             " points, cap is " + std::to_string(cap)),
          count(count), cap(cap) {}
    std::size_t count, cap;
};
groups::GSet subsets_gset(const groups::GSet& x, std::size_t d,
                          std::size_t cap = 5000);

GLattice tensor(const GLattice& a, const GLattice& b);
GLattice direct_sum(const std::vector<GLattice>& parts);

// Z-linear G-equivariant map between lattices over the same group;
// matrix is dst.rank x src.rank, acting on column vectors. Equivariance
// rho_dst(g) M = M rho_src(g) is verified for every g.
class LatticeMap {
public:
    LatticeMap(GLattice src, GLattice dst, IntMatrix matrix);

    const GLattice& src() const { return src_; }
    const GLattice& dst() const { return dst_; }
    const IntMatrix& matrix() const { return matrix_; }

private:
    GLattice src_, dst_;
    IntMatrix matrix_;
};

class TorsionError : public std::runtime_error {
public:
    explicit TorsionError(std::vector<Int> factors);
    std::vector<Int> factors;  // nontrivial invariant factors of the cokernel
};

struct CokernelLattice {
    GLattice lattice;
    LatticeMap projection;  // from f.dst onto the cokernel
    IntMatrix section;      // right inverse of the projection matrix
};

// Cokernel of an injective lattice map; must be torsion-free (else
// TorsionError listing the offending invariant factors).
CokernelLattice cokernel_lattice(const LatticeMap& f);

// Finite G-module: direct sum of Z/d_i (d_i the invariant factors) with a
// G-action given per element by a matrix on the generators, well defined
// modulo the relations.
class FinGModule {
public:
    FinGModule(const groups::FiniteGroup& group, std::vector<Int> moduli,
               std::vector<IntMatrix> action, std::vector<std::string> labels = {});

    const groups::FiniteGroup& group() const { return *group_; }
    const std::vector<Int>& moduli() const { return moduli_; }
    std::size_t ngens() const { return moduli_.size(); }
    const IntMatrix& act(int g) const { return action_[g]; }
    const std::vector<std::string>& labels() const { return labels_; }
    exactlin::FinAb abelian_group() const;
    Int order() const;
    // reduce a coordinate vector modulo the moduli (balanced to 0..d-1)
    exactlin::Vec reduce(exactlin::Vec v) const;

private:
    const groups::FiniteGroup* group_;
    std::vector<Int> moduli_;
    std::vector<IntMatrix> action_;
    std::vector<std::string> labels_;
};

FinGModule zero_module(const groups::FiniteGroup& g);

// Canonical coordinates on H^ab: invariant factors, the class of every
// element of H, and ambient representatives of the canonical generators.
struct AbelianizationData {
    std::vector<Int> moduli;          // invariant factors of H^ab
    IntMatrix elem_coords;            // k x |H|; column p = class of h.elements[p]
    std::vector<exactlin::Vec> gen_reps;  // length-|H| integer words for each generator
};
AbelianizationData abelianization_data(const groups::FiniteGroup& g,
                                       const groups::Subgroup& h);

struct DualAbData {
    FinGModule module;    // Hom(H^ab, Q/Z) with the conjugation action of G
    AbelianizationData ab;
};

// Hom(H^ab, Q/Z) with the conjugation action of G (the action factors
// through G/H). H must be normal in G.
FinGModule dual_abelianization(const groups::FiniteGroup& g,
                               const groups::Subgroup& h);
DualAbData dual_abelianization_data(const groups::FiniteGroup& g,
                                    const groups::Subgroup& h);

}  // namespace gmod
