#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "normbr/cohom.hpp"
#include "normbr/exactlin.hpp"
#include "normbr/gmod.hpp"
#include "normbr/groups.hpp"

// Unramified Brauer group of partial compactifications of the affine variety
// P(t) = N_{K/k}(z), computed at the finite level of the splitting group G.
// The answer is assembled from a vertical part V and a Sha-kernel part W that
// fit into 0 -> V -> Br_un/Br_0 -> W -> 0.
namespace normic {

using exactlin::Caps;
using exactlin::FinAb;
using exactlin::Int;
using exactlin::IntMatrix;
using exactlin::Vec;

// A violated hypothesis or invalid input (reported, never silently patched).
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

// X': the fibration compactified over P^1 with the full tower of blow-ups.
// X : the one-step partial compactification; requires K to be a Galois field
//     extension (a single trivial component below).
enum class Variant { XPrime, X };

// Generic: bar-resolution cohomology throughout.
// Shapiro: permutation coefficients handled orbitwise through stabilizer
//          characters (the fast path; identical answers).
enum class Path { Generic, Shapiro };

// One irreducible factor p_i of P, of multiplicity e: V holds the elements of
// the subgroup of G fixing a root field L_i inside the splitting field.
// l = [L_i : L'_i] when the honest root field L_i is a degree-l extension of
// its trace L'_i inside K; it only enters the separable (X-variant) systems.
struct Factor {
    std::vector<int> v;  // sorted subgroup elements
    Int e = 1;
    Int l = 1;
    bool synthetic = false;  // appended rational factor t^s
};

struct ProblemSpec {
    std::string name;
    groups::FiniteGroup group;
    // The etale algebra K = prod K_j given by subgroups U_j; [K:k] = sum [G:U_j].
    std::vector<std::vector<int>> components;
    std::vector<Factor> factors;
    Variant variant = Variant::XPrime;
};

// Result of validating and normalising a spec: exponents reduced mod n,
// synthetic factor appended when n does not divide deg P, section-3 (separable
// X) bookkeeping recorded.
struct Normalized {
    ProblemSpec spec;
    std::size_t n = 0;  // [K:k]
    Int m = 0;          // deg P of the normalised spec
    bool section3 = false;        // X variant with separable P
    Int eprime3 = 1;              // gcd(n, m) for the separable system
    Int delta = 0, delta_prime = 0;  // 0 <= delta < n, delta = -m, delta' = (m+delta)/n
    std::vector<Int> eprime;      // per-factor gcd(e_i, n) (section-2 systems)
    std::vector<std::string> notes;
};

Normalized normalize(const ProblemSpec& spec);

// The lattice exact sequences 0 -> Z -> Z[K/k] -> T -> 0 and
// 0 -> Z_P -> D -> T' -> 0 together with the divisor map j: Z[K/k] -> D and
// its descent jbar: T -> T'. All structural identities (equivariance,
// injectivity, torsion-freeness, j-compatibility) are verified on build.
struct LatticeSystem {
    Normalized norm;
    // Stable owner of the group all lattices and G-sets below point into.
    std::shared_ptr<const groups::FiniteGroup> group_owner;
    const groups::FiniteGroup& group() const { return *group_owner; }
    groups::GSet xk, xp, xd;  // bases of Z[K/k], Z_P, D as G-sets
    gmod::GLattice zk, zp, d;
    gmod::LatticeMap f;   // Z_P -> D
    IntMatrix jhat;       // Z[K/k] -> D
    Vec vvec;             // image of 1 under the induced Z -> Z_P
    gmod::CokernelLattice tprime;  // T' = coker f, with projection/section
    gmod::CokernelLattice that;    // T = Z[K/k]/Z
    gmod::LatticeMap jbar;         // T -> T'
};

LatticeSystem build_system(const Normalized& norm, const Caps& caps = Caps(),
                           std::size_t omega_cap = 5000);

// V = H^1(G,T') / j^*(H^1(G,T)), presented inside H^2(G,Z_P) through the
// connecting isomorphism H^1(G,T') = Ker[H^2(G,Z_P) -> H^2(G,D)].
struct VerticalPart {
    FinAb group;
    // Generator coordinates in H^2(G,Z_P); on the Shapiro path these split
    // per factor as characters of the stabilizer abelianizations.
    std::vector<Vec> psi;
    std::vector<Int> psi_moduli;           // coordinate moduli of H^2(G,Z_P)
    std::vector<std::size_t> factor_offsets;  // first coordinate of each factor
    std::vector<std::string> factor_names;
    bool has_characters = false;  // true on the Shapiro path
};

VerticalPart vertical_part(const LatticeSystem& sys, Path path = Path::Shapiro,
                           const Caps& caps = Caps());

// Rendered generators "Cor_{L1/k}(t - eta1, chi1) + ..." with the character
// values spelled out.
std::vector<std::string> psi_characters(const VerticalPart& v);

// W = Ker[Sha^2_omega(G,T) -> H^2(G,T')]; the image of a Sha class lands in
// Sha^2_omega(G,T') automatically, so this kernel equals the kernel into
// Sha^2_omega(G,T').
struct ShaKernel {
    FinAb sha;     // Sha^2_omega(G, T)
    FinAb kernel;  // W, with generators in the coordinates of sha
};

ShaKernel sha_kernel(const LatticeSystem& sys, const Caps& caps = Caps());

// Same kernel computed against Sha^2_omega(G,T') materialised via cyclic
// restrictions (the slow cross-check used by the property tests).
FinAb sha_kernel_via_sha(const LatticeSystem& sys, const Caps& caps = Caps());

// Ker[H^2(G,Q/Z) -> H^2(H,Q/Z)] for H the intersection of the non-synthetic
// factor subgroups (the subgroup fixing the compositum of the root fields);
// defined for variant X with H normal and G/[H,H] abelian (all checked).
FinAb cths_quotient(const Normalized& norm, const Caps& caps = Caps());

struct BrauerReport {
    std::string name;
    std::size_t n = 0;
    Int m = 0;
    Variant variant = Variant::XPrime;
    FinAb v, w;
    Int order = 1;  // |V| * |W|
    // Set only when determined: W = 0, V = 0, or a matching closed form.
    std::optional<FinAb> exact_group;
    std::vector<std::string> generators;
    std::optional<FinAb> cths;
    std::vector<std::string> notes;
};

BrauerReport brauer_report(const ProblemSpec& spec, Path path = Path::Shapiro,
                           const Caps& caps = Caps(), std::size_t omega_cap = 5000);

// Base change to the subgroup generated by gens: components and factors split
// along their double cosets.
ProblemSpec restrict_problem(const ProblemSpec& spec, const std::vector<int>& gens);

}  // namespace normic
