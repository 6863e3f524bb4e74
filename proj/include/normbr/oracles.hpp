#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "normbr/cohom.hpp"
#include "normbr/exactlin.hpp"
#include "normbr/gmod.hpp"
#include "normbr/groups.hpp"

// Closed-form values of the unramified Brauer quotient for the families with
// a complete answer, implemented through character arithmetic and cohomology
// of small abstract groups only. These never touch the lattice engine, so
// agreement with it is a genuine two-path check.
namespace oracles {

using exactlin::FinAb;
using exactlin::Int;
using exactlin::IntMatrix;
using exactlin::Vec;

class ParamError : public std::runtime_error {
public:
    explicit ParamError(const std::string& what) : std::runtime_error(what) {}
};

// Dihedral splitting field D_nn = Z/nn x| Z/2, L' the quadratic subfield,
// l = [L : L']. Closed form:
//   Z/nn      when nn is odd or v2(l) >= v2(nn),
//   Z/(nn/2)  otherwise.
FinAb dihedral_brauer(long nn, const Int& l);

// Abelian splitting group G = G_1 x G_2 with G_1 = Z/p^{s'} cyclic over the
// degree-p^s subfield L' and
//   G_2 = (Z/p^s)^r x prod Z/p^{e_i} x prod Z/p^{mu_j} x H_1,
// e_i < s < mu_j, |H_1| prime to p.
struct AbelianPParams {
    Int p;
    long s = 1;        // [L':k] = p^s
    long s_prime = 1;  // G_1 = Z/p^{s'}, s' >= s
    long r = 0;
    std::vector<long> e;   // exponents < s
    std::vector<long> mu;  // exponents > s
    Int h1_order = 1;      // prime to p
    Int l = 1;             // [L:L']
};

// (Z/p^s)^{r+r_2} x prod Z/p^{e_i} when p odd or l even;
// (Z/2^{s-1})^r x (Z/2^s)^{r_2} x prod Z/2^{e_i} when p = 2, l odd.
FinAb abelian_p_brauer(const AbelianPParams& p);

// Split composite K = L'.F with F linearly disjoint from L, H = Gal(F/k).
struct SplitCompositeParams {
    std::vector<Int> lprime;     // abelian invariants of Gal(L'/k)^ab
    std::vector<Int> h;          // abelian invariants of H^ab
    Int l = 1;                   // [L:L']
    Int rho = 1;                 // #[Gal(L'/k), Gal(L'/k)]
    std::vector<Int> h2_lprime;  // invariants of H^2(L'/k,Q/Z); required when
                                 // rho > 1, computed from `lprime` otherwise
    // decomposition of the 2-part of H^ab, used only in the second case:
    long s = 0;  // H'_2 = Z/2^s (0 = trivial); must match the 2-part of lprime
    long u1 = 0; // (Z/2^s)-rank of the image of the 2^s-torsion of H in H^ab
    long u2 = 0; // remaining (Z/2^s)-rank of H_2
    std::vector<long> s_i;  // exponents < s
    std::vector<long> t_j;  // exponents > s
};

// H^2(L'/k,Q/Z) x Hom(Gal(L'/k)^ab, H^ab) when l*rho is even or the 2-part
// of Gal(L'/k)^ab is zero or non-cyclic; otherwise
// H^2(L'/k,Q/Z) x Hom(odd parts) x (Z/2^{s-1})^{u1} x (Z/2^s)^{w+u2}
//   x prod Z/2^{s_i},  w = #t_j.
FinAb split_composite_brauer(const SplitCompositeParams& p);

// P = c * prod (t - a_i)^{e_i} split over k, K/k with group G, n | sum e_i
// and gcd(e_1, ..., e_s, n) = 1 (so the Sha-kernel part vanishes).
struct SplitPolyResult {
    FinAb group;
    std::vector<Int> char_moduli;  // coordinate moduli of Hom(G^ab, Q/Z)
    // generator k, factor i: character coordinates (length = char_moduli)
    std::vector<std::vector<Vec>> generators;
};

// {(chi_i) in Hom(G,Q/Z)^s : sum chi_i = 0, chi_i kills the e'_i-torsion}
// modulo the image of chi -> (e_i * chi)_i, with e'_i = gcd(e_i, n).
SplitPolyResult split_polynomial_brauer(const groups::FiniteGroup& g,
                                        const std::vector<Int>& e);

// C = {chi in Hom(H^ab, Q/Z) : l * chi(Ver(g)) = 0 for all g with g^{e'} = 1},
// Ver the transfer G -> H^ab.
FinAb c_group(const groups::FiniteGroup& g, const std::vector<int>& h_elems,
              const Int& l, const Int& eprime);

// Cokernel of the character-restriction map Hom(G^ab,Q/Z) -> C (the vertical
// part of the Brauer quotient for an irreducible P).
FinAb c_restriction_cokernel(const groups::FiniteGroup& g,
                             const std::vector<int>& h_elems, const Int& l,
                             const Int& eprime);

// C' = {sum chi_sigma (x) sigma : l * sum chi_sigma kills the e'-torsion of H}
// as a module over G/H; H must be normal.
struct CPrime {
    std::shared_ptr<const groups::FiniteGroup> qgroup;  // G/H
    gmod::FinGModule module;                            // over *qgroup
};

CPrime c_prime_module(const groups::FiniteGroup& g,
                      const std::vector<int>& h_elems, const Int& l,
                      const Int& eprime);

// Delta = Ker[ H^1(G/H, Hom(H^ab,Q/Z)) -> H^1(G/H, C') ] with the map
// induced by the diagonal chi -> sum chi (x) sigma.
FinAb res_kernel_delta(const groups::FiniteGroup& g,
                       const std::vector<int>& h_elems, const Int& l,
                       const Int& eprime);

// Exhaustive verification of the two character lemmas on one instance:
// vanishing of the transfer for dihedral shapes, and the 2-torsion /
// forced-vanishing behaviour of the diagonal restriction into C'.
struct LemmaReport {
    bool cor_applicable = false;   // G dihedral with H its rotation subgroup
    bool map0_applicable = false;  // G/H acts trivially on Hom(H^ab,Q/Z)
    std::size_t cor_checked = 0;   // elements with verified zero transfer
    std::size_t map0_classes = 0;  // classes of H^1(G/H, Hom(H^ab,Q/Z)) checked
    std::size_t map0_forced = 0;   // classes where vanishing itself is forced
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

LemmaReport lemma_checks(const groups::FiniteGroup& g,
                         const std::vector<int>& h_elems, const Int& l,
                         const Int& eprime);

// H^3(G/H, Z) (= H^2(G/H, Q/Z)); requires H normal with H^ab = 0, in which
// case it is the whole Brauer quotient.
FinAb perfect_h_formula(const groups::FiniteGroup& g,
                        const std::vector<int>& h_elems);

// Schur multiplier H^2(A, Q/Z) of the abelian group with the given
// invariants: prod_{i<j} Z/gcd(d_i, d_j).
FinAb abelian_schur_multiplier(const std::vector<Int>& invariants);

// Hom(A, B) for abelian groups given by invariants: prod Z/gcd(a_i, b_j).
FinAb abelian_hom_group(const std::vector<Int>& a, const std::vector<Int>& b);

}  // namespace oracles
