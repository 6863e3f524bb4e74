#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "normbr/exactlin.hpp"

namespace groups {

class GroupCapError : public std::runtime_error {
public:
    GroupCapError(std::size_t order, std::size_t cap)
        : std::runtime_error("group order " + std::to_string(order) +
                             " exceeds cap " + std::to_string(cap)),
          order(order), cap(cap) {}
    std::size_t order, cap;
};

// Finite group given by its multiplication table. Elements are dense
// indices 0..N-1 with 0 the identity. Identity, inverse, and associativity
// laws are verified at construction (exhaustively up to order 128, by fixed
// seed sampling beyond).
class FiniteGroup {
public:
    static constexpr std::size_t default_cap = 64;

    static FiniteGroup from_table(std::vector<std::vector<int>> table,
                                  std::string label = "table",
                                  std::size_t cap = default_cap);
    static FiniteGroup trivial();
    static FiniteGroup cyclic(int n, std::size_t cap = default_cap);
    // order 2n; elements 0..n-1 are the rotations r^i, n+i is s*r^i
    static FiniteGroup dihedral(int n, std::size_t cap = default_cap);
    static FiniteGroup symmetric(int n, std::size_t cap = default_cap);
    static FiniteGroup direct(const FiniteGroup& a, const FiniteGroup& b,
                              std::size_t cap = default_cap);
    // action: one automorphism table of a (a permutation of a's elements)
    // per element of b; must be a homomorphism b -> Aut(a) (checked)
    static FiniteGroup semidirect(const FiniteGroup& a, const FiniteGroup& b,
                                  const std::vector<std::vector<int>>& action,
                                  std::size_t cap = default_cap);

    std::size_t order() const { return table_.size(); }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    int power(int g, long e) const;
    int element_order(int g) const;
    int conj(int g, int h) const { return mul(mul(g, h), inv(g)); }  // g h g^-1
    bool is_abelian() const;
    std::size_t exponent() const;
    const std::string& label() const { return label_; }

    // All automorphism tables, brute force; identity automorphism first.
    std::vector<std::vector<int>> automorphisms() const;

    // Invariant factors of G/[G,G] (equals G itself when abelian).
    exactlin::FinAb abelian_invariants() const;

    FiniteGroup() = default;

private:
    void finish_and_check(std::size_t cap);
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
    std::string label_;
};

// Subgroup as a sorted element list of a parent group.
struct Subgroup {
    const FiniteGroup* parent = nullptr;
    std::vector<int> elements;  // sorted, contains 0

    std::size_t order() const { return elements.size(); }
    bool contains(int g) const;
    std::size_t index() const { return parent->order() / order(); }
    // position of g in the sorted element list; throws if absent
    int position(int g) const;
    bool operator==(const Subgroup& other) const { return elements == other.elements; }
    bool operator<(const Subgroup& other) const;
};

Subgroup subgroup_closure(const FiniteGroup& g, const std::vector<int>& gens);
// distinguished rotation subgroup {0..n-1} of dihedral(n)
Subgroup dihedral_rotations(const FiniteGroup& d);
// abstract copy of a subgroup; its element i corresponds to h.elements[i]
FiniteGroup as_group(const Subgroup& h);
Subgroup trivial_subgroup(const FiniteGroup& g);
Subgroup full_subgroup(const FiniteGroup& g);

// Every cyclic subgroup <g>, deduplicated, sorted by (order, elements);
// includes the trivial subgroup.
std::vector<Subgroup> cyclic_subgroups(const FiniteGroup& g);

// All subgroups (brute force; desk scale only).
std::vector<Subgroup> all_subgroups(const FiniteGroup& g);

// True iff h is normal; otherwise *witness = (g, x) with g x g^-1 outside h.
bool is_normal(const FiniteGroup& g, const Subgroup& h,
               std::pair<int, int>* witness = nullptr);

class NotNormalError : public std::runtime_error {
public:
    NotNormalError(int g, int x)
        : std::runtime_error("subgroup is not normal: conjugating element " +
                             std::to_string(x) + " by " + std::to_string(g) +
                             " leaves the subgroup"),
          g(g), x(x) {}
    int g, x;
};

struct Quotient {
    FiniteGroup group;
    std::vector<int> projection;  // parent element -> quotient element
    std::vector<int> reps;        // quotient element -> least parent representative
};

Quotient quotient(const FiniteGroup& g, const Subgroup& n);

// Finite G-set: action map element x point -> point.
struct GSet {
    const FiniteGroup* group = nullptr;
    std::vector<std::vector<int>> act;  // [element][point]
    std::vector<std::string> labels;    // per point

    std::size_t size() const { return act.empty() ? 0 : act[0].size(); }
    int apply(int g, int x) const { return act[g][x]; }
    bool is_transitive() const;
    // orbit of a point, sorted
    std::vector<int> orbit(int x) const;
    std::size_t stabilizer_order(int x) const;
    void check() const;  // identity + compatibility laws, exhaustive
};

// Left cosets gH with left translation; point 0 is the coset H; points are
// ordered by their least element.
GSet cosets(const FiniteGroup& g, const Subgroup& h);

// Regular action of G on itself.
GSet regular_gset(const FiniteGroup& g);

}  // namespace groups
