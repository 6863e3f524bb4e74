#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace exactlin {

using Int = boost::multiprecision::mpz_int;
using Vec = std::vector<Int>;

// Resource limits for the elimination routines. Exceeding a cap raises
// CapError with the offending dimensions; results are never truncated.
struct Caps {
    std::size_t max_cells = 40'000'000;  // rows * cols
    std::size_t max_entry_bits = 100'000;
};

class CapError : public std::runtime_error {
public:
    CapError(const std::string& what, std::size_t rows, std::size_t cols)
        : std::runtime_error(what), rows(rows), cols(cols) {}
    std::size_t rows, cols;
};

// Integer matrix, sparse coordinate storage by default with an explicit
// dense mode. Entry lookups outside stored positions return zero.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols, bool dense = false);

    static IntMatrix identity(std::size_t n);
    static IntMatrix zero(std::size_t rows, std::size_t cols) { return IntMatrix(rows, cols); }
    static IntMatrix from_rows(const std::vector<Vec>& rows);
    static IntMatrix from_cols(const std::vector<Vec>& cols);
    static IntMatrix col_vector(const Vec& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool dense() const { return dense_; }
    std::size_t nnz() const;

    Int at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, const Int& v);

    IntMatrix to_dense() const;
    IntMatrix to_sparse() const;

    IntMatrix transpose() const;
    IntMatrix mul(const IntMatrix& other) const;
    Vec mul_vec(const Vec& v) const;
    IntMatrix add(const IntMatrix& other) const;
    IntMatrix negated() const;
    IntMatrix scaled(const Int& c) const;
    IntMatrix hstack(const IntMatrix& other) const;
    IntMatrix vstack(const IntMatrix& other) const;
    Vec col(std::size_t c) const;
    Vec row(std::size_t r) const;

    bool is_zero() const;
    bool operator==(const IntMatrix& other) const;
    bool operator!=(const IntMatrix& other) const { return !(*this == other); }

    // Iterate stored nonzero entries as (row, col, value).
    template <class F>
    void for_each(F&& f) const {
        if (dense_) {
            for (std::size_t r = 0; r < rows_; ++r)
                for (std::size_t c = 0; c < cols_; ++c)
                    if (d_[r * cols_ + c] != 0) f(r, c, d_[r * cols_ + c]);
        } else {
            for (const auto& [rc, v] : sp_)
                if (v != 0) f(rc.first, rc.second, v);
        }
    }

private:
    std::size_t rows_, cols_;
    bool dense_ = false;
    std::map<std::pair<std::size_t, std::size_t>, Int> sp_;
    std::vector<Int> d_;
};

struct SnfResult {
    IntMatrix U, S, V;  // U*A*V = S, U and V unimodular, S diagonal d1 | d2 | ...
    std::vector<Int> diagonal() const;
    std::size_t rank() const;
};

SnfResult smith_normal_form(const IntMatrix& A, const Caps& caps = Caps());

// Basis of the integer kernel lattice {x : A x = 0}, as matrix columns.
IntMatrix kernel_lattice(const IntMatrix& A, const Caps& caps = Caps());

Int det(const IntMatrix& A, const Caps& caps = Caps());

// Column-space membership and solving. Built once per matrix, then reused.
class ColumnSolver {
public:
    ColumnSolver() = default;
    explicit ColumnSolver(const IntMatrix& A, const Caps& caps = Caps());

    // True iff b lies in the integer column span of A. When coeffs is
    // non-null and the test passes, *coeffs holds x with A x = b.
    bool solve(const Vec& b, Vec* coeffs = nullptr) const;

    // Lattice rank of the column span.
    std::size_t rank() const { return echelon_.size(); }

    // Echelonized lattice basis of the column span, as matrix columns.
    IntMatrix lattice_basis() const;

private:
    std::size_t ambient_ = 0, src_cols_ = 0;
    // Echelon rows (vectors in the ambient space) with their pivot columns,
    // plus the row-transform expressing them in original columns.
    std::vector<std::map<std::size_t, Int>> echelon_;
    std::vector<std::size_t> pivots_;
    std::vector<std::map<std::size_t, Int>> transform_;
};

// Finite(ly generated) abelian group in invariant-factor form.
// Canonical: factors of 1 are dropped, d1 | d2 | ... | dr, all >= 2.
struct FinAb {
    std::vector<Int> invariant_factors;
    std::size_t free_rank = 0;
    // Optional representatives of the canonical generators in an ambient
    // presentation (torsion generators first, then free generators).
    std::vector<Vec> generators;

    static FinAb trivial() { return FinAb{}; }
    static FinAb cyclic(const Int& n);

    bool is_trivial() const { return invariant_factors.empty() && free_rank == 0; }
    bool is_finite() const { return free_rank == 0; }
    Int order() const;  // valid when finite
    bool same_type(const FinAb& other) const {
        return invariant_factors == other.invariant_factors && free_rank == other.free_rank;
    }
    std::string str() const;  // "Z/2 x Z/4 x Z^1", "0" when trivial
};

// Direct sum in canonical form (generators dropped).
FinAb direct_sum(const FinAb& a, const FinAb& b);

// Subquotient N/D of an ambient Z^n, where N and D are given by generating
// sets (matrix columns) with span(D) <= span(N) (checked). Carries the data
// needed to project ambient vectors lying in span(N) onto canonical
// coordinates of the quotient.
class Subquotient {
public:
    Subquotient() = default;
    Subquotient(std::size_t ambient, const IntMatrix& numerator_gens,
                const IntMatrix& denominator_gens, const Caps& caps = Caps());

    const FinAb& group() const { return group_; }
    std::size_t ambient() const { return ambient_; }

    // Canonical coordinates of an ambient vector (must lie in span(N);
    // throws otherwise). Torsion coords reduced mod d_i, free coords exact.
    Vec project(const Vec& ambient_vec) const;

    // Ambient representative with the given canonical coordinates.
    Vec lift(const Vec& coords) const;

private:
    std::size_t ambient_ = 0;
    FinAb group_;
    ColumnSolver basis_solver_;       // solves within the numerator lattice basis
    IntMatrix basis_;                 // columns: lattice basis B of span(N)
    IntMatrix snf_u_;                 // U from SNF of D expressed in B-coordinates
    std::vector<std::size_t> keep_;   // rows of U kept (nontrivial factors + free)
    std::vector<Int> moduli_;         // 0 for free coordinates
};

// Presented abelian group Z^ambient / column span of relations.
struct Presentation {
    std::size_t ambient = 0;
    IntMatrix relations;  // ambient x k

    static Presentation free(std::size_t rank) { return {rank, IntMatrix::zero(rank, 0)}; }
    static Presentation cyclic(const Int& n);
    static Presentation of(const FinAb& g);  // diag(d_i) + free block
};

// Homomorphism between presented abelian groups, given on ambient generators.
struct AbHom {
    Presentation src, dst;
    IntMatrix matrix;  // dst.ambient x src.ambient

    // matrix must map src relations into span(dst relations).
    bool well_defined(const Caps& caps = Caps()) const;
    static AbHom identity(const Presentation& p);
    static AbHom compose(const AbHom& g, const AbHom& f);  // g after f
};

struct HomAnalysis {
    FinAb kernel, image, cokernel;  // generators lifted to ambient presentations
};

class IllDefinedHom : public std::runtime_error {
public:
    IllDefinedHom(const std::string& what, Vec witness)
        : std::runtime_error(what), witness(std::move(witness)) {}
    Vec witness;  // violated relation (ambient source coordinates)
};

HomAnalysis hom_analyze(const AbHom& h, const Caps& caps = Caps());

// Z^ambient_rank modulo the column span of A, with projection data.
struct CokernelResult {
    FinAb group;
    Subquotient data;  // numerator = full ambient lattice
};
CokernelResult cokernel(const IntMatrix& A, std::size_t ambient_rank,
                        const Caps& caps = Caps());

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

}  // namespace exactlin
