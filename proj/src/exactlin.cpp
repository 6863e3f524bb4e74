#include "normbr/exactlin.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <iostream>
#include <cstdlib>
#include <set>

namespace exactlin {

namespace {

using SparseRow = std::map<std::size_t, Int>;

Int abs_int(const Int& v) { return v < 0 ? Int(-v) : v; }

// Nearest-integer quotient: remainder magnitude at most |d|/2. Keeps
// elimination remainders (and hence transform entries) small.
Int div_round(const Int& a, const Int& d) {
    Int q = a / d;
    Int r = a - q * d;
    if (r != 0 && 2 * abs_int(r) > abs_int(d)) q += ((r > 0) == (d > 0)) ? 1 : -1;
    return q;
}


void check_cells(std::size_t rows, std::size_t cols, const Caps& caps,
                 const char* op) {
    if (rows != 0 && cols != 0 && rows > caps.max_cells / cols)
        throw CapError(std::string(op) + ": matrix exceeds cell cap (" +
                           std::to_string(rows) + "x" + std::to_string(cols) + ")",
                       rows, cols);
}

void check_entry(const Int& v, std::size_t rows, std::size_t cols,
                 const Caps& caps) {
    if (msb(abs_int(v) + 1) >= caps.max_entry_bits)
        throw CapError("entry bit-length cap exceeded", rows, cols);
}

// dst -= q * src, dropping explicit zeros.
void row_axpy(SparseRow& dst, const Int& q, const SparseRow& src,
              std::size_t rows, std::size_t cols, const Caps& caps) {
    if (q == 0) return;
    for (const auto& [c, v] : src) {
        auto it = dst.find(c);
        if (it == dst.end()) {
            Int nv = -q * v;
            if (nv != 0) {
                check_entry(nv, rows, cols, caps);
                dst.emplace(c, std::move(nv));
            }
        } else {
            it->second -= q * v;
            if (it->second == 0)
                dst.erase(it);
            else
                check_entry(it->second, rows, cols, caps);
        }
    }
}

void row_negate(SparseRow& r) {
    for (auto& [c, v] : r) v = -v;
}

std::vector<SparseRow> rows_of_transpose(const IntMatrix& A) {
    std::vector<SparseRow> rows(A.cols());
    A.for_each([&](std::size_t r, std::size_t c, const Int& v) { rows[c][r] = v; });
    return rows;
}

std::vector<SparseRow> rows_of(const IntMatrix& A) {
    std::vector<SparseRow> rows(A.rows());
    A.for_each([&](std::size_t r, std::size_t c, const Int& v) { rows[r][c] = v; });
    return rows;
}

std::vector<SparseRow> identity_rows(std::size_t n) {
    std::vector<SparseRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1;
    return rows;
}

// Integer row echelon. Pivot rule: least nonzero magnitude, ties by row
// order. Returns (pivot row, pivot col) pairs in elimination order; rows
// are permuted so pivot rows come first, in pivot-column order. Any
// transform rows get the same operations (and permutation) applied.
struct EchelonResult {
    std::vector<std::size_t> pivot_cols;  // per pivot row, ascending
};

EchelonResult row_echelon(std::vector<SparseRow>& m,
                          std::vector<SparseRow>* transform, std::size_t ncols,
                          const Caps& caps) {
    const std::size_t nrows = m.size();
    EchelonResult result;
    std::vector<bool> used(nrows, false);
    std::vector<std::size_t> pivot_rows;

    for (std::size_t c = 0; c < ncols; ++c) {
        // Rows still active with a nonzero entry in this column.
        std::vector<std::size_t> active;
        for (std::size_t r = 0; r < nrows; ++r) {
            if (used[r]) continue;
            auto it = m[r].find(c);
            if (it != m[r].end()) active.push_back(r);
        }
        if (active.empty()) continue;

        // Euclid among the active rows until a single nonzero remains.
        while (active.size() > 1) {
            std::size_t best = active[0];
            for (std::size_t r : active)
                if (abs_int(m[r].at(c)) < abs_int(m[best].at(c))) best = r;
            const Int pv = m[best].at(c);
            std::vector<std::size_t> next = {best};
            for (std::size_t r : active) {
                if (r == best) continue;
                Int q = div_round(m[r].at(c), pv);
                row_axpy(m[r], q, m[best], nrows, ncols, caps);
                if (transform) row_axpy((*transform)[r], q, (*transform)[best], nrows, ncols, caps);
                if (m[r].count(c)) next.push_back(r);
            }
            active = std::move(next);
        }
        const std::size_t p = active[0];
        if (m[p].at(c) < 0) {
            row_negate(m[p]);
            if (transform) row_negate((*transform)[p]);
        }
        used[p] = true;
        pivot_rows.push_back(p);
        result.pivot_cols.push_back(c);
    }

    // Stable permutation: pivot rows first in pivot order, then the rest.
    std::vector<SparseRow> nm(nrows);
    std::vector<SparseRow> nt;
    if (transform) nt.resize(nrows);
    std::size_t out = 0;
    for (std::size_t p : pivot_rows) {
        nm[out] = std::move(m[p]);
        if (transform) nt[out] = std::move((*transform)[p]);
        ++out;
    }
    for (std::size_t r = 0; r < nrows; ++r) {
        if (used[r]) continue;
        nm[out] = std::move(m[r]);
        if (transform) nt[out] = std::move((*transform)[r]);
        ++out;
    }
    m = std::move(nm);
    if (transform) *transform = std::move(nt);
    return result;
}

IntMatrix matrix_from_rows(std::vector<SparseRow>&& rows, std::size_t ncols) {
    IntMatrix out(rows.size(), ncols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (auto& [c, v] : rows[r]) out.set(r, c, v);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, bool dense)
    : rows_(rows), cols_(cols), dense_(dense) {
    if (dense_) d_.assign(rows * cols, Int(0));
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<Vec>& rows) {
    std::size_t nc = rows.empty() ? 0 : rows[0].size();
    IntMatrix m(rows.size(), nc);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != nc) throw std::invalid_argument("ragged rows");
        for (std::size_t c = 0; c < nc; ++c)
            if (rows[r][c] != 0) m.set(r, c, rows[r][c]);
    }
    return m;
}

IntMatrix IntMatrix::from_cols(const std::vector<Vec>& cols) {
    std::size_t nr = cols.empty() ? 0 : cols[0].size();
    IntMatrix m(nr, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != nr) throw std::invalid_argument("ragged cols");
        for (std::size_t r = 0; r < nr; ++r)
            if (cols[c][r] != 0) m.set(r, c, cols[c][r]);
    }
    return m;
}

IntMatrix IntMatrix::col_vector(const Vec& v) {
    return from_cols({v});
}

std::size_t IntMatrix::nnz() const {
    std::size_t n = 0;
    for_each([&](std::size_t, std::size_t, const Int&) { ++n; });
    return n;
}

Int IntMatrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("IntMatrix::at");
    if (dense_) return d_[r * cols_ + c];
    auto it = sp_.find({r, c});
    return it == sp_.end() ? Int(0) : it->second;
}

void IntMatrix::set(std::size_t r, std::size_t c, const Int& v) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("IntMatrix::set");
    if (dense_) {
        d_[r * cols_ + c] = v;
    } else if (v == 0) {
        sp_.erase({r, c});
    } else {
        sp_[{r, c}] = v;
    }
}

IntMatrix IntMatrix::to_dense() const {
    IntMatrix m(rows_, cols_, true);
    for_each([&](std::size_t r, std::size_t c, const Int& v) { m.set(r, c, v); });
    return m;
}

IntMatrix IntMatrix::to_sparse() const {
    IntMatrix m(rows_, cols_);
    for_each([&](std::size_t r, std::size_t c, const Int& v) { m.set(r, c, v); });
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix m(cols_, rows_, dense_);
    for_each([&](std::size_t r, std::size_t c, const Int& v) { m.set(c, r, v); });
    return m;
}

IntMatrix IntMatrix::mul(const IntMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("mul: shape mismatch");
    // Column-major accumulation over the right factor keeps this sparse.
    std::vector<SparseRow> rcols(other.cols_);
    other.for_each([&](std::size_t r, std::size_t c, const Int& v) { rcols[c][r] = v; });
    std::vector<SparseRow> lrows(rows_);
    for_each([&](std::size_t r, std::size_t c, const Int& v) { lrows[r][c] = v; });

    IntMatrix out(rows_, other.cols_, dense_ && other.dense_);
    for (std::size_t c = 0; c < other.cols_; ++c) {
        if (rcols[c].empty()) continue;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (lrows[r].empty()) continue;
            Int acc = 0;
            const SparseRow &a = lrows[r], &b = rcols[c];
            const SparseRow& small = a.size() < b.size() ? a : b;
            const SparseRow& big = a.size() < b.size() ? b : a;
            for (const auto& [k, v] : small) {
                auto it = big.find(k);
                if (it != big.end()) acc += v * it->second;
            }
            if (acc != 0) out.set(r, c, acc);
        }
    }
    return out;
}

Vec IntMatrix::mul_vec(const Vec& v) const {
    if (v.size() != cols_) throw std::invalid_argument("mul_vec: shape mismatch");
    Vec out(rows_, Int(0));
    for_each([&](std::size_t r, std::size_t c, const Int& e) { out[r] += e * v[c]; });
    return out;
}

IntMatrix IntMatrix::add(const IntMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("add: shape mismatch");
    IntMatrix out = to_sparse();
    other.for_each([&](std::size_t r, std::size_t c, const Int& v) {
        out.set(r, c, out.at(r, c) + v);
    });
    return out;
}

IntMatrix IntMatrix::negated() const { return scaled(Int(-1)); }

IntMatrix IntMatrix::scaled(const Int& s) const {
    IntMatrix out(rows_, cols_, dense_);
    if (s == 0) return IntMatrix(rows_, cols_, dense_);
    for_each([&](std::size_t r, std::size_t c, const Int& v) { out.set(r, c, v * s); });
    return out;
}

IntMatrix IntMatrix::hstack(const IntMatrix& other) const {
    if (rows_ != other.rows_) throw std::invalid_argument("hstack: row mismatch");
    IntMatrix out(rows_, cols_ + other.cols_);
    for_each([&](std::size_t r, std::size_t c, const Int& v) { out.set(r, c, v); });
    other.for_each(
        [&](std::size_t r, std::size_t c, const Int& v) { out.set(r, cols_ + c, v); });
    return out;
}

IntMatrix IntMatrix::vstack(const IntMatrix& other) const {
    if (cols_ != other.cols_) throw std::invalid_argument("vstack: col mismatch");
    IntMatrix out(rows_ + other.rows_, cols_);
    for_each([&](std::size_t r, std::size_t c, const Int& v) { out.set(r, c, v); });
    other.for_each(
        [&](std::size_t r, std::size_t c, const Int& v) { out.set(rows_ + r, c, v); });
    return out;
}

Vec IntMatrix::col(std::size_t c) const {
    Vec out(rows_, Int(0));
    for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

Vec IntMatrix::row(std::size_t r) const {
    Vec out(cols_, Int(0));
    for (std::size_t c = 0; c < cols_; ++c) out[c] = at(r, c);
    return out;
}

bool IntMatrix::is_zero() const {
    bool z = true;
    for_each([&](std::size_t, std::size_t, const Int& v) {
        if (v != 0) z = false;
    });
    return z;
}

bool IntMatrix::operator==(const IntMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    bool eq = true;
    for_each([&](std::size_t r, std::size_t c, const Int& v) {
        if (other.at(r, c) != v) eq = false;
    });
    other.for_each([&](std::size_t r, std::size_t c, const Int& v) {
        if (at(r, c) != v) eq = false;
    });
    return eq;
}

// ---------------------------------------------------------------------------
// Smith normal form

std::vector<Int> SnfResult::diagonal() const {
    std::vector<Int> d;
    std::size_t n = std::min(S.rows(), S.cols());
    for (std::size_t i = 0; i < n; ++i) d.push_back(S.at(i, i));
    return d;
}

std::size_t SnfResult::rank() const {
    std::size_t r = 0;
    for (const Int& d : diagonal())
        if (d != 0) ++r;
    return r;
}

namespace {

// Working state for SNF: cur = L * A * R, with L kept as rows and R as rows
// of R^T, plus a column occupancy index for sparse pivot hunting.
struct SnfState {
    std::size_t nr, nc;
    Caps caps;
    std::vector<SparseRow> cur;               // row-major
    std::vector<SparseRow> left;              // rows of L
    std::vector<SparseRow> rightT;            // rows of R^T
    std::vector<std::set<std::size_t>> colrows;  // per column: rows occupying it

    void row_op(std::size_t r, const Int& q, std::size_t src) {
        // rows[r] -= q * rows[src]
        if (q == 0) return;
        row_axpy(cur[r], q, cur[src], nr, nc, caps);
        row_axpy(left[r], q, left[src], nr, nc, caps);
        for (const auto& [c, v] : cur[src]) {
            if (cur[r].count(c))
                colrows[c].insert(r);
            else
                colrows[c].erase(r);
        }
    }

    void row_swap(std::size_t r1, std::size_t r2) {
        if (r1 == r2) return;
        for (const auto& [c, v] : cur[r1]) colrows[c].erase(r1);
        for (const auto& [c, v] : cur[r2]) colrows[c].erase(r2);
        std::swap(cur[r1], cur[r2]);
        std::swap(left[r1], left[r2]);
        for (const auto& [c, v] : cur[r1]) colrows[c].insert(r1);
        for (const auto& [c, v] : cur[r2]) colrows[c].insert(r2);
    }

    void row_neg(std::size_t r) {
        row_negate(cur[r]);
        row_negate(left[r]);
    }

    void col_op(std::size_t c, const Int& q, std::size_t src) {
        // col c -= q * col src
        if (q == 0) return;
        auto occupants = colrows[src];  // copy: we mutate memberships of c only
        for (std::size_t r : occupants) {
            Int delta = q * cur[r].at(src);
            auto it = cur[r].find(c);
            if (it == cur[r].end()) {
                if (delta != 0) {
                    check_entry(delta, nr, nc, caps);
                    cur[r].emplace(c, -delta);
                    colrows[c].insert(r);
                }
            } else {
                it->second -= delta;
                if (it->second == 0) {
                    cur[r].erase(it);
                    colrows[c].erase(r);
                } else {
                    check_entry(it->second, nr, nc, caps);
                }
            }
        }
        row_axpy(rightT[c], q, rightT[src], nr, nc, caps);
    }

    void col_swap(std::size_t c1, std::size_t c2) {
        if (c1 == c2) return;
        std::set<std::size_t> touched = colrows[c1];
        touched.insert(colrows[c2].begin(), colrows[c2].end());
        for (std::size_t r : touched) {
            auto i1 = cur[r].find(c1);
            auto i2 = cur[r].find(c2);
            Int v1 = i1 == cur[r].end() ? Int(0) : i1->second;
            Int v2 = i2 == cur[r].end() ? Int(0) : i2->second;
            if (v2 != 0) cur[r][c1] = v2; else cur[r].erase(c1);
            if (v1 != 0) cur[r][c2] = v1; else cur[r].erase(c2);
        }
        std::swap(colrows[c1], colrows[c2]);
        std::swap(rightT[c1], rightT[c2]);
    }
};

}  // namespace

SnfResult smith_normal_form(const IntMatrix& A, const Caps& caps) {
    check_cells(A.rows(), A.cols(), caps, "smith_normal_form");
    const std::size_t nr = A.rows(), nc = A.cols();

    SnfState st;
    st.nr = nr;
    st.nc = nc;
    st.caps = caps;
    st.cur = rows_of(A);
    st.left = identity_rows(nr);
    st.rightT = identity_rows(nc);
    st.colrows.assign(nc, {});
    for (std::size_t r = 0; r < nr; ++r)
        for (const auto& [c, v] : st.cur[r]) st.colrows[c].insert(r);

    // Bring the matrix to diagonal form working one pivot position at a
    // time: move the least-magnitude nonzero of the trailing submatrix to
    // (t, t), then clear its column and row, iterating until both are lone.
    const std::size_t nmin = std::min(nr, nc);
    std::size_t t = 0;
    for (; t < nmin; ++t) {
        int inner = 0;
        while (true) {
            if (std::getenv("EXACTLIN_DEBUG")) {
                std::size_t nnz = 0, bits = 0;
                for (auto& r : st.cur)
                    for (auto& [c, v] : r) {
                        ++nnz;
                        bits = std::max(bits, (std::size_t)msb(abs_int(v)) + 1);
                    }
                std::cerr << "snf t=" << t << " inner=" << inner++
                          << " nnz=" << nnz << " maxbits=" << bits << std::endl;
            }
            std::size_t br = nr, bc = nc;
            bool have = false;
            Int best = 0;
            for (std::size_t r = t; r < nr; ++r)
                for (const auto& [c, v] : st.cur[r]) {
                    if (c < t) continue;
                    Int a = abs_int(v);
                    if (!have || a < best) {
                        have = true;
                        best = a;
                        br = r;
                        bc = c;
                    }
                }
            if (!have) break;
            st.row_swap(t, br);
            st.col_swap(t, bc);

            // Reduce column t below the pivot, then row t to its right,
            // with nearest quotients. Remainders are at most half the
            // pivot, so the minimum shrinks geometrically until lone.
            const Int d = st.cur[t].at(t);
            std::vector<std::size_t> below(st.colrows[t].begin(), st.colrows[t].end());
            for (std::size_t r : below) {
                if (r == t) continue;
                st.row_op(r, div_round(st.cur[r].at(t), d), t);
            }
            std::vector<std::size_t> right;
            for (const auto& [c, v] : st.cur[t])
                if (c > t) right.push_back(c);
            for (std::size_t c : right)
                st.col_op(c, div_round(st.cur[t].at(c), d), t);
            if (st.colrows[t].size() != 1 || st.cur[t].size() != 1) continue;
            // Lone pivot. Pull in a row holding an entry the pivot does not
            // divide, if any; the next round shrinks the pivot toward the
            // gcd of the whole trailing block, so the diagonal comes out in
            // divisibility order and later eliminations divide evenly.
            const Int piv = st.cur[t].at(t);
            std::size_t bad = nr;
            for (std::size_t r = t + 1; r < nr && bad == nr; ++r)
                for (const auto& [c, v] : st.cur[r])
                    if (v % piv != 0) {
                        bad = r;
                        break;
                    }
            if (bad == nr) break;
            st.row_op(t, Int(-1), bad);
        }
        if (st.cur[t].empty()) break;  // trailing submatrix is zero
    }

    // Divisibility fixup on the diagonal with 2x2 blocks.
    std::size_t rank = 0;
    while (rank < st.cur.size() && !st.cur[rank].empty()) ++rank;
    auto diag = [&](std::size_t i) -> Int { return st.cur[i].count(i) ? st.cur[i].at(i) : Int(0); };
    for (std::size_t i = 0; i < rank; ++i) {
        for (std::size_t j = i + 1; j < rank; ++j) {
            Int a = diag(i), b = diag(j);
            if (a != 0 && b % a == 0) continue;
            // col_i += col_j  (only row j has an entry in col j)
            st.cur[j][i] = b;
            row_axpy(st.rightT[i], Int(-1), st.rightT[j], nr, nc, caps);
            // Euclid on rows i, j restricted to columns i, j.
            while (true) {
                Int ai = diag(i);
                Int aj = st.cur[j].count(i) ? st.cur[j].at(i) : Int(0);
                if (aj == 0) break;
                if (ai == 0 || abs_int(ai) < abs_int(aj)) {
                    std::swap(st.cur[i], st.cur[j]);
                    std::swap(st.left[i], st.left[j]);
                    continue;
                }
                Int q = div_round(ai, aj);
                row_axpy(st.cur[i], q, st.cur[j], nr, nc, caps);
                row_axpy(st.left[i], q, st.left[j], nr, nc, caps);
            }
            // Clear the off-diagonal entry (i, j) with a column op:
            // col_j -= (cur[i][j]/d_i) * col_i.
            Int di = diag(i);
            Int cij = st.cur[i].count(j) ? st.cur[i].at(j) : Int(0);
            if (cij != 0) {
                Int q = cij / di;
                assert(cij % di == 0);
                st.cur[i].erase(j);
                row_axpy(st.rightT[j], q, st.rightT[i], nr, nc, caps);
            }
            if (diag(i) < 0) {
                row_negate(st.cur[i]);
                row_negate(st.left[i]);
            }
            if (diag(j) < 0) {
                row_negate(st.cur[j]);
                row_negate(st.left[j]);
            }
        }
    }
    for (std::size_t i = 0; i < rank; ++i)
        if (diag(i) < 0) {
            row_negate(st.cur[i]);
            row_negate(st.left[i]);
        }

    SnfResult out;
    out.U = matrix_from_rows(std::move(st.left), nr);
    out.S = matrix_from_rows(std::move(st.cur), nc);
    out.V = matrix_from_rows(std::move(st.rightT), nc).transpose();
    return out;
}

IntMatrix kernel_lattice(const IntMatrix& A, const Caps& caps) {
    check_cells(A.rows(), A.cols(), caps, "kernel_lattice");
    auto rows = rows_of_transpose(A);  // one row per column of A
    auto transform = identity_rows(A.cols());
    row_echelon(rows, &transform, A.rows(), caps);
    std::vector<Vec> cols;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].empty()) continue;
        Vec v(A.cols(), Int(0));
        for (const auto& [c, val] : transform[r]) v[c] = val;
        cols.push_back(std::move(v));
    }
    IntMatrix out(A.cols(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < A.cols(); ++r)
            if (cols[c][r] != 0) out.set(r, c, cols[c][r]);
    return out;
}

Int det(const IntMatrix& A, const Caps& caps) {
    if (A.rows() != A.cols()) throw std::invalid_argument("det: not square");
    const std::size_t n = A.rows();
    check_cells(n, n, caps, "det");
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    std::vector<Vec> m(n, Vec(n, Int(0)));
    A.for_each([&](std::size_t r, std::size_t c, const Int& v) { m[r][c] = v; });
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

// ---------------------------------------------------------------------------
// ColumnSolver

ColumnSolver::ColumnSolver(const IntMatrix& A, const Caps& caps)
    : ambient_(A.rows()), src_cols_(A.cols()) {
    check_cells(A.rows(), A.cols(), caps, "ColumnSolver");
    auto rows = rows_of_transpose(A);
    auto transform = identity_rows(A.cols());
    auto ech = row_echelon(rows, &transform, A.rows(), caps);
    for (std::size_t r = 0; r < ech.pivot_cols.size(); ++r) {
        echelon_.push_back(std::move(rows[r]));
        pivots_.push_back(ech.pivot_cols[r]);
        transform_.push_back(std::move(transform[r]));
    }
}

bool ColumnSolver::solve(const Vec& b, Vec* coeffs) const {
    if (b.size() != ambient_) throw std::invalid_argument("solve: size mismatch");
    SparseRow rem;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] != 0) rem[i] = b[i];
    if (coeffs) coeffs->assign(src_cols_, Int(0));
    Caps caps;  // local arithmetic only
    for (std::size_t t = 0; t < echelon_.size(); ++t) {
        auto it = rem.find(pivots_[t]);
        if (it == rem.end()) continue;
        const Int& lead = echelon_[t].at(pivots_[t]);
        if (it->second % lead != 0) return false;
        Int q = it->second / lead;
        row_axpy(rem, q, echelon_[t], ambient_, src_cols_, caps);
        if (coeffs)
            for (const auto& [c, v] : transform_[t]) (*coeffs)[c] += q * v;
    }
    return rem.empty();
}

IntMatrix ColumnSolver::lattice_basis() const {
    IntMatrix out(ambient_, echelon_.size());
    for (std::size_t t = 0; t < echelon_.size(); ++t)
        for (const auto& [r, v] : echelon_[t]) out.set(r, t, v);
    return out;
}

// ---------------------------------------------------------------------------
// FinAb

FinAb FinAb::cyclic(const Int& n) {
    FinAb g;
    if (n == 0)
        g.free_rank = 1;
    else if (n > 1)
        g.invariant_factors.push_back(n);
    return g;
}

Int FinAb::order() const {
    if (!is_finite()) throw std::logic_error("order of infinite group");
    Int o = 1;
    for (const Int& d : invariant_factors) o *= d;
    return o;
}

std::string FinAb::str() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const Int& d : invariant_factors) {
        if (!first) os << " x ";
        os << "Z/" << d;
        first = false;
    }
    if (free_rank > 0) {
        if (!first) os << " x ";
        os << "Z^" << free_rank;
    }
    return os.str();
}

FinAb direct_sum(const FinAb& a, const FinAb& b) {
    // Merge via SNF of the diagonal relation matrix.
    std::vector<Int> all = a.invariant_factors;
    all.insert(all.end(), b.invariant_factors.begin(), b.invariant_factors.end());
    IntMatrix rel(all.size(), all.size());
    for (std::size_t i = 0; i < all.size(); ++i) rel.set(i, i, all[i]);
    auto snf = smith_normal_form(rel);
    FinAb out;
    for (const Int& d : snf.diagonal())
        if (d > 1) out.invariant_factors.push_back(d);
    out.free_rank = a.free_rank + b.free_rank;
    return out;
}

// ---------------------------------------------------------------------------
// Subquotient

Subquotient::Subquotient(std::size_t ambient, const IntMatrix& numerator_gens,
                         const IntMatrix& denominator_gens, const Caps& caps)
    : ambient_(ambient) {
    if (numerator_gens.rows() != ambient || denominator_gens.rows() != ambient)
        throw std::invalid_argument("subquotient: ambient mismatch");

    ColumnSolver num_solver(numerator_gens, caps);
    basis_ = num_solver.lattice_basis();
    basis_solver_ = ColumnSolver(basis_, caps);
    const std::size_t k = basis_.cols();

    // Denominator generators in numerator-basis coordinates.
    IntMatrix coords(k, denominator_gens.cols());
    for (std::size_t c = 0; c < denominator_gens.cols(); ++c) {
        Vec x;
        if (!basis_solver_.solve(denominator_gens.col(c), &x))
            throw std::invalid_argument(
                "subquotient: denominator not contained in numerator span");
        for (std::size_t r = 0; r < k; ++r)
            if (x[r] != 0) coords.set(r, c, x[r]);
    }

    auto snf = smith_normal_form(coords, caps);
    snf_u_ = snf.U;
    auto diag = snf.diagonal();
    const std::size_t rank = snf.rank();

    moduli_.clear();
    keep_.clear();
    for (std::size_t i = 0; i < rank; ++i) {
        if (diag[i] > 1) {
            keep_.push_back(i);
            moduli_.push_back(diag[i]);
        }
    }
    std::size_t free_start = keep_.size();
    for (std::size_t i = rank; i < k; ++i) {
        keep_.push_back(i);
        moduli_.push_back(0);
    }

    group_.invariant_factors.assign(moduli_.begin(), moduli_.begin() + free_start);
    group_.free_rank = k - rank;

    // Canonical generators: B * Uinv * e_i for each kept coordinate i.
    ColumnSolver u_solver(snf_u_, caps);
    group_.generators.clear();
    for (std::size_t t = 0; t < keep_.size(); ++t) {
        Vec e(k, Int(0));
        e[keep_[t]] = 1;
        Vec x;
        bool ok = u_solver.solve(e, &x);
        if (!ok) throw std::logic_error("subquotient: U not invertible");
        group_.generators.push_back(basis_.mul_vec(x));
    }
}

Vec Subquotient::project(const Vec& ambient_vec) const {
    Vec x;
    if (!basis_solver_.solve(ambient_vec, &x))
        throw std::invalid_argument("project: vector outside numerator span");
    Vec y = snf_u_.mul_vec(x);
    Vec out(keep_.size(), Int(0));
    for (std::size_t t = 0; t < keep_.size(); ++t) {
        Int v = y[keep_[t]];
        if (moduli_[t] != 0) {
            v %= moduli_[t];
            if (v < 0) v += moduli_[t];
        }
        out[t] = v;
    }
    return out;
}

Vec Subquotient::lift(const Vec& coords) const {
    if (coords.size() != group_.generators.size())
        throw std::invalid_argument("lift: coordinate size mismatch");
    Vec out(ambient_, Int(0));
    for (std::size_t t = 0; t < coords.size(); ++t)
        for (std::size_t i = 0; i < ambient_; ++i)
            out[i] += coords[t] * group_.generators[t][i];
    return out;
}

// ---------------------------------------------------------------------------
// Presentations and homomorphisms

Presentation Presentation::cyclic(const Int& n) {
    Presentation p;
    p.ambient = 1;
    p.relations = IntMatrix(1, n == 0 ? 0 : 1);
    if (n != 0) p.relations.set(0, 0, n);
    return p;
}

Presentation Presentation::of(const FinAb& g) {
    std::size_t n = g.invariant_factors.size() + g.free_rank;
    Presentation p;
    p.ambient = n;
    p.relations = IntMatrix(n, g.invariant_factors.size());
    for (std::size_t i = 0; i < g.invariant_factors.size(); ++i)
        p.relations.set(i, i, g.invariant_factors[i]);
    return p;
}

AbHom AbHom::identity(const Presentation& p) {
    return {p, p, IntMatrix::identity(p.ambient)};
}

AbHom AbHom::compose(const AbHom& g, const AbHom& f) {
    return {f.src, g.dst, g.matrix.mul(f.matrix)};
}

bool AbHom::well_defined(const Caps& caps) const {
    if (matrix.rows() != dst.ambient || matrix.cols() != src.ambient) return false;
    ColumnSolver solver(dst.relations, caps);
    for (std::size_t c = 0; c < src.relations.cols(); ++c) {
        if (!solver.solve(matrix.mul_vec(src.relations.col(c)))) return false;
    }
    return true;
}

HomAnalysis hom_analyze(const AbHom& h, const Caps& caps) {
    const std::size_t a = h.src.ambient, b = h.dst.ambient;
    if (h.matrix.rows() != b || h.matrix.cols() != a)
        throw std::invalid_argument("hom_analyze: matrix shape mismatch");
    {
        ColumnSolver solver(h.dst.relations, caps);
        for (std::size_t c = 0; c < h.src.relations.cols(); ++c) {
            Vec img = h.matrix.mul_vec(h.src.relations.col(c));
            if (!solver.solve(img))
                throw IllDefinedHom("homomorphism does not respect relations",
                                    h.src.relations.col(c));
        }
    }

    // Preimage lattice K = {x : M x in span(dst relations)}.
    IntMatrix stacked = h.matrix.hstack(h.dst.relations);
    IntMatrix ker = kernel_lattice(stacked, caps);
    IntMatrix kpre(a, ker.cols());
    ker.for_each([&](std::size_t r, std::size_t c, const Int& v) {
        if (r < a) kpre.set(r, c, v);
    });

    HomAnalysis out;
    {
        Subquotient sq(a, kpre, h.src.relations, caps);
        out.kernel = sq.group();
    }
    {
        // Image == Z^a / K, generators pushed through the matrix.
        Subquotient sq(a, IntMatrix::identity(a), kpre, caps);
        out.image = sq.group();
        for (auto& g : out.image.generators) g = h.matrix.mul_vec(g);
    }
    {
        Subquotient sq(b, IntMatrix::identity(b),
                       h.matrix.hstack(h.dst.relations), caps);
        out.cokernel = sq.group();
    }
    return out;
}

CokernelResult cokernel(const IntMatrix& A, std::size_t ambient_rank,
                        const Caps& caps) {
    if (A.rows() != ambient_rank)
        throw std::invalid_argument("cokernel: ambient rank mismatch");
    CokernelResult out;
    out.data = Subquotient(ambient_rank, IntMatrix::identity(ambient_rank), A, caps);
    out.group = out.data.group();
    return out;
}

Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

}  // namespace exactlin
