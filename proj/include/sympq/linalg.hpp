#pragma once

#include <optional>
#include <vector>

#include "sympq/rational.hpp"

namespace sympq {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;  // rows
using IMat = std::vector<std::vector<Int>>;

// Incremental exact row reduction. Rows are normalized to primitive integer
// vectors with positive pivot; reduction is fraction-free in effect, which
// keeps entries small over long runs.
class RowReducer {
  public:
    explicit RowReducer(int ncols) : ncols_(ncols) {}

    // Reduce r against the current echelon rows; if a nonzero remainder is
    // left, store it. Returns true when the rank increased.
    bool add_row(QVec r);
    // Reduce r without storing. Returns the remainder (empty if zero).
    QVec reduce_only(QVec r) const;
    bool in_span(const QVec& r) const;

    int rank() const { return (int)rows_.size(); }
    int ncols() const { return ncols_; }
    const std::vector<QVec>& rows() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

    // Kernel of the matrix whose rows are all vectors ever added, as a basis
    // of column-space relations: vectors x with A x = 0.
    std::vector<QVec> kernel() const;

    // Express r as a combination of the *original* basis vectors is not
    // tracked; use SpanSolver for that.

  private:
    void back_substitute_();  // bring rows_ to reduced echelon form

    int ncols_;
    std::vector<QVec> rows_;
    std::vector<int> pivots_;
};

// Tracks coordinates: maintains a reduced basis of the span of added vectors
// together with the expression of each echelon row in terms of the added
// generators, so members can be expanded in the generators exactly.
class SpanSolver {
  public:
    explicit SpanSolver(int ncols) : ncols_(ncols) {}

    // Returns the index of the generator (order of successful additions) or
    // -1 if v was already in the span.
    int add(const QVec& v);
    int rank() const { return (int)rows_.size(); }
    // Coordinates of v in terms of the added generators; nullopt when v is
    // outside the span. Size equals the number of *added* vectors (including
    // dependent ones, whose coordinate usage is zero).
    std::optional<QVec> solve(const QVec& v) const;

  private:
    int ncols_;
    int n_added_ = 0;
    std::vector<QVec> rows_;    // echelon rows over [A | coords]
    std::vector<int> pivots_;   // pivot column of each row (in A part)
};

int rank_of(const QMat& m, int ncols);
std::vector<QVec> kernel_of(const QMat& m, int ncols);
Rational dot(const QVec& a, const QVec& b);

// Hermite normal form (row-style, lower-left echelon by columns) of an
// integer matrix; rows span the same lattice. Used as a canonical key for
// weight lattices.
IMat hnf_rows(IMat m);
// Elementary divisors (Smith normal form diagonal), nonzero entries only.
std::vector<Int> smith_divisors(IMat m);

}  // namespace sympq
