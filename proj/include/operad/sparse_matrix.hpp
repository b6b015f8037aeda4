#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "operad/rational.hpp"

namespace operad {

// Sparse vector over Q: entries sorted by index, no explicit zeros.
struct SparseVec {
    std::vector<std::pair<int, Rational>> e;

    bool empty() const { return e.empty(); }
    int lead() const { return e.front().first; }

    Rational at(int idx) const;
    void push(int idx, Rational v);  // append; idx must exceed the current last index

    friend bool operator==(const SparseVec&, const SparseVec&) = default;
};

// x + c*y, dropping cancellations.
SparseVec axpy(const SparseVec& x, const Rational& c, const SparseVec& y);
SparseVec scaled(const SparseVec& x, const Rational& c);

// Execution policy for the elimination kernel. `parallel` runs the row
// updates of each pivot step under OpenMP; both policies produce
// byte-identical results (row updates are independent).
enum class Exec { serial, parallel };
Exec default_exec();
void set_default_exec(Exec e);

class SparseMatrix {
  public:
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_(rows) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c, Rational v);
    Rational at(int r, int c) const { return row_[r].at(c); }
    const SparseVec& row(int r) const { return row_[r]; }
    void set_row(int r, SparseVec v) { row_[r] = std::move(v); }

  private:
    int rows_, cols_;
    std::vector<SparseVec> row_;
};

// Reduced row echelon form: rows normalized to leading 1, every pivot column
// eliminated from all other rows, rows ordered by pivot column.
struct Echelon {
    int cols = 0;
    std::vector<SparseVec> rows;
    std::vector<int> pivot_cols;  // ascending, parallel to `rows`

    int rank() const { return static_cast<int>(rows.size()); }

    // Eliminates the pivot coordinates of v; the result is supported on
    // non-pivot columns only. Idempotent.
    SparseVec reduce(SparseVec v) const;
};

Echelon rref(std::vector<SparseVec> in_rows, int cols, Exec exec = default_exec());
Echelon rref(const SparseMatrix& m, Exec exec = default_exec());

int rank(const SparseMatrix& m, Exec exec = default_exec());

// Exact basis of the right kernel; size = cols - rank.
std::vector<SparseVec> nullspace_basis(const SparseMatrix& m, Exec exec = default_exec());

// Complement of a spanned subspace inside Q^ambient together with the
// reduction onto the chosen representative coordinates.
struct QuotientBasis {
    int ambient = 0;
    std::vector<int> representatives;  // non-pivot coordinates, ascending
    Echelon ech;

    SparseVec reduce(const SparseVec& v) const { return ech.reduce(v); }
};

QuotientBasis quotient_basis(int ambient, const std::vector<SparseVec>& subspace,
                             Exec exec = default_exec());

// Incremental span with coordinate tracking: generators are added one at a
// time and arbitrary vectors can be expressed over the independent ones.
class SpanSolver {
  public:
    explicit SpanSolver(int dim) : dim_(dim) {}

    // Returns true when v enlarges the span. Every added vector gets the next
    // generator index (counting from 0), independent or not.
    bool add(const SparseVec& v);

    bool contains(const SparseVec& v) const;
    int rank() const { return static_cast<int>(rows_.size()); }
    int generators() const { return n_generators_; }

    // Coefficients c with v = sum c[g] * generator_g, zero on generators that
    // were dependent at insertion time; nullopt when v lies outside the span.
    std::optional<std::map<int, Rational>> solve(const SparseVec& v) const;

  private:
    void reduce_pair(SparseVec& w, SparseVec& c) const;

    int dim_;
    int n_generators_ = 0;
    std::vector<SparseVec> rows_;    // RREF rows of the span
    std::vector<SparseVec> coords_;  // expression of each row over generators
    std::vector<int> pivot_cols_;
};

}  // namespace operad
