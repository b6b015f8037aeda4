#include "operad/sparse_matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace operad {

Rational SparseVec::at(int idx) const {
    auto it = std::lower_bound(e.begin(), e.end(), idx,
                               [](const auto& p, int i) { return p.first < i; });
    if (it != e.end() && it->first == idx) return it->second;
    return Rational(0);
}

void SparseVec::push(int idx, Rational v) {
    if (sgn(v) == 0) return;
    if (!e.empty() && e.back().first >= idx)
        throw std::logic_error("SparseVec::push out of order");
    e.emplace_back(idx, std::move(v));
}

SparseVec axpy(const SparseVec& x, const Rational& c, const SparseVec& y) {
    SparseVec out;
    out.e.reserve(x.e.size() + y.e.size());
    auto ix = x.e.begin(), iy = y.e.begin();
    while (ix != x.e.end() || iy != y.e.end()) {
        if (iy == y.e.end() || (ix != x.e.end() && ix->first < iy->first)) {
            out.e.push_back(*ix++);
        } else if (ix == x.e.end() || iy->first < ix->first) {
            Rational v = c * iy->second;
            if (sgn(v) != 0) out.e.emplace_back(iy->first, std::move(v));
            ++iy;
        } else {
            Rational v = ix->second + c * iy->second;
            if (sgn(v) != 0) out.e.emplace_back(ix->first, std::move(v));
            ++ix;
            ++iy;
        }
    }
    return out;
}

SparseVec scaled(const SparseVec& x, const Rational& c) {
    SparseVec out;
    if (sgn(c) == 0) return out;
    out.e.reserve(x.e.size());
    for (const auto& [i, v] : x.e) out.e.emplace_back(i, c * v);
    return out;
}

namespace {
std::atomic<Exec> g_exec{Exec::parallel};
}

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec e) { g_exec.store(e); }

void SparseMatrix::set(int r, int c, Rational v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw std::out_of_range("SparseMatrix::set");
    auto& row = row_[r].e;
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& p, int i) { return p.first < i; });
    if (it != row.end() && it->first == c) {
        if (sgn(v) == 0)
            row.erase(it);
        else
            it->second = std::move(v);
    } else if (sgn(v) != 0) {
        row.insert(it, {c, std::move(v)});
    }
}

SparseVec Echelon::reduce(SparseVec v) const {
    // RREF rows vanish on each other's pivots, so one pass suffices.
    for (std::size_t k = 0; k < rows.size(); ++k) {
        Rational c = v.at(pivot_cols[k]);
        if (sgn(c) != 0) v = axpy(v, -c, rows[k]);
    }
    return v;
}

Echelon rref(std::vector<SparseVec> work, int cols, Exec exec) {
    Echelon out;
    out.cols = cols;
    std::erase_if(work, [](const SparseVec& r) { return r.empty(); });

    while (!work.empty()) {
        // Pivot: lowest leading column, then smallest coefficient bit size.
        std::size_t best = 0;
        for (std::size_t i = 1; i < work.size(); ++i) {
            int li = work[i].lead(), lb = work[best].lead();
            if (li < lb ||
                (li == lb && rational_bits(work[i].e.front().second) <
                                 rational_bits(work[best].e.front().second)))
                best = i;
        }
        SparseVec pivot_row = std::move(work[best]);
        work.erase(work.begin() + static_cast<std::ptrdiff_t>(best));

        const int pcol = pivot_row.lead();
        Rational inv_lead = 1 / pivot_row.e.front().second;
        pivot_row = scaled(pivot_row, inv_lead);

        auto eliminate = [&](std::vector<SparseVec>& rows) {
            const std::int64_t n = static_cast<std::int64_t>(rows.size());
            if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
                for (std::int64_t i = 0; i < n; ++i) {
                    Rational c = rows[i].at(pcol);
                    if (sgn(c) != 0) rows[i] = axpy(rows[i], -c, pivot_row);
                }
            } else {
                for (std::int64_t i = 0; i < n; ++i) {
                    Rational c = rows[i].at(pcol);
                    if (sgn(c) != 0) rows[i] = axpy(rows[i], -c, pivot_row);
                }
            }
        };
        eliminate(work);
        eliminate(out.rows);  // keep earlier pivot rows fully reduced

        out.rows.push_back(std::move(pivot_row));
        out.pivot_cols.push_back(pcol);
        std::erase_if(work, [](const SparseVec& r) { return r.empty(); });
    }

    // Pivots were consumed in increasing column order already, but the
    // bit-size tie break does not disturb it; sort defensively anyway.
    std::vector<std::size_t> order(out.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return out.pivot_cols[a] < out.pivot_cols[b]; });
    Echelon sorted;
    sorted.cols = cols;
    for (std::size_t i : order) {
        sorted.rows.push_back(std::move(out.rows[i]));
        sorted.pivot_cols.push_back(out.pivot_cols[i]);
    }
    return sorted;
}

Echelon rref(const SparseMatrix& m, Exec exec) {
    std::vector<SparseVec> rows;
    rows.reserve(m.rows());
    for (int r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
    return rref(std::move(rows), m.cols(), exec);
}

int rank(const SparseMatrix& m, Exec exec) { return rref(m, exec).rank(); }

std::vector<SparseVec> nullspace_basis(const SparseMatrix& m, Exec exec) {
    Echelon ech = rref(m, exec);
    std::vector<char> is_pivot(m.cols(), 0);
    for (int p : ech.pivot_cols) is_pivot[p] = 1;

    std::vector<SparseVec> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        // x_f = 1, pivot variables balance their row's coefficient at f.
        std::vector<std::pair<int, Rational>> entries;
        entries.emplace_back(f, Rational(1));
        for (std::size_t k = 0; k < ech.rows.size(); ++k) {
            Rational c = ech.rows[k].at(f);
            if (sgn(c) != 0) entries.emplace_back(ech.pivot_cols[k], -c);
        }
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseVec v;
        v.e = std::move(entries);
        basis.push_back(std::move(v));
    }
    return basis;
}

QuotientBasis quotient_basis(int ambient, const std::vector<SparseVec>& subspace, Exec exec) {
    QuotientBasis qb;
    qb.ambient = ambient;
    qb.ech = rref(subspace, ambient, exec);
    std::vector<char> is_pivot(ambient, 0);
    for (int p : qb.ech.pivot_cols) is_pivot[p] = 1;
    for (int c = 0; c < ambient; ++c)
        if (!is_pivot[c]) qb.representatives.push_back(c);
    return qb;
}

void SpanSolver::reduce_pair(SparseVec& w, SparseVec& c) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        Rational coef = w.at(pivot_cols_[k]);
        if (sgn(coef) != 0) {
            w = axpy(w, -coef, rows_[k]);
            c = axpy(c, -coef, coords_[k]);
        }
    }
}

bool SpanSolver::add(const SparseVec& v) {
    const int gen = n_generators_++;
    SparseVec w = v;
    SparseVec c;
    c.push(gen, Rational(1));
    reduce_pair(w, c);
    if (w.empty()) return false;

    Rational inv_lead = 1 / w.e.front().second;
    w = scaled(w, inv_lead);
    c = scaled(c, inv_lead);
    const int pcol = w.lead();

    // Keep existing rows reduced against the new pivot.
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        Rational coef = rows_[k].at(pcol);
        if (sgn(coef) != 0) {
            rows_[k] = axpy(rows_[k], -coef, w);
            coords_[k] = axpy(coords_[k], -coef, c);
        }
    }
    rows_.push_back(std::move(w));
    coords_.push_back(std::move(c));
    pivot_cols_.push_back(pcol);
    return true;
}

bool SpanSolver::contains(const SparseVec& v) const {
    SparseVec w = v, c;
    reduce_pair(w, c);
    return w.empty();
}

std::optional<std::map<int, Rational>> SpanSolver::solve(const SparseVec& v) const {
    SparseVec w = v, c;
    reduce_pair(w, c);
    if (!w.empty()) return std::nullopt;
    std::map<int, Rational> out;
    for (const auto& [g, q] : c.e) out[g] = -q;
    return out;
}

}  // namespace operad
