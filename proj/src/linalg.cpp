#include "sympq/linalg.hpp"

#include <algorithm>

namespace sympq {

namespace {

// Scale a rational row to a primitive integer row with positive leading
// entry at `pivot`.
void normalize_row(QVec& r, int pivot) {
    Int lcm = 1;
    for (const auto& x : r)
        if (x != 0) lcm = boost::multiprecision::lcm(lcm, denominator(x));
    Int g = 0;
    for (auto& x : r) {
        if (x == 0) continue;
        Int n = numerator(x) * (lcm / denominator(x));
        g = g == 0 ? Int(boost::multiprecision::abs(n))
                   : Int(boost::multiprecision::gcd(g, Int(boost::multiprecision::abs(n))));
    }
    if (g == 0) return;
    Rational f(lcm, g);
    if (r[pivot] < 0) f = -f;
    for (auto& x : r) x *= f;
}

}  // namespace

Rational dot(const QVec& a, const QVec& b) {
    Rational s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

QVec RowReducer::reduce_only(QVec r) const {
    for (size_t k = 0; k < rows_.size(); ++k) {
        const Rational& lead = r[pivots_[k]];
        if (lead == 0) continue;
        Rational f = lead / rows_[k][pivots_[k]];
        for (int c = 0; c < ncols_; ++c)
            if (rows_[k][c] != 0) r[c] -= f * rows_[k][c];
    }
    for (const auto& x : r)
        if (x != 0) return r;
    return {};
}

bool RowReducer::in_span(const QVec& r) const { return reduce_only(r).empty(); }

bool RowReducer::add_row(QVec r) {
    if ((int)r.size() != ncols_) throw error("RowReducer: column count mismatch");
    r = reduce_only(std::move(r));
    if (r.empty()) return false;
    int p = 0;
    while (r[p] == 0) ++p;
    normalize_row(r, p);
    // Insert keeping pivot order; eliminate the new pivot from earlier rows
    // lazily (full RREF happens in back_substitute_).
    size_t pos = 0;
    while (pos < rows_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(r));
    pivots_.insert(pivots_.begin() + pos, p);
    return true;
}

void RowReducer::back_substitute_() {
    for (int k = (int)rows_.size() - 1; k >= 0; --k) {
        for (int j = 0; j < k; ++j) {
            const Rational& v = rows_[j][pivots_[k]];
            if (v == 0) continue;
            Rational f = v / rows_[k][pivots_[k]];
            for (int c = 0; c < ncols_; ++c)
                if (rows_[k][c] != 0) rows_[j][c] -= f * rows_[k][c];
        }
    }
}

std::vector<QVec> RowReducer::kernel() const {
    RowReducer tmp(*this);
    tmp.back_substitute_();
    std::vector<bool> is_pivot(ncols_, false);
    for (int p : tmp.pivots_) is_pivot[p] = true;
    std::vector<QVec> out;
    for (int f = 0; f < ncols_; ++f) {
        if (is_pivot[f]) continue;
        QVec v(ncols_, Rational(0));
        v[f] = 1;
        for (size_t k = 0; k < tmp.rows_.size(); ++k)
            v[tmp.pivots_[k]] = -tmp.rows_[k][f] / tmp.rows_[k][tmp.pivots_[k]];
        out.push_back(std::move(v));
    }
    return out;
}

int SpanSolver::add(const QVec& v) {
    if ((int)v.size() != ncols_) throw error("SpanSolver: column count mismatch");
    QVec r(v);
    r.resize(ncols_ + n_added_ + 1, Rational(0));
    r[ncols_ + n_added_] = 1;
    // extend stored rows
    for (auto& row : rows_) row.resize(ncols_ + n_added_ + 1, Rational(0));
    for (size_t k = 0; k < rows_.size(); ++k) {
        const Rational& lead = r[pivots_[k]];
        if (lead == 0) continue;
        Rational f = lead / rows_[k][pivots_[k]];
        for (size_t c = 0; c < r.size(); ++c)
            if (rows_[k][c] != 0) r[c] -= f * rows_[k][c];
    }
    int p = -1;
    for (int c = 0; c < ncols_; ++c)
        if (r[c] != 0) {
            p = c;
            break;
        }
    ++n_added_;
    if (p < 0) return -1;  // dependent; coordinates recoverable from tail
    size_t pos = 0;
    while (pos < rows_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(r));
    pivots_.insert(pivots_.begin() + pos, p);
    return n_added_ - 1;
}

std::optional<QVec> SpanSolver::solve(const QVec& v) const {
    QVec r(v);
    r.resize(ncols_ + n_added_, Rational(0));
    for (size_t k = 0; k < rows_.size(); ++k) {
        const Rational& lead = r[pivots_[k]];
        if (lead == 0) continue;
        Rational f = lead / rows_[k][pivots_[k]];
        size_t n = std::min(r.size(), rows_[k].size());
        for (size_t c = 0; c < n; ++c)
            if (rows_[k][c] != 0) r[c] -= f * rows_[k][c];
    }
    for (int c = 0; c < ncols_; ++c)
        if (r[c] != 0) return std::nullopt;
    QVec coords(n_added_, Rational(0));
    for (int i = 0; i < n_added_; ++i) coords[i] = -r[ncols_ + i];
    return coords;
}

int rank_of(const QMat& m, int ncols) {
    RowReducer rr(ncols);
    for (const auto& r : m) rr.add_row(r);
    return rr.rank();
}

std::vector<QVec> kernel_of(const QMat& m, int ncols) {
    RowReducer rr(ncols);
    for (const auto& r : m) rr.add_row(r);
    return rr.kernel();
}

IMat hnf_rows(IMat m) {
    if (m.empty()) return m;
    const int ncols = (int)m[0].size();
    int row = 0;
    for (int col = 0; col < ncols && row < (int)m.size(); ++col) {
        // Euclidean elimination in this column below `row`.
        while (true) {
            int piv = -1;
            for (int r = row; r < (int)m.size(); ++r)
                if (m[r][col] != 0 && (piv == -1 || boost::multiprecision::abs(m[r][col]) <
                                                        boost::multiprecision::abs(m[piv][col])))
                    piv = r;
            if (piv == -1) break;
            std::swap(m[row], m[piv]);
            bool clean = true;
            for (int r = row + 1; r < (int)m.size(); ++r) {
                if (m[r][col] == 0) continue;
                Int q = m[r][col] / m[row][col];
                for (int c = 0; c < ncols; ++c) m[r][c] -= q * m[row][c];
                if (m[r][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (m[row][col] == 0) continue;
        if (m[row][col] < 0)
            for (int c = 0; c < ncols; ++c) m[row][c] = -m[row][c];
        // Reduce entries above the pivot into [0, pivot).
        for (int r = 0; r < row; ++r) {
            Int q;
            // floor division
            Int a = m[r][col], b = m[row][col];
            q = a / b;
            if (a % b != 0 && ((a < 0) != (b < 0))) q -= 1;
            if (q != 0)
                for (int c = 0; c < ncols; ++c) m[r][c] -= q * m[row][c];
        }
        ++row;
    }
    m.resize(row);  // drop zero rows
    return m;
}

std::vector<Int> smith_divisors(IMat m) {
    std::vector<Int> out;
    if (m.empty() || m[0].empty()) return out;
    int rows = (int)m.size(), cols = (int)m[0].size();
    int start = 0;
    while (start < rows && start < cols) {
        // find a nonzero entry
        int pr = -1, pc = -1;
        for (int r = start; r < rows && pr < 0; ++r)
            for (int c = start; c < cols; ++c)
                if (m[r][c] != 0) {
                    pr = r;
                    pc = c;
                    break;
                }
        if (pr < 0) break;
        std::swap(m[start], m[pr]);
        for (int r = 0; r < rows; ++r) std::swap(m[r][start], m[r][pc]);
        bool reduced = false;
        while (!reduced) {
            reduced = true;
            for (int r = start + 1; r < rows; ++r) {
                while (m[r][start] != 0) {
                    Int q = m[r][start] / m[start][start];
                    for (int c = start; c < cols; ++c) m[r][c] -= q * m[start][c];
                    if (m[r][start] != 0) {
                        std::swap(m[r], m[start]);
                        reduced = false;
                    }
                }
            }
            for (int c = start + 1; c < cols; ++c) {
                while (m[start][c] != 0) {
                    Int q = m[start][c] / m[start][start];
                    for (int r = start; r < rows; ++r) m[r][c] -= q * m[r][start];
                    if (m[start][c] != 0) {
                        for (int r = start; r < rows; ++r) std::swap(m[r][c], m[r][start]);
                        reduced = false;
                    }
                }
            }
        }
        out.push_back(boost::multiprecision::abs(m[start][start]));
        ++start;
    }
    // divisibility chain
    for (size_t i = 0; i + 1 < out.size(); ++i) {
        for (size_t j = i + 1; j < out.size(); ++j) {
            if (out[j] % out[i] != 0) {
                Int g = boost::multiprecision::gcd(out[i], out[j]);
                Int l = out[i] / g * out[j];
                out[i] = g;
                out[j] = l;
            }
        }
    }
    return out;
}

}  // namespace sympq
