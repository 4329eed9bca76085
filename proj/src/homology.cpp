#include "zcover/homology.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <string>

#include "zcover/errors.hpp"
#include "zcover/limits.hpp"

namespace zcover {

namespace {

struct Overflow {};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r) || r == INT64_MIN) throw Overflow{};
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r) || r == INT64_MIN) throw Overflow{};
    return r;
}

std::int64_t gcd_of(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
std::int64_t checked_mul_big(std::int64_t a, std::int64_t b) { return checked_mul(a, b); }
std::int64_t checked_sub_big(std::int64_t a, std::int64_t b) { return checked_sub(a, b); }

mpz_class gcd_of(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}
mpz_class checked_mul_big(const mpz_class& a, const mpz_class& b) { return a * b; }
mpz_class checked_sub_big(const mpz_class& a, const mpz_class& b) { return a - b; }

template <class T>
using SparseVec = std::vector<std::pair<std::uint32_t, T>>;

/// out = a*x - b*y, entries that cancel are dropped.
template <class T>
void combine(const T& a, const SparseVec<T>& x, const T& b, const SparseVec<T>& y, SparseVec<T>& out) {
    out.clear();
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            out.emplace_back(x[i].first, checked_mul_big(a, x[i].second));
            ++i;
        } else if (i == x.size() || y[j].first < x[i].first) {
            out.emplace_back(y[j].first, checked_sub_big(T(0), checked_mul_big(b, y[j].second)));
            ++j;
        } else {
            T v = checked_sub_big(checked_mul_big(a, x[i].second), checked_mul_big(b, y[j].second));
            if (v != 0) out.emplace_back(x[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
}

template <class T>
void remove_content(SparseVec<T>& v) {
    T g = 0;
    for (const auto& e : v) {
        g = gcd_of(g, e.second);
        if (g == 1) return;
    }
    if (g > 1) {
        for (auto& e : v) e.second /= g;
    }
}

/// Column reduction keyed on the largest row index; every stored column has
/// a distinct pivot row, so their number is the rank.
template <class T>
std::size_t column_rank(const BoundaryMatrix& m) {
    std::vector<SparseVec<T>> reduced;
    std::vector<std::int64_t> pivot_of(m.rows, -1);
    SparseVec<T> v, next;
    std::size_t steps = 0;
    for (const auto& col : m.columns) {
        v.clear();
        for (const auto& [r, x] : col) v.emplace_back(r, T(x));
        while (!v.empty()) {
            if (++steps % 4096 == 0) check_deadline();
            const std::uint32_t r = v.back().first;
            if (pivot_of[r] < 0) {
                pivot_of[r] = static_cast<std::int64_t>(reduced.size());
                reduced.push_back(v);
                break;
            }
            const auto& u = reduced[static_cast<std::size_t>(pivot_of[r])];
            T a = u.back().second;
            T b = v.back().second;
            const T g = gcd_of(a, b);
            a /= g;
            b /= g;
            combine(a, v, b, u, next);
            remove_content(next);
            std::swap(v, next);
        }
    }
    return reduced.size();
}

using Row = SparseVec<std::int64_t>;

std::int64_t row_entry(const Row& row, std::uint32_t c) {
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::uint32_t x) { return e.first < x; });
    return it != row.end() && it->first == c ? it->second : 0;
}

/// Smith normal form of a dense matrix, pivoting on the entry of least
/// absolute value. Returns the nonzero diagonal.
std::vector<mpz_class> dense_snf(std::vector<std::vector<mpz_class>> a) {
    std::vector<mpz_class> diag;
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    auto swap_cols = [&](std::size_t x, std::size_t y) {
        for (auto& row : a) std::swap(row[x], row[y]);
    };
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        check_deadline();
        // least nonzero entry of the trailing block
        std::size_t pi = rows, pj = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == rows) break;
        std::swap(a[t], a[pi]);
        swap_cols(t, pj);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                const mpz_class q = a[i][t] / a[t][t];
                for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                const mpz_class q = a[t][j] / a[t][t];
                for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) {
                // move the least remainder in row t or column t onto the pivot
                std::size_t bi = t, bj = t;
                for (std::size_t i = t + 1; i < rows; ++i)
                    if (a[i][t] != 0 && abs(a[i][t]) < abs(a[bi][bj])) {
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (a[t][j] != 0 && abs(a[t][j]) < abs(a[bi][bj])) {
                        bi = t;
                        bj = j;
                    }
                std::swap(a[t], a[bi]);
                swap_cols(t, bj);
                continue;
            }
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == rows) break;
            for (std::size_t j = t; j < cols; ++j) a[t][j] += a[bad][j];
        }
        diag.push_back(abs(a[t][t]));
    }
    return diag;
}

}  // namespace

std::size_t BoundaryMatrix::nnz() const {
    std::size_t total = 0;
    for (const auto& c : columns) total += c.size();
    return total;
}

BoundaryMatrix boundary_matrix(const Complex& c, int k) {
    if (k < 1 || k > c.max_dim()) {
        throw DimensionError("boundary_matrix: k=" + std::to_string(k) + " outside 1.." + std::to_string(c.max_dim()));
    }
    BoundaryMatrix m;
    m.k = k;
    m.rows = c.count(k - 1);
    m.cols = c.count(k);
    check_nnz_budget(m.cols * static_cast<std::size_t>(k + 1));
    m.columns.resize(m.cols);
    Face facet(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < m.cols; ++i) {
        const FaceView f = c.face(k, i);
        auto& col = m.columns[i];
        for (int j = 0; j <= k; ++j) {
            std::size_t w = 0;
            for (int t = 0; t <= k; ++t)
                if (t != j) facet[w++] = f[static_cast<std::size_t>(t)];
            const auto row = c.index_of(facet);
            if (!row) throw PreconditionError("boundary_matrix: complex is not closed under faces");
            col.emplace_back(static_cast<std::uint32_t>(*row), j % 2 == 0 ? 1 : -1);
        }
        std::sort(col.begin(), col.end());
    }
    return m;
}

void write_matrix(std::ostream& out, const BoundaryMatrix& m) {
    out << m.rows << ' ' << m.cols << ' ' << m.nnz() << '\n';
    for (std::size_t j = 0; j < m.cols; ++j)
        for (const auto& [r, v] : m.columns[j]) out << r << ' ' << j << ' ' << v << '\n';
}

std::size_t rank_q(const BoundaryMatrix& m) {
    try {
        return column_rank<std::int64_t>(m);
    } catch (const Overflow&) {
        return column_rank<mpz_class>(m);
    }
}

std::vector<mpz_class> invariant_factors(const BoundaryMatrix& m) {
    std::vector<Row> rows(m.rows);
    std::vector<std::vector<std::uint32_t>> col_rows(m.cols);
    for (std::uint32_t j = 0; j < m.cols; ++j)
        for (const auto& [r, v] : m.columns[j]) {
            rows[r].emplace_back(j, v);
            col_rows[j].push_back(r);
        }
    std::vector<char> row_alive(m.rows, 1), col_alive(m.cols, 1);
    std::size_t units = 0;
    bool overflow = false;
    std::vector<Row> updated;
    std::vector<std::uint32_t> live;
    for (bool progress = true; progress && !overflow;) {
        progress = false;
        for (std::uint32_t c = 0; c < m.cols && !overflow; ++c) {
            if (!col_alive[c]) continue;
            live.clear();
            for (std::uint32_t r : col_rows[c])
                if (row_alive[r] && row_entry(rows[r], c) != 0) live.push_back(r);
            std::sort(live.begin(), live.end());
            live.erase(std::unique(live.begin(), live.end()), live.end());
            col_rows[c] = live;
            std::uint32_t pr = UINT32_MAX;
            for (std::uint32_t r : live)
                if (std::abs(row_entry(rows[r], c)) == 1 && (pr == UINT32_MAX || rows[r].size() < rows[pr].size()))
                    pr = r;
            if (pr == UINT32_MAX) continue;
            const std::int64_t s = row_entry(rows[pr], c);
            updated.assign(live.size(), {});
            try {
                for (std::size_t t = 0; t < live.size(); ++t)
                    if (live[t] != pr) combine<std::int64_t>(1, rows[live[t]], row_entry(rows[live[t]], c) * s, rows[pr], updated[t]);
            } catch (const Overflow&) {
                overflow = true;
                break;
            }
            for (std::size_t t = 0; t < live.size(); ++t) {
                if (live[t] == pr) continue;
                rows[live[t]] = std::move(updated[t]);
                for (const auto& e : rows[pr]) col_rows[e.first].push_back(live[t]);
            }
            row_alive[pr] = 0;
            col_alive[c] = 0;
            ++units;
            progress = true;
            if (units % 1024 == 0) check_deadline();
        }
    }

    // dense remainder over the surviving rows and columns that still carry entries
    std::vector<std::int64_t> col_pos(m.cols, -1);
    std::size_t ncols = 0;
    std::vector<std::uint32_t> rest_rows;
    for (std::uint32_t r = 0; r < m.rows; ++r) {
        if (!row_alive[r]) continue;
        bool any = false;
        for (const auto& e : rows[r]) {
            if (!col_alive[e.first]) continue;
            any = true;
            if (col_pos[e.first] < 0) col_pos[e.first] = static_cast<std::int64_t>(ncols++);
        }
        if (any) rest_rows.push_back(r);
    }
    check_nnz_budget(rest_rows.size() * ncols);
    std::vector<std::vector<mpz_class>> dense(rest_rows.size(), std::vector<mpz_class>(ncols));
    for (std::size_t i = 0; i < rest_rows.size(); ++i)
        for (const auto& e : rows[rest_rows[i]])
            if (col_alive[e.first]) dense[i][static_cast<std::size_t>(col_pos[e.first])] = static_cast<long>(e.second);
    std::vector<mpz_class> factors(units, 1);
    for (auto& d : dense_snf(std::move(dense))) factors.push_back(std::move(d));
    return factors;
}

bool composes_to_zero(const BoundaryMatrix& lower, const BoundaryMatrix& upper) {
    if (lower.cols != upper.rows) throw DimensionError("composes_to_zero: shapes do not chain");
    std::vector<std::pair<std::uint32_t, long>> acc;
    for (const auto& col : upper.columns) {
        acc.clear();
        for (const auto& [mid, v] : col)
            for (const auto& [r, w] : lower.columns[mid]) acc.emplace_back(r, static_cast<long>(v) * w);
        std::sort(acc.begin(), acc.end());
        for (std::size_t i = 0; i < acc.size();) {
            long sum = 0;
            std::size_t j = i;
            for (; j < acc.size() && acc[j].first == acc[i].first; ++j) sum += acc[j].second;
            if (sum != 0) return false;
            i = j;
        }
    }
    return true;
}

namespace {

void check_degree(const Complex& c, int k, const char* op) {
    if (k < 0 || k > c.max_dim()) {
        throw DimensionError(std::string(op) + ": k=" + std::to_string(k) + " outside 0.." + std::to_string(c.max_dim()));
    }
}

/// Rank of the augmentation map when reduced homology is requested.
std::size_t augmentation_rank(const Complex& c, HomologyOptions opts) {
    return opts.reduced && c.count(0) > 0 ? 1 : 0;
}

/// Invariant factors of d_k, with d_0 treated as zero or the augmentation.
std::vector<mpz_class> factors_of(const Complex& c, int k, HomologyOptions opts) {
    if (k == 0) return std::vector<mpz_class>(augmentation_rank(c, opts), 1);
    if (k > c.max_dim()) return {};
    return invariant_factors(boundary_matrix(c, k));
}

HomologyGroup assemble(const Complex& c, int k, const std::vector<mpz_class>& below,
                       const std::vector<mpz_class>& above) {
    HomologyGroup h;
    h.dim = k;
    h.betti = c.count(k) - below.size() - above.size();
    for (const auto& x : above)
        if (x > 1) h.torsion.push_back(x);
    h.truncated = k == c.max_dim() && c.count(k) > 0;
    return h;
}

}  // namespace

BettiResult betti_q(const Complex& c, int k, HomologyOptions opts) {
    check_degree(c, k, "betti_q");
    const std::size_t below = k == 0 ? augmentation_rank(c, opts) : rank_q(boundary_matrix(c, k));
    const std::size_t above = k < c.max_dim() ? rank_q(boundary_matrix(c, k + 1)) : 0;
    return {c.count(k) - below - above, k == c.max_dim() && c.count(k) > 0};
}

HomologyGroup homology_z(const Complex& c, int k, HomologyOptions opts) {
    check_degree(c, k, "homology_z");
    return assemble(c, k, factors_of(c, k, opts), factors_of(c, k + 1, opts));
}

BettiProfile betti_profile(const Complex& c, int maxK, HomologyOptions opts) {
    check_degree(c, maxK, "betti_profile");
    BettiProfile p;
    std::vector<mpz_class> below = factors_of(c, 0, opts);
    for (int k = 0; k <= maxK; ++k) {
        std::vector<mpz_class> above = factors_of(c, k + 1, opts);
        p.groups.push_back(assemble(c, k, below, above));
        below = std::move(above);
    }
    p.topRank = below.size();
    const std::size_t aug = augmentation_rank(c, opts);
    p.morseHolds = true;
    for (int k = 0; k <= maxK; ++k) {
        const long long sign = k % 2 == 0 ? 1 : -1;
        const auto& h = p.groups[static_cast<std::size_t>(k)];
        p.truncated = p.truncated || h.truncated;
        p.eulerBetti += sign * static_cast<long long>(h.betti);
        p.eulerFaces += sign * static_cast<long long>(c.count(k));
        const long long fk = static_cast<long long>(c.count(k));
        const long long up = k < c.max_dim() ? static_cast<long long>(c.count(k + 1)) : 0;
        const long long down = k > 0 ? static_cast<long long>(c.count(k - 1)) : 0;
        p.morseLower.push_back(fk - up - down);
        const long long unreduced = static_cast<long long>(h.betti) + (k == 0 ? static_cast<long long>(aug) : 0);
        p.morseHolds = p.morseHolds && unreduced >= p.morseLower.back();
    }
    p.eulerFaces -= static_cast<long long>(aug);
    const long long topSign = maxK % 2 == 0 ? 1 : -1;
    p.eulerHolds = p.eulerBetti == p.eulerFaces - topSign * static_cast<long long>(p.topRank);
    return p;
}

}  // namespace zcover
