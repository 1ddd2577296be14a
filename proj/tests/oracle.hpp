#pragma once

// Reference computations used to cross-check the library. Deliberately written
// without the library's elimination routines.

#include <gmpxx.h>

#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Vec = std::vector<Q>;
using Rows = std::vector<Vec>;

/// Row-reduces in place by a plain forward/backward sweep. Returns the rank.
inline std::size_t eliminate(Rows& m) {
    if (m.empty()) return 0;
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = m.size();
        for (std::size_t i = r; i < m.size(); ++i)
            if (m[i][c] != 0) { p = i; break; }
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        Q inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Q f = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    m.resize(r);
    return r;
}

inline Rows reduced(Rows m) {
    eliminate(m);
    return m;
}

inline std::size_t rank(Rows m) { return eliminate(m); }

inline bool same_span(const Rows& a, const Rows& b) {
    Rows both = a;
    both.insert(both.end(), b.begin(), b.end());
    std::size_t ra = rank(a), rb = rank(b), rab = rank(both);
    return ra == rb && rb == rab;
}

inline bool in_span(const Rows& a, const Vec& v) {
    Rows both = a;
    both.push_back(v);
    return rank(a) == rank(both);
}

inline bool contains(const Rows& big, const Rows& small) {
    Rows both = big;
    both.insert(both.end(), small.begin(), small.end());
    return rank(big) == rank(both);
}

/// Zassenhaus: reduce [[A, A], [B, 0]]; rows with zero left half carry A ∩ B,
/// the left halves of the remaining rows span A + B.
inline std::pair<Rows, Rows> zassenhaus(const Rows& a, const Rows& b, std::size_t n) {
    Rows m;
    for (const auto& v : a) {
        Vec row(v);
        row.insert(row.end(), v.begin(), v.end());
        m.push_back(row);
    }
    for (const auto& v : b) {
        Vec row(v);
        row.insert(row.end(), n, Q(0));
        m.push_back(row);
    }
    eliminate(m);
    Rows meet, join;
    for (const auto& row : m) {
        bool left_zero = true;
        for (std::size_t j = 0; j < n; ++j)
            if (row[j] != 0) left_zero = false;
        if (left_zero)
            meet.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(n), row.end());
        else
            join.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return {meet, join};
}

/// Kernel of x ↦ m x, by elimination on the transpose-free system.
inline Rows kernel(const Rows& m, std::size_t cols) {
    Rows r = reduced(m);
    std::vector<int> pivot_of_col(cols, -1);
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (r[i][j] != 0) { pivot_of_col[j] = static_cast<int>(i); break; }
    Rows out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (pivot_of_col[f] >= 0) continue;
        Vec v(cols);
        v[f] = 1;
        for (std::size_t j = 0; j < cols; ++j)
            if (pivot_of_col[j] >= 0) v[j] = -r[static_cast<std::size_t>(pivot_of_col[j])][f];
        out.push_back(v);
    }
    return out;
}

inline Q form(const Rows& g, const Vec& x, const Vec& y) {
    Q s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * g[i][j] * y[j];
    return s;
}

inline Rows gram_on(const Rows& g, const Rows& basis) {
    Rows out(basis.size(), Vec(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) out[i][j] = form(g, basis[i], basis[j]);
    return out;
}

/// Characteristic polynomial det(x I − A), coefficients c[0..n] of x^0..x^n,
/// by Faddeev–LeVerrier.
inline Vec charpoly(const Rows& a) {
    const std::size_t n = a.size();
    Vec c(n + 1);
    c[n] = 1;
    Rows m(n, Vec(n));  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        Rows next(n, Vec(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Q s = 0;
                for (std::size_t l = 0; l < n; ++l) s += a[i][l] * m[l][j];
                next[i][j] = s;
            }
        for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
        m = next;
        Q tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
        c[n - k] = -tr / k;
    }
    return c;
}

struct Signs {
    std::size_t p, q, k;
};

/// Inertia of a symmetric matrix from its characteristic polynomial. All roots
/// are real, so Descartes' rule of signs counts them exactly.
inline Signs inertia(const Rows& a) {
    const std::size_t n = a.size();
    if (n == 0) return {0, 0, 0};
    Vec c = charpoly(a);
    std::size_t k = 0;
    while (k <= n && c[k] == 0) ++k;
    auto changes = [&](bool negate) {
        std::size_t count = 0;
        int last = 0;
        for (std::size_t i = k; i <= n; ++i) {
            int s = sgn(c[i]);
            if (negate && (i % 2 == 1)) s = -s;
            if (s == 0) continue;
            if (last != 0 && s != last) ++count;
            last = s;
        }
        return count;
    };
    return {changes(false), changes(true), k};
}

}  // namespace oracle
