#pragma once

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "courant/linear_relation.hpp"

namespace testing_models {

using namespace courant;

/// A random quadratic space G = Mᵀ D M together with the diagonalizing data,
/// which makes it easy to write down null and isotropic vectors.
struct RandomSpace {
    QuadraticSpace space;
    Matrix m_inv;          // columns are an orthogonal basis with norms d_i
    std::vector<int> d;    // ±1

    std::vector<std::size_t> positive() const { return where(1); }
    std::vector<std::size_t> negative() const { return where(-1); }

    /// f_i = M⁻¹ e_i, an orthogonal basis with <f_i, f_i> = d_i.
    Vector frame(std::size_t i) const { return m_inv.col(i); }

private:
    std::vector<std::size_t> where(int s) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d[i] == s) out.push_back(i);
        return out;
    }
};

inline int uniform(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int range = 3) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform(rng, -range, range);
    return m;
}

inline Matrix random_invertible(std::mt19937& rng, std::size_t n, int range = 2) {
    for (;;) {
        Matrix m = random_matrix(rng, n, n, range);
        if (determinant(m) != 0) return m;
    }
}

/// Signature (p, n - p); p = -1 picks it at random.
inline RandomSpace random_space(std::mt19937& rng, std::size_t n, int p = -1) {
    if (p < 0) p = uniform(rng, 0, static_cast<int>(n));
    std::vector<int> d(n, -1);
    for (int i = 0; i < p; ++i) d[static_cast<std::size_t>(i)] = 1;
    std::shuffle(d.begin(), d.end(), rng);
    Matrix m = random_invertible(rng, n);
    Vector dv(d.begin(), d.end());
    QuadraticSpace s(m.transpose() * Matrix::diagonal(dv) * m);
    return {std::move(s), inverse(m), d};
}

inline Subspace random_subspace(std::mt19937& rng, std::size_t n, std::size_t k) {
    return Subspace::span(n, random_matrix(rng, k, n));
}

/// An isotropic subspace spanned by random combinations of f_a + f_b over
/// `count` disjoint opposite-sign pairs.
inline Subspace random_isotropic(std::mt19937& rng, const RandomSpace& rs, std::size_t count) {
    auto pos = rs.positive(), neg = rs.negative();
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    count = std::min({count, pos.size(), neg.size()});
    const std::size_t n = rs.space.dim();
    std::vector<Vector> nulls;
    for (std::size_t i = 0; i < count; ++i) {
        int sgn = uniform(rng, 0, 1) ? 1 : -1;
        nulls.push_back(rs.frame(pos[i]) + Rational(sgn) * rs.frame(neg[i]));
    }
    // mix so the basis is not aligned with the frame
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < count; ++i) {
        Vector v(n);
        for (std::size_t j = 0; j < count; ++j) v = v + Rational(uniform(rng, -2, 2) + (i == j ? 5 : 0)) * nulls[j];
        rows.push_back(v);
    }
    return Subspace::span(n, rows);
}

inline Subspace random_maximal_isotropic(std::mt19937& rng, const RandomSpace& rs) {
    return random_isotropic(rng, rs, std::min(rs.positive().size(), rs.negative().size()));
}

/// C = L⊥ for a random isotropic L.
inline Subspace random_coisotropic(std::mt19937& rng, const RandomSpace& rs) {
    std::size_t cap = std::min(rs.positive().size(), rs.negative().size());
    Subspace l = random_isotropic(rng, rs, static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(cap))));
    return orth_complement(rs.space, l);
}


/// The diagonalizing data of V1 × V̄2 built from that of V1 and V2.
inline RandomSpace relation_space(const RandomSpace& a, const RandomSpace& b) {
    std::vector<int> d = a.d;
    for (int x : b.d) d.push_back(-x);
    return {relation_ambient(a.space, b.space), block_diag(a.m_inv, b.m_inv), d};
}

/// A random isotropic relation; `maximal` makes it maximal isotropic.
inline LinearRelation random_relation(std::mt19937& rng, const RandomSpace& a, const RandomSpace& b,
                                      bool maximal = false) {
    RandomSpace prod = relation_space(a, b);
    std::size_t cap = std::min(prod.positive().size(), prod.negative().size());
    std::size_t count = maximal ? cap : static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(cap)));
    return LinearRelation(a.space, b.space, random_isotropic(rng, prod, count));
}

/// A product of reflections in non-null τ-eigenvectors: an isometry commuting with τ.
inline Matrix random_tau_isometry(std::mt19937& rng, const QuadraticSpace& v, const Involution& tau,
                                  std::size_t reflections = 3) {
    const std::size_t n = v.dim();
    Matrix s = Matrix::identity(n);
    Subspace plus = tau.plus_space(), minus = tau.minus_space();
    for (std::size_t r = 0; r < reflections; ++r) {
        const Subspace& pick = (rng() % 2 && plus.dim()) || !minus.dim() ? plus : minus;
        if (pick.is_zero()) break;
        Vector c(pick.dim());
        for (auto& x : c) x = uniform(rng, -2, 2);
        Vector w = pick.from_coordinates(c);
        Rational norm = v.pair(w, w);
        if (norm == 0) continue;  // only the zero vector, since the eigenspaces are definite
        // x ↦ x − 2 <w, x>/<w, w> w
        Matrix refl = Matrix::identity(n);
        Vector gw = v.gram() * w;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) refl(i, j) -= Rational(2) * w[i] * gw[j] / norm;
        s = refl * s;
    }
    return s;
}

/// A span of a random subset of the congruence basis: a τ-invariant subspace
/// for the split involution.
inline Subspace random_tau_invariant(std::mt19937& rng, const QuadraticSpace& v) {
    auto cg = congruence_diagonalize(v.gram());
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < v.dim(); ++i)
        if (rng() % 2) rows.push_back(cg.basis.row(i));
    return Subspace::span(v.dim(), rows);
}

}  // namespace testing_models
