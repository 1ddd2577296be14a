#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "courant/subspace.hpp"

namespace courant {

/// A finite-dimensional rational vector space with a symmetric nondegenerate
/// bilinear form, given by its Gram matrix in the standard basis.
class QuadraticSpace {
public:
    QuadraticSpace() = default;
    explicit QuadraticSpace(Matrix gram) : gram_(std::move(gram)) {
        if (!gram_.is_square()) throw InvalidObject("Gram matrix is not square");
        if (!gram_.is_symmetric()) throw InvalidObject("Gram matrix is not symmetric");
        if (determinant(gram_) == 0) throw InvalidObject("Gram matrix is degenerate");
    }

    static QuadraticSpace hyperbolic(std::size_t m) {
        Matrix g(2 * m, 2 * m);
        for (std::size_t i = 0; i < m; ++i) g(i, m + i) = g(m + i, i) = 1;
        return QuadraticSpace(g);
    }
    static QuadraticSpace diagonal(const Vector& d) { return QuadraticSpace(Matrix::diagonal(d)); }

    std::size_t dim() const { return gram_.rows(); }
    const Matrix& gram() const { return gram_; }
    Rational pair(const Vector& x, const Vector& y) const { return bilinear(x, gram_, y); }

    /// The same space with the opposite form.
    QuadraticSpace bar() const {
        QuadraticSpace s;
        s.gram_ = -gram_;
        return s;
    }

    friend bool operator==(const QuadraticSpace& a, const QuadraticSpace& b) { return a.gram_ == b.gram_; }

private:
    Matrix gram_;
};

inline QuadraticSpace direct_sum(const QuadraticSpace& a, const QuadraticSpace& b) {
    return QuadraticSpace(block_diag(a.gram(), b.gram()));
}

/// V1 × V̄2, the ambient of relations from V1 to V2.
inline QuadraticSpace relation_ambient(const QuadraticSpace& a, const QuadraticSpace& b) {
    return direct_sum(a, b.bar());
}

struct Inertia {
    std::size_t p = 0;
    std::size_t q = 0;
    std::size_t k = 0;

    std::size_t total() const { return p + q + k; }
    friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Result of a symmetric congruence: `basis` rows b_i satisfy
/// <b_i, b_j> = diag_i δ_ij. Nonzero entries of `diag` come first, in pivot order.
struct Congruence {
    Matrix basis;
    Vector diag;
};

/// Completing squares on a symmetric matrix. Pivots on the lowest-index
/// nonzero diagonal entry; if the remaining diagonal is zero, replaces r_i by
/// r_i + r_j for the lowest nonzero off-diagonal (i, j), which has norm 2 a_ij.
inline Congruence congruence_diagonalize(const Matrix& sym) {
    if (!sym.is_square() || !sym.is_symmetric()) throw PreconditionViolation("form is not symmetric");
    const std::size_t n = sym.rows();
    Matrix a = sym;
    Matrix r = Matrix::identity(n);
    std::vector<bool> live(n, true);
    std::vector<Vector> out;
    Vector diag;

    auto add_row_col = [&](std::size_t i, std::size_t j) {
        // r_i <- r_i + r_j, and the matching congruence on a
        for (std::size_t c = 0; c < n; ++c) r(i, c) += r(j, c);
        for (std::size_t c = 0; c < n; ++c) a(i, c) += a(j, c);
        for (std::size_t c = 0; c < n; ++c) a(c, i) += a(c, j);
    };

    for (;;) {
        std::size_t piv = n;
        for (std::size_t i = 0; i < n && piv == n; ++i)
            if (live[i] && a(i, i) != 0) piv = i;
        if (piv == n) {
            std::size_t pi = n, pj = n;
            for (std::size_t i = 0; i < n && pi == n; ++i) {
                if (!live[i]) continue;
                for (std::size_t j = i + 1; j < n; ++j)
                    if (live[j] && a(i, j) != 0) {
                        pi = i;
                        pj = j;
                        break;
                    }
            }
            if (pi == n) break;
            add_row_col(pi, pj);
            piv = pi;
        }
        const Rational d = a(piv, piv);
        for (std::size_t s = 0; s < n; ++s) {
            if (!live[s] || s == piv || a(s, piv) == 0) continue;
            Rational f = a(s, piv) / d;
            for (std::size_t c = 0; c < n; ++c) r(s, c) -= f * r(piv, c);
            for (std::size_t t = 0; t < n; ++t)
                if (live[t] && t != piv) a(s, t) -= f * a(piv, t);
        }
        for (std::size_t s = 0; s < n; ++s) a(s, piv) = a(piv, s) = 0;
        live[piv] = false;
        out.push_back(r.row(piv));
        diag.push_back(d);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (live[i]) {
            out.push_back(r.row(i));
            diag.push_back(0);
        }
    return {Matrix::from_rows(out, n), std::move(diag)};
}

/// Inertia of an arbitrary (possibly degenerate) symmetric form.
inline Inertia inertia_of_form(const Matrix& sym) {
    Inertia in;
    for (const auto& d : congruence_diagonalize(sym).diag) {
        int s = sign(d);
        if (s > 0) ++in.p;
        else if (s < 0) ++in.q;
        else ++in.k;
    }
    return in;
}

inline void require_ambient(const QuadraticSpace& v, const Subspace& w) {
    if (w.ambient_dim() != v.dim()) throw DimensionMismatch("subspace does not live in this quadratic space");
}

/// Gram matrix of the form restricted to W, in W's canonical basis.
inline Matrix restricted_gram(const QuadraticSpace& v, const Subspace& w) {
    require_ambient(v, w);
    return w.basis() * v.gram() * w.basis().transpose();
}

inline Inertia inertia(const QuadraticSpace& v, const Subspace& w) { return inertia_of_form(restricted_gram(v, w)); }
inline Inertia inertia(const QuadraticSpace& v) { return inertia_of_form(v.gram()); }

inline Subspace orth_complement(const QuadraticSpace& v, const Subspace& w) {
    require_ambient(v, w);
    if (w.is_zero()) return Subspace::full(v.dim());
    return Subspace::span(v.dim(), nullspace(w.basis() * v.gram()));
}

inline bool is_isotropic(const QuadraticSpace& v, const Subspace& w) { return restricted_gram(v, w).is_zero(); }
inline bool is_coisotropic(const QuadraticSpace& v, const Subspace& w) {
    return w.contains(orth_complement(v, w));
}

struct ClassificationFlags {
    bool isotropic = false;
    bool coisotropic = false;
    bool maximal_isotropic = false;
    bool lagrangian = false;
    bool positive_definite = false;
    bool negative_definite = false;
    bool nondegenerate = false;
};

inline ClassificationFlags classify(const QuadraticSpace& v, const Subspace& w) {
    ClassificationFlags f;
    const Subspace perp = orth_complement(v, w);
    const Inertia ambient = inertia(v);
    const Inertia in = inertia(v, w);
    f.isotropic = perp.contains(w);
    f.coisotropic = w.contains(perp);
    f.maximal_isotropic = f.isotropic && w.dim() == std::min(ambient.p, ambient.q);
    f.lagrangian = w == perp;
    f.positive_definite = in.q == 0 && in.k == 0;
    f.negative_definite = in.p == 0 && in.k == 0;
    f.nondegenerate = in.k == 0;
    return f;
}

/// V' = C / C⊥ together with the quotient map ♮: C -> V'.
struct CoisotropicReduction {
    QuadraticSpace reduced;
    SubquotientMap map;
};

inline CoisotropicReduction coisotropic_reduce(const QuadraticSpace& v, const Subspace& c) {
    require_ambient(v, c);
    Subspace perp = orth_complement(v, c);
    if (!c.contains(perp)) throw PreconditionViolation("subspace is not coisotropic");
    SubquotientMap map(c, perp);
    Matrix lift = map.lift_matrix();
    return {QuadraticSpace(lift.transpose() * v.gram() * lift), std::move(map)};
}

/// L' = ♮(L ∩ C).
inline Subspace reduce_subspace(const QuadraticSpace& v, const Subspace& c, const Subspace& l) {
    require_ambient(v, l);
    if (!is_isotropic(v, l)) throw PreconditionViolation("subspace to reduce is not isotropic");
    auto red = coisotropic_reduce(v, c);
    return red.map.image(meet(l, c));
}

// ---------------------------------------------------------------------------
// compatible involutions (generalized metrics)

inline bool is_positive_definite(const Matrix& sym) {
    if (!sym.is_square() || !sym.is_symmetric()) return false;
    return inertia_of_form(sym).p == sym.rows();
}

/// τ with τ² = 1 and gram·τ symmetric positive-definite.
class Involution {
public:
    Involution() = default;
    Involution(const QuadraticSpace& v, Matrix tau) : tau_(std::move(tau)) {
        if (tau_.rows() != v.dim() || tau_.cols() != v.dim()) throw DimensionMismatch("involution has wrong size");
        if (!(tau_ * tau_ == Matrix::identity(v.dim()))) throw InvalidObject("tau squared is not the identity");
        if (!is_positive_definite(v.gram() * tau_))
            throw InvalidObject("gram * tau is not symmetric positive-definite");
    }

    const Matrix& tau() const { return tau_; }
    /// G(x, y) = <x, τ y>.
    Matrix metric(const QuadraticSpace& v) const { return v.gram() * tau_; }
    Subspace plus_space() const { return eigenspace(1); }
    Subspace minus_space() const { return eigenspace(-1); }

    friend bool operator==(const Involution& a, const Involution& b) { return a.tau_ == b.tau_; }

private:
    Subspace eigenspace(int s) const {
        Matrix m = tau_ - Rational(s) * Matrix::identity(tau_.rows());
        return kernel(m);
    }
    Matrix tau_;
};

/// Exact compatible involution: diagonalize by congruence and set τ = ±1 on
/// each basis vector according to the sign of its norm.
inline Involution split_involution(const QuadraticSpace& v) {
    const std::size_t n = v.dim();
    auto cg = congruence_diagonalize(v.gram());
    Vector signs(n);
    for (std::size_t i = 0; i < n; ++i) signs[i] = sign(cg.diag[i]);
    Matrix pt = cg.basis.transpose();
    return Involution(v, pt * Matrix::diagonal(signs) * inverse(pt));
}

struct FloatInvolution {
    Eigen::MatrixXd tau;
    std::size_t plus_dim = 0;
    std::size_t iterations = 0;
};

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
    return out;
}

constexpr double kPolarTolerance = 1e-9;
constexpr std::size_t kPolarIterationCap = 128;

/// σ = g0⁻¹ G, η = (σ²)^{1/2} by Denman–Beavers iteration, τ = η⁻¹ σ.
/// Double precision; a cross-check for split_involution.
inline FloatInvolution polar_involution(const QuadraticSpace& v, const Matrix& g0, double tol = kPolarTolerance,
                                        std::size_t max_iterations = kPolarIterationCap) {
    const std::size_t n = v.dim();
    if (g0.rows() != n || g0.cols() != n) throw DimensionMismatch("reference metric has wrong size");
    if (!is_positive_definite(g0)) throw PreconditionViolation("reference metric is not positive-definite");
    if (!(tol > 0)) throw PreconditionViolation("tolerance must be positive");
    FloatInvolution res;
    if (n == 0) return res;

    // With g0 = L Lᵀ, σ = L⁻ᵀ S Lᵀ for the symmetric S = L⁻¹ G L⁻ᵀ; the iteration
    // runs on S² so that rounding stays symmetric.
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::LLT<Eigen::MatrixXd> llt(to_eigen(g0));
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd l_inv = l.inverse();
    const Eigen::MatrixXd s = l_inv * to_eigen(v.gram()) * l_inv.transpose();
    const Eigen::MatrixXd a = s * s;
    Eigen::MatrixXd y = a;
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(N, N);
    bool converged = false;
    for (std::size_t it = 0; it < max_iterations; ++it) {
        Eigen::MatrixXd yi = y.inverse();
        Eigen::MatrixXd zi = z.inverse();
        // determinant scaling speeds up the early steps
        double mu = std::pow(std::abs(y.determinant() * z.determinant()), -1.0 / (2.0 * static_cast<double>(n)));
        if (!std::isfinite(mu) || mu <= 0) mu = 1.0;
        Eigen::MatrixXd y_next = 0.5 * (mu * y + zi / mu);
        z = 0.5 * (mu * z + yi / mu);
        double step = (y_next - y).norm();
        y = 0.5 * (y_next + y_next.transpose());
        res.iterations = it + 1;
        if (step <= 1e-14 * std::max(1.0, y.norm())) {
            converged = true;
            break;
        }
    }
    Eigen::MatrixXd sign_s = y.inverse() * s;
    sign_s = 0.5 * (sign_s + sign_s.transpose());
    // a few Newton steps X <- (X + X⁻¹)/2 remove the rounding left by an
    // ill-conditioned S²; they fix every exact involution
    for (int polish = 0; polish < 4; ++polish) {
        Eigen::MatrixXd next = 0.5 * (sign_s + Eigen::MatrixXd(sign_s.inverse()));
        sign_s = 0.5 * (next + next.transpose());
    }
    res.tau = l_inv.transpose() * sign_s * l.transpose();
    double defect = (res.tau * res.tau - Eigen::MatrixXd::Identity(N, N)).norm();
    if (!converged && defect > tol)
        throw ConvergenceFailure("square-root iteration did not converge in " + std::to_string(max_iterations) +
                                 " steps");
    if (defect > tol) throw ConvergenceFailure("tau squared deviates from the identity by " + std::to_string(defect));
    double plus = (static_cast<double>(n) + res.tau.trace()) / 2.0;
    res.plus_dim = static_cast<std::size_t>(std::llround(plus));
    return res;
}

}  // namespace courant
