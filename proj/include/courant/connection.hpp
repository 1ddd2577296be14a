#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "courant/linear_relation.hpp"
#include "courant/quadratic_lie.hpp"

namespace courant {

// Connections on a quadratic Lie algebra (a Courant algebroid over a point).
// ∇_{e_i} e_j = Σ_k Γ(i,j,k) e_k. The Leibniz rules are vacuous here, so Γ is
// the whole story.

struct CompatibilityReport {
    bool ok = true;
    std::vector<std::size_t> witness;  // (i, j, k)
    Rational residual;
};

/// <∇_i e_j, e_k> + <e_j, ∇_i e_k> = 0 on basis triples.
inline CompatibilityReport validate_connection(const QuadraticLieAlgebra& e, const std::vector<Rational>& gamma) {
    const std::size_t n = e.dim();
    if (gamma.size() != n * n * n) throw DimensionMismatch("connection coefficients need dim^3 entries");
    const Matrix& g = e.gram();
    auto gm = [&](std::size_t i, std::size_t j, std::size_t k) { return gamma[(i * n + j) * n + k]; };
    CompatibilityReport rep;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                Rational s;
                for (std::size_t m = 0; m < n; ++m) s += gm(i, j, m) * g(m, k) + gm(i, k, m) * g(j, m);
                if (s != 0) return {false, {i, j, k}, s};
            }
    return rep;
}

class Connection {
public:
    Connection() = default;
    Connection(QuadraticLieAlgebra e, std::vector<Rational> gamma) : e_(std::move(e)), gamma_(std::move(gamma)) {
        auto rep = validate_connection(e_, gamma_);
        if (!rep.ok)
            throw InvalidObject("connection is not metric compatible at (" + std::to_string(rep.witness[0]) + ", " +
                                std::to_string(rep.witness[1]) + ", " + std::to_string(rep.witness[2]) + ")");
    }

    static Connection zero(const QuadraticLieAlgebra& e) {
        const std::size_t n = e.dim();
        return Connection(e, std::vector<Rational>(n * n * n));
    }
    /// ∇_x y = [x, y]; compatibility is ad-invariance.
    static Connection adjoint(const QuadraticLieAlgebra& e) { return Connection(e, e.structure().coeffs()); }

    const QuadraticLieAlgebra& algebra() const { return e_; }
    std::size_t dim() const { return e_.dim(); }
    const std::vector<Rational>& coeffs() const { return gamma_; }
    const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        const std::size_t n = dim();
        return gamma_[(i * n + j) * n + k];
    }

    Vector nabla(const Vector& x, const Vector& y) const {
        const std::size_t n = dim();
        if (x.size() != n || y.size() != n) throw DimensionMismatch("vector does not live in the algebra");
        Vector out(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (y[j] == 0) continue;
                Rational w = x[i] * y[j];
                for (std::size_t k = 0; k < n; ++k)
                    if ((*this)(i, j, k) != 0) out[k] += w * (*this)(i, j, k);
            }
        }
        return out;
    }

    friend bool operator==(const Connection& a, const Connection& b) {
        return a.e_ == b.e_ && a.gamma_ == b.gamma_;
    }

private:
    QuadraticLieAlgebra e_;
    std::vector<Rational> gamma_;
};

/// T(a,b,c) = <∇_a b − ∇_b a − [a,b], c> + <∇_c a, b>
inline CovariantTensor torsion(const Connection& nb) {
    const QuadraticLieAlgebra& e = nb.algebra();
    const std::size_t n = e.dim();
    std::vector<Rational> t(n * n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                Rational s;
                for (std::size_t m = 0; m < n; ++m) {
                    s += (nb(a, b, m) - nb(b, a, m) - e.structure()(a, b, m)) * e.gram()(m, c);
                    s += nb(c, a, m) * e.gram()(m, b);
                }
                t[(a * n + b) * n + c] = s;
            }
    return CovariantTensor(n, 3, std::move(t));
}

/// Stored as k(a,b,c) = <𝐊(e_a, e_b), e_c> = <∇_c e_a, e_b>.
inline CovariantTensor kmap(const Connection& nb) {
    const std::size_t n = nb.dim();
    const Matrix& g = nb.algebra().gram();
    std::vector<Rational> t(n * n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                Rational s;
                for (std::size_t m = 0; m < n; ++m) s += nb(c, a, m) * g(m, b);
                t[(a * n + b) * n + c] = s;
            }
    return CovariantTensor(n, 3, std::move(t));
}

/// 𝐊(ψ, ψ′) as a vector: G⁻¹ applied to φ ↦ <∇_φ ψ, ψ′>.
inline Vector kmap_value(const Connection& nb, const Vector& psi, const Vector& psi2) {
    const std::size_t n = nb.dim();
    const QuadraticLieAlgebra& e = nb.algebra();
    Vector rhs(n);
    for (std::size_t c = 0; c < n; ++c) rhs[c] = e.pair(nb.nabla(unit_vector(n, c), psi), psi2);
    return inverse(e.gram()) * rhs;
}

/// R(φ′,φ,ψ,ψ′) = ½(R0(φ′,φ,ψ,ψ′) + R0(ψ′,ψ,φ,φ′) + <𝐊(φ,φ′), 𝐊(ψ,ψ′)>) with
/// R0(φ′,φ,ψ,ψ′) = <∇_ψ∇_ψ′φ − ∇_ψ′∇_ψφ − ∇_[ψ,ψ′]φ, φ′>.
inline CovariantTensor riemann(const Connection& nb) {
    const QuadraticLieAlgebra& e = nb.algebra();
    const std::size_t n = e.dim();
    const Matrix& g = e.gram();
    // nn[c][d][b] = ∇_c ∇_d e_b
    std::vector<Vector> first(n * n), second(n * n * n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t b = 0; b < n; ++b) first[c * n + b] = nb.nabla(unit_vector(n, c), unit_vector(n, b));
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
            for (std::size_t b = 0; b < n; ++b) second[(c * n + d) * n + b] = nb.nabla(unit_vector(n, c), first[d * n + b]);
    auto bracket_term = [&](std::size_t c, std::size_t d, std::size_t b) {
        Vector out(n);
        for (std::size_t m = 0; m < n; ++m) {
            const Rational& w = e.structure()(c, d, m);
            if (w == 0) continue;
            for (std::size_t k = 0; k < n; ++k) out[k] += w * first[m * n + b][k];
        }
        return out;
    };
    // r0[a][b][c][d] = R0(e_a, e_b, e_c, e_d)
    std::vector<Rational> r0(n * n * n * n);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = 0; d < n; ++d) {
                Vector v = second[(c * n + d) * n + b] - second[(d * n + c) * n + b] - bracket_term(c, d, b);
                Vector gv = g * v;
                for (std::size_t a = 0; a < n; ++a) r0[((a * n + b) * n + c) * n + d] = gv[a];
            }
    CovariantTensor k = kmap(nb);
    Matrix ginv = inverse(g);
    // kv[a][b] = 𝐊(e_a, e_b)
    std::vector<Vector> kv(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            Vector col(n);
            for (std::size_t c = 0; c < n; ++c) col[c] = k.coeffs()[(a * n + b) * n + c];
            kv[a * n + b] = ginv * col;
        }
    std::vector<Rational> out(n * n * n * n);
    const Rational half(1, 2);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) {
                    Rational s = r0[((a * n + b) * n + c) * n + d] + r0[((d * n + c) * n + b) * n + a];
                    s += bilinear(kv[b * n + a], g, kv[c * n + d]);
                    out[((a * n + b) * n + c) * n + d] = half * s;
                }
    return CovariantTensor(n, 4, std::move(out));
}

/// ∇ on E1 × Ē2 acting factorwise.
inline Connection product_connection(const Connection& n1, const Connection& n2) {
    const std::size_t a = n1.dim(), b = n2.dim(), n = a + b;
    std::vector<Rational> gamma(n * n * n);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < a; ++j)
            for (std::size_t k = 0; k < a; ++k) gamma[(i * n + j) * n + k] = n1(i, j, k);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t k = 0; k < b; ++k) gamma[((a + i) * n + a + j) * n + a + k] = n2(i, j, k);
    return Connection(product(n1.algebra(), n2.algebra(), true), std::move(gamma));
}

struct RelatednessReport {
    bool related = true;
    std::optional<std::pair<Vector, Vector>> witness;  // (ψ, φ) with ∇_ψ φ ∉ R
};

/// (∇¹_{ψ1} φ1, ∇²_{ψ2} φ2) ∈ R for all ψ, φ ∈ R.
inline RelatednessReport related_connections(const Connection& n1, const Connection& n2, const LinearRelation& r) {
    if (!(r.source() == n1.algebra().space()) || !(r.target() == n2.algebra().space()))
        throw DimensionMismatch("relation does not join the two algebras");
    const std::size_t a = n1.dim(), b = n2.dim();
    RelatednessReport rep;
    for (std::size_t i = 0; i < r.dim(); ++i)
        for (std::size_t j = 0; j < r.dim(); ++j) {
            Vector psi = r.graph().basis_vector(i), phi = r.graph().basis_vector(j);
            Vector v = concat(n1.nabla(slice(psi, 0, a), slice(phi, 0, a)), n2.nabla(slice(psi, a, b), slice(phi, a, b)));
            if (!r.graph().contains(v)) {
                rep.related = false;
                rep.witness = std::make_pair(psi, phi);
                return rep;
            }
        }
    return rep;
}

// Perturbation ∇̄_u v = [u, v] + 𝐤(u, v) with <𝐤(u,v), w> = <u, j 𝐤0(π_h v, π_h w)>.
struct PerturbationData {
    Matrix h_basis;      // rows
    Matrix hperp_basis;  // rows
    std::vector<Rational> k0;  // k0[(a*dim h + b)*dim h⊥ + c]: coefficient of the c-th h⊥ row in 𝐤0(h_a, h_b)

    std::size_t h_dim() const { return h_basis.rows(); }
    std::size_t hperp_dim() const { return hperp_basis.rows(); }
};

inline void validate_perturbation(const QuadraticLieAlgebra& e, const PerturbationData& p) {
    const std::size_t n = e.dim(), dh = p.h_dim(), dp = p.hperp_dim();
    if (p.h_basis.cols() != n || p.hperp_basis.cols() != n) throw DimensionMismatch("perturbation bases have the wrong length");
    if (dh + dp != n || rank(vstack(p.h_basis, p.hperp_basis)) != n)
        throw PreconditionViolation("h and its complement do not split E");
    if (!(p.h_basis * e.gram() * p.hperp_basis.transpose()).is_zero())
        throw PreconditionViolation("the complement is not orthogonal to h");
    if (determinant(p.h_basis * e.gram() * p.h_basis.transpose()) == 0)
        throw PreconditionViolation("the form is degenerate on h");
    if (p.k0.size() != dh * dh * dp) throw DimensionMismatch("k0 needs dim h * dim h * dim h-perp entries");
    for (std::size_t a = 0; a < dh; ++a)
        for (std::size_t b = 0; b < dh; ++b)
            for (std::size_t c = 0; c < dp; ++c)
                if (p.k0[(a * dh + b) * dp + c] != -p.k0[(b * dh + a) * dp + c])
                    throw PreconditionViolation("k0 is not antisymmetric");
}

/// 𝐤0(x, y) ∈ E for x, y given in h-basis coordinates.
inline Vector k0_value(const PerturbationData& p, const Vector& x, const Vector& y) {
    const std::size_t dh = p.h_dim(), dp = p.hperp_dim();
    Vector coeff(dp);
    for (std::size_t a = 0; a < dh; ++a)
        for (std::size_t b = 0; b < dh; ++b) {
            if (x[a] == 0 || y[b] == 0) continue;
            for (std::size_t c = 0; c < dp; ++c) coeff[c] += x[a] * y[b] * p.k0[(a * dh + b) * dp + c];
        }
    return p.hperp_basis.transpose() * coeff;
}

inline Connection perturb(const QuadraticLieAlgebra& e, const PerturbationData& p) {
    validate_perturbation(e, p);
    const std::size_t n = e.dim(), dh = p.h_dim();
    // coordinates in the h ⊕ h⊥ basis; the first dh are π_h
    Matrix coords = inverse(vstack(p.h_basis, p.hperp_basis).transpose());
    auto pi_h = [&](const Vector& v) {
        Vector c = coords * v;
        return Vector(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(dh));
    };
    Matrix ginv = inverse(e.gram());
    std::vector<Rational> gamma = e.structure().coeffs();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Vector pj = pi_h(unit_vector(n, j));
            Vector rhs(n);
            for (std::size_t w = 0; w < n; ++w)
                rhs[w] = e.pair(unit_vector(n, i), k0_value(p, pj, pi_h(unit_vector(n, w))));
            Vector k = ginv * rhs;
            for (std::size_t m = 0; m < n; ++m) gamma[(i * n + j) * n + m] += k[m];
        }
    return Connection(e, std::move(gamma));
}

}  // namespace courant

namespace courant {

/// so(3) carrying the form it inherits from so(4) through so3_in_so4 (−4·I).
inline QuadraticLieAlgebra so3_in_so4_source() {
    Matrix i = so3_in_so4();
    return QuadraticLieAlgebra(QuadraticSpace(i.transpose() * so4().gram() * i), so3_structure());
}

/// 𝐤0(x, y) = s·(x1 y2 − x2 y1)·L_14 on h = so3_in_so4, h⊥ = span(L_14, L_24, L_34).
inline PerturbationData so4_perturbation(const Rational& s) {
    PerturbationData p;
    p.h_basis = so3_in_so4().transpose();
    p.hperp_basis = Matrix(3, 6);
    p.hperp_basis(0, 2) = 1, p.hperp_basis(1, 4) = 1, p.hperp_basis(2, 5) = 1;
    p.k0.assign(27, Rational(0));
    p.k0[(0 * 3 + 1) * 3 + 0] = s;
    p.k0[(1 * 3 + 0) * 3 + 0] = -s;
    return p;
}

}  // namespace courant
