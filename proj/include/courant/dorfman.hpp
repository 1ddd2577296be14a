#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "courant/quadratic_lie.hpp"

namespace courant {

/// Df(g): the quadratic Lie algebra on g ⊕ g* with the duality pairing.
/// Coordinates are (x, ξ) with x in the basis e_i and ξ in the dual basis ε^i.
struct DorfmanDouble {
    StructureTensor base;
    QuadraticLieAlgebra algebra;

    std::size_t base_dim() const { return base.dim(); }
};

/// [(x,ξ),(y,η)] = ([x,y], ad*_x η − i_y dξ) with dξ(a,b) = −ξ([a,b]).
inline DorfmanDouble df(const StructureTensor& c) {
    auto jac = check_jacobi(c);
    if (jac.status == AxiomStatus::failed) throw InvalidObject("structure constants fail the Jacobi identity");
    auto anti = check_antisymmetry(c);
    if (anti.status == AxiomStatus::failed) throw InvalidObject("structure constants are not antisymmetric");
    const std::size_t n = c.dim();
    StructureTensor d(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                d(i, j, k) = c(i, j, k);
                // (ad*_{e_i} ε^j)(e_l) = −ε^j([e_i, e_l])
                d(i, n + j, n + k) = -c(i, k, j);
                // (−i_{e_j} dε^i)(e_l) = ε^i([e_j, e_l])
                d(n + i, j, n + k) = c(j, k, i);
            }
    Matrix g(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) g(i, n + i) = g(n + i, i) = 1;
    return {c, QuadraticLieAlgebra(QuadraticSpace(g), d)};
}

/// K ⊕ an(K) ⊆ g ⊕ g*.
inline Subspace dirac_of_subalgebra(const DorfmanDouble& d, const Subspace& k) {
    require_ambient(d.base, k);
    if (!is_subalgebra(d.base, k)) throw PreconditionViolation("K is not a subalgebra");
    const std::size_t n = d.base_dim();
    Matrix zero_k(k.dim(), n);
    Subspace ann = annihilator(k);
    Matrix zero_a(ann.dim(), n);
    return Subspace::span(2 * n, vstack(hstack(k.basis(), zero_k), hstack(zero_a, ann.basis())));
}

/// K ⊆ g1 × g2 is a Lie algebra relation iff it is closed under the
/// componentwise bracket.
inline bool is_lie_relation(const StructureTensor& c1, const StructureTensor& c2, const Subspace& k) {
    return is_subalgebra(direct_sum(c1, c2), k);
}

/// R_K = {((x1,ξ1),(x2,ξ2)) : (x1,x2) ∈ K, ξ1(x1′) = ξ2(x2′) for all (x1′,x2′) ∈ K}.
inline LinearRelation relation_of(const DorfmanDouble& d1, const DorfmanDouble& d2, const Subspace& k) {
    const std::size_t n1 = d1.base_dim(), n2 = d2.base_dim();
    if (k.ambient_dim() != n1 + n2) throw DimensionMismatch("K does not live in g1 x g2");
    if (!is_lie_relation(d1.base, d2.base, k)) throw PreconditionViolation("K is not a Lie algebra relation");
    const std::size_t n = 2 * n1 + 2 * n2;
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < k.dim(); ++i) {
        Vector v(n), b = k.basis_vector(i);
        for (std::size_t a = 0; a < n1; ++a) v[a] = b[a];
        for (std::size_t a = 0; a < n2; ++a) v[2 * n1 + a] = b[n1 + a];
        rows.push_back(std::move(v));
    }
    // (ξ1, ξ2) with (ξ1, −ξ2) ∈ an(K)
    Subspace ann = annihilator(k);
    for (std::size_t i = 0; i < ann.dim(); ++i) {
        Vector v(n), a = ann.basis_vector(i);
        for (std::size_t j = 0; j < n1; ++j) v[n1 + j] = a[j];
        for (std::size_t j = 0; j < n2; ++j) v[2 * n1 + n2 + j] = -a[n1 + j];
        rows.push_back(std::move(v));
    }
    return LinearRelation(d1.algebra.space(), d2.algebra.space(), Subspace::span(n, rows));
}

/// The same R_K through Df(g1 × g2): take the Dirac structure K ⊕ an(K) and
/// apply Ψ((X1,X2),(ξ1,ξ2)) = ((X1,ξ1),(X2,−ξ2)).
inline LinearRelation relation_of_via_psi(const DorfmanDouble& d1, const DorfmanDouble& d2, const Subspace& k) {
    const std::size_t n1 = d1.base_dim(), n2 = d2.base_dim(), m = n1 + n2;
    DorfmanDouble big = df(direct_sum(d1.base, d2.base));
    Subspace dirac = dirac_of_subalgebra(big, k);
    Matrix psi(2 * m, 2 * m);
    for (std::size_t a = 0; a < n1; ++a) {
        psi(a, a) = 1;                 // X1
        psi(n1 + a, m + a) = 1;        // ξ1
    }
    for (std::size_t a = 0; a < n2; ++a) {
        psi(2 * n1 + a, n1 + a) = 1;           // X2
        psi(2 * n1 + n2 + a, m + n1 + a) = -1;  // −ξ2
    }
    return LinearRelation(d1.algebra.space(), d2.algebra.space(), image(psi, dirac));
}

/// F̂(x, ξ) = (F x, F^{-T} ξ) for a bijective F: g1 -> g2.
inline Matrix dorfman_lift(const Matrix& f) {
    if (!f.is_square()) throw PreconditionViolation("only bijective maps lift to Dorfman doubles");
    return block_diag(f, inverse(f).transpose());
}

/// gr(F) ⊆ g1 × g2.
inline Subspace lie_graph(const Matrix& f) {
    return Subspace::span(f.cols() + f.rows(), hstack(Matrix::identity(f.cols()), f.transpose()));
}

}  // namespace courant
