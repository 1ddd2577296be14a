#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "courant/matrix.hpp"

namespace courant {

/// A linear subspace of Q^n, stored by its canonical basis: the nonzero rows
/// of the reduced row-echelon form (leftmost pivots). Two subspaces are equal
/// iff their stored bases are identical.
class Subspace {
public:
    Subspace() = default;

    /// canonical_basis: span of the rows of `vectors` inside Q^ambient_dim.
    static Subspace span(std::size_t ambient_dim, const Matrix& vectors) {
        if (vectors.rows() > 0 && vectors.cols() != ambient_dim)
            throw DimensionMismatch("spanning vectors do not have length " + std::to_string(ambient_dim));
        Subspace s;
        s.ambient_ = ambient_dim;
        if (vectors.rows() == 0) {
            s.basis_ = Matrix(0, ambient_dim);
            return s;
        }
        auto ef = rref(vectors);
        s.basis_ = std::move(ef.reduced);
        s.pivots_ = std::move(ef.pivots);
        return s;
    }
    static Subspace span(std::size_t ambient_dim, const std::vector<Vector>& vectors) {
        if (vectors.empty()) return zero(ambient_dim);
        return span(ambient_dim, Matrix::from_rows(vectors, ambient_dim));
    }
    static Subspace zero(std::size_t n) { return span(n, Matrix(0, n)); }
    static Subspace full(std::size_t n) { return span(n, Matrix::identity(n)); }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_; }
    const Matrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    Vector basis_vector(std::size_t i) const { return basis_.row(i); }
    std::vector<Vector> basis_vectors() const { return basis_.row_list(); }

    /// Coordinates of v in the canonical basis; v must lie in the subspace.
    Vector coordinates(const Vector& v) const {
        if (v.size() != ambient_) throw DimensionMismatch("vector does not live in the ambient space");
        Vector c(dim());
        for (std::size_t i = 0; i < dim(); ++i) c[i] = v[pivots_[i]];
        return c;
    }
    Vector from_coordinates(const Vector& c) const {
        if (c.size() != dim()) throw DimensionMismatch("coordinate vector has wrong length");
        Vector v(ambient_);
        for (std::size_t i = 0; i < dim(); ++i)
            if (c[i] != 0)
                for (std::size_t j = 0; j < ambient_; ++j) v[j] += c[i] * basis_(i, j);
        return v;
    }

    bool contains(const Vector& v) const {
        if (v.size() != ambient_) throw DimensionMismatch("vector does not live in the ambient space");
        return is_zero_vector(v - from_coordinates(coordinates(v)));
    }
    bool contains(const Subspace& other) const {
        require_same_ambient(other);
        for (std::size_t i = 0; i < other.dim(); ++i)
            if (!contains(other.basis_.row(i))) return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

    void require_same_ambient(const Subspace& other) const {
        if (ambient_ != other.ambient_) throw DimensionMismatch("subspaces live in different ambient spaces");
    }

private:
    static bool is_zero_vector(const Vector& v) { return courant::is_zero(v); }

    std::size_t ambient_ = 0;
    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

inline Subspace join(const Subspace& a, const Subspace& b) {
    a.require_same_ambient(b);
    return Subspace::span(a.ambient_dim(), vstack(a.basis(), b.basis()));
}

/// A ∩ B from the kernel of [A^T | -B^T]: every (alpha, beta) with
/// alpha A = beta B gives the common vector alpha A.
inline Subspace meet(const Subspace& a, const Subspace& b) {
    a.require_same_ambient(b);
    const std::size_t n = a.ambient_dim();
    if (a.is_zero() || b.is_zero()) return Subspace::zero(n);
    Matrix system = hstack(a.basis().transpose(), (-b.basis()).transpose());
    Matrix ker = nullspace(system);
    Matrix alphas = column_block(ker, 0, a.dim());
    return Subspace::span(n, alphas * a.basis());
}

inline std::pair<Subspace, Subspace> meet_join(const Subspace& a, const Subspace& b) {
    return {meet(a, b), join(a, b)};
}

/// Image of a subspace under a linear map (column convention).
inline Subspace image(const Matrix& map, const Subspace& s) {
    if (map.cols() != s.ambient_dim()) throw DimensionMismatch("map domain does not match subspace ambient");
    return Subspace::span(map.rows(), s.basis().map_rows(map));
}

/// Preimage {x : map x ∈ s}.
inline Subspace preimage(const Matrix& map, const Subspace& s) {
    if (map.rows() != s.ambient_dim()) throw DimensionMismatch("map codomain does not match subspace ambient");
    // x ↦ map x followed by the annihilator of s.
    Matrix ann = nullspace(s.basis().rows() ? s.basis() : Matrix(0, s.ambient_dim()));
    if (ann.rows() == 0) return Subspace::full(map.cols());
    return Subspace::span(map.cols(), nullspace(ann * map));
}

/// Kernel of a linear map.
inline Subspace kernel(const Matrix& map) { return Subspace::span(map.cols(), nullspace(map)); }

/// Direct product A × B inside Q^{n_a + n_b}.
inline Subspace product(const Subspace& a, const Subspace& b) {
    return Subspace::span(a.ambient_dim() + b.ambient_dim(), block_diag(a.basis(), b.basis()));
}

/// Projection of a subspace of Q^n onto the coordinate block [offset, offset+len).
inline Subspace project(const Subspace& s, std::size_t offset, std::size_t len) {
    return Subspace::span(len, column_block(s.basis(), offset, len));
}

/// Annihilator of s inside the dual space, in dual coordinates.
inline Subspace annihilator(const Subspace& s) {
    if (s.is_zero()) return Subspace::full(s.ambient_dim());
    return Subspace::span(s.ambient_dim(), nullspace(s.basis()));
}

// ---------------------------------------------------------------------------
// quotients

/// Quotient map Q^n -> Q^n / N. Quotient coordinates are the non-pivot
/// coordinates of N's canonical basis, in increasing order: a vector is first
/// reduced modulo N (clearing N's pivot coordinates) and then read off at the
/// free positions. The section places quotient coordinates back at the free
/// positions with zeros at the pivots.
class QuotientMap {
public:
    QuotientMap() = default;
    explicit QuotientMap(Subspace kernel) : kernel_(std::move(kernel)) {
        const std::size_t n = kernel_.ambient_dim();
        std::vector<bool> is_pivot(n, false);
        for (auto p : kernel_.pivots()) is_pivot[p] = true;
        for (std::size_t j = 0; j < n; ++j)
            if (!is_pivot[j]) free_.push_back(j);
    }

    std::size_t source_dim() const { return kernel_.ambient_dim(); }
    std::size_t target_dim() const { return free_.size(); }
    const Subspace& kernel() const { return kernel_; }
    const std::vector<std::size_t>& free_coordinates() const { return free_; }

    Vector apply(const Vector& v) const {
        if (v.size() != source_dim()) throw DimensionMismatch("quotient map applied to a vector of wrong length");
        Vector r = v;
        const auto& piv = kernel_.pivots();
        for (std::size_t i = 0; i < piv.size(); ++i) {
            if (r[piv[i]] == 0) continue;
            Rational f = r[piv[i]];
            for (std::size_t j = 0; j < r.size(); ++j)
                if (kernel_.basis()(i, j) != 0) r[j] -= f * kernel_.basis()(i, j);
        }
        Vector out(free_.size());
        for (std::size_t k = 0; k < free_.size(); ++k) out[k] = r[free_[k]];
        return out;
    }

    Vector section(const Vector& y) const {
        if (y.size() != target_dim()) throw DimensionMismatch("section applied to a vector of wrong length");
        Vector v(source_dim());
        for (std::size_t k = 0; k < free_.size(); ++k) v[free_[k]] = y[k];
        return v;
    }

    /// Matrix of the map (target_dim x source_dim).
    Matrix matrix() const {
        Matrix m(target_dim(), source_dim());
        for (std::size_t j = 0; j < source_dim(); ++j) {
            Vector col = apply(unit_vector(source_dim(), j));
            for (std::size_t i = 0; i < target_dim(); ++i) m(i, j) = col[i];
        }
        return m;
    }
    Matrix section_matrix() const {
        Matrix m(source_dim(), target_dim());
        for (std::size_t k = 0; k < free_.size(); ++k) m(free_[k], k) = 1;
        return m;
    }

    Subspace image(const Subspace& s) const {
        if (s.ambient_dim() != source_dim()) throw DimensionMismatch("quotient of a subspace of the wrong ambient");
        std::vector<Vector> rows;
        for (std::size_t i = 0; i < s.dim(); ++i) rows.push_back(apply(s.basis_vector(i)));
        return Subspace::span(target_dim(), rows);
    }

private:
    Subspace kernel_;
    std::vector<std::size_t> free_;
};

inline QuotientMap quotient(std::size_t ambient_dim, const Subspace& n) {
    if (n.ambient_dim() != ambient_dim) throw DimensionMismatch("quotient: kernel lives in a different ambient");
    return QuotientMap(n);
}

/// The map C -> C/N for subspaces N ⊆ C ⊆ Q^n. Vectors of C are first written
/// in C's canonical coordinates; the quotient of Q^{dim C} by those
/// coordinates of N then follows the QuotientMap convention.
class SubquotientMap {
public:
    SubquotientMap() = default;
    SubquotientMap(Subspace c, const Subspace& n) : domain_(std::move(c)) {
        if (!domain_.contains(n)) throw PreconditionViolation("subquotient: N is not contained in C");
        std::vector<Vector> coords;
        for (std::size_t i = 0; i < n.dim(); ++i) coords.push_back(domain_.coordinates(n.basis_vector(i)));
        inner_ = QuotientMap(Subspace::span(domain_.dim(), coords));
    }

    const Subspace& domain() const { return domain_; }
    std::size_t ambient_dim() const { return domain_.ambient_dim(); }
    std::size_t target_dim() const { return inner_.target_dim(); }

    /// Kernel N as a subspace of the ambient space.
    Subspace kernel() const {
        std::vector<Vector> rows;
        for (std::size_t i = 0; i < inner_.kernel().dim(); ++i)
            rows.push_back(domain_.from_coordinates(inner_.kernel().basis_vector(i)));
        return Subspace::span(ambient_dim(), rows);
    }

    Vector apply(const Vector& v) const {
        if (!domain_.contains(v)) throw PreconditionViolation("subquotient map applied outside its domain");
        return inner_.apply(domain_.coordinates(v));
    }
    Vector lift(const Vector& y) const { return domain_.from_coordinates(inner_.section(y)); }

    /// Matrix sending ambient vectors to quotient coordinates; only meaningful on C.
    Matrix matrix_on_domain() const { return inner_.matrix(); }
    /// Lift matrix (ambient_dim x target_dim).
    Matrix lift_matrix() const {
        Matrix m(ambient_dim(), target_dim());
        for (std::size_t k = 0; k < target_dim(); ++k) {
            Vector v = lift(unit_vector(target_dim(), k));
            for (std::size_t i = 0; i < ambient_dim(); ++i) m(i, k) = v[i];
        }
        return m;
    }

    /// ♮(S) for S ⊆ C.
    Subspace image(const Subspace& s) const {
        std::vector<Vector> rows;
        for (std::size_t i = 0; i < s.dim(); ++i) rows.push_back(apply(s.basis_vector(i)));
        return Subspace::span(target_dim(), rows);
    }

private:
    Subspace domain_;
    QuotientMap inner_;
};

// ---------------------------------------------------------------------------
// set-level composition of linear relations (no quadratic forms involved)

/// For K1 ⊆ Q^{n1} × Q^{n2} and K2 ⊆ Q^{n2} × Q^{n3}, the diamond
/// (K1 × K2) ∩ (Q^{n1} × Δ(Q^{n2}) × Q^{n3}) inside Q^{n1+2 n2+n3}.
inline Subspace linear_diamond(const Subspace& k1, const Subspace& k2, std::size_t n1, std::size_t n2,
                               std::size_t n3) {
    if (k1.ambient_dim() != n1 + n2 || k2.ambient_dim() != n2 + n3)
        throw DimensionMismatch("relations are not composable");
    const std::size_t n = n1 + 2 * n2 + n3;
    std::vector<Vector> diag;
    for (std::size_t i = 0; i < n1; ++i) diag.push_back(unit_vector(n, i));
    for (std::size_t i = 0; i < n2; ++i) {
        Vector v(n);
        v[n1 + i] = 1;
        v[n1 + n2 + i] = 1;
        diag.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < n3; ++i) diag.push_back(unit_vector(n, n1 + 2 * n2 + i));
    return meet(product(k1, k2), Subspace::span(n, diag));
}

/// {(x1, x3) : (x1, x2) ∈ K1, (x2, x3) ∈ K2 for some x2}.
inline Subspace compose_linear(const Subspace& k2, const Subspace& k1, std::size_t n1, std::size_t n2,
                               std::size_t n3) {
    Subspace d = linear_diamond(k1, k2, n1, n2, n3);
    Matrix m(d.dim(), n1 + n3);
    for (std::size_t i = 0; i < d.dim(); ++i) {
        for (std::size_t j = 0; j < n1; ++j) m(i, j) = d.basis()(i, j);
        for (std::size_t j = 0; j < n3; ++j) m(i, n1 + j) = d.basis()(i, n1 + 2 * n2 + j);
    }
    return Subspace::span(n1 + n3, m);
}

/// Swaps the two factors of a subspace of Q^{n1} × Q^{n2}.
inline Subspace swap_factors(const Subspace& s, std::size_t n1, std::size_t n2) {
    if (s.ambient_dim() != n1 + n2) throw DimensionMismatch("swap_factors: ambient mismatch");
    return Subspace::span(n1 + n2, hstack(column_block(s.basis(), n1, n2), column_block(s.basis(), 0, n1)));
}

}  // namespace courant
