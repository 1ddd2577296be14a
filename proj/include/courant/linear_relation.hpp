#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "courant/quadratic_space.hpp"

namespace courant {

/// An isotropic subspace of V1 × V̄2, where V̄2 carries the negated form.
/// Only the graph is stored; maximality is a computed property.
class LinearRelation {
public:
    LinearRelation() = default;
    LinearRelation(QuadraticSpace source, QuadraticSpace target, Subspace graph)
        : source_(std::move(source)), target_(std::move(target)), graph_(std::move(graph)) {
        if (graph_.ambient_dim() != source_.dim() + target_.dim())
            throw DimensionMismatch("relation graph does not live in source x target");
        const QuadraticSpace amb = ambient();
        const Matrix g = restricted_gram(amb, graph_);
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = i; j < g.cols(); ++j)
                if (g(i, j) != 0)
                    throw IsotropyViolation("span is not isotropic for the product form", graph_.basis_vector(i),
                                            graph_.basis_vector(j), g(i, j));
    }

    static LinearRelation from_span(const QuadraticSpace& source, const QuadraticSpace& target, const Matrix& span) {
        return LinearRelation(source, target, Subspace::span(source.dim() + target.dim(), span));
    }

    /// Δ(E) = {(e, e)}.
    static LinearRelation diagonal(const QuadraticSpace& e) {
        const std::size_t n = e.dim();
        return from_span(e, e, hstack(Matrix::identity(n), Matrix::identity(n)));
    }

    /// gr(F) = {(x, F x)} for F: source -> target (column convention).
    static LinearRelation graph_of(const QuadraticSpace& source, const QuadraticSpace& target, const Matrix& f) {
        if (f.rows() != target.dim() || f.cols() != source.dim()) throw DimensionMismatch("map has wrong shape");
        return from_span(source, target, hstack(Matrix::identity(source.dim()), f.transpose()));
    }

    const QuadraticSpace& source() const { return source_; }
    const QuadraticSpace& target() const { return target_; }
    const Subspace& graph() const { return graph_; }
    std::size_t dim() const { return graph_.dim(); }

    /// V1 × V̄2 with the form G1 ⊕ (−G2).
    QuadraticSpace ambient() const { return relation_ambient(source_, target_); }

    ClassificationFlags flags() const { return classify(ambient(), graph_); }
    bool is_maximal() const { return flags().maximal_isotropic; }
    bool is_lagrangian() const { return flags().lagrangian; }

    /// p1(R) and p2(R).
    Subspace source_projection() const { return project(graph_, 0, source_.dim()); }
    Subspace target_projection() const { return project(graph_, source_.dim(), target_.dim()); }
    /// R ∩ (V1 × 0) read inside V1, and R ∩ (0 × V2) read inside V2.
    Subspace source_kernel() const {
        return project(meet(graph_, product(Subspace::full(source_.dim()), Subspace::zero(target_.dim()))), 0,
                       source_.dim());
    }
    Subspace target_kernel() const {
        return project(meet(graph_, product(Subspace::zero(source_.dim()), Subspace::full(target_.dim()))),
                       source_.dim(), target_.dim());
    }

    friend bool operator==(const LinearRelation& a, const LinearRelation& b) {
        return a.source_ == b.source_ && a.target_ == b.target_ && a.graph_ == b.graph_;
    }

private:
    QuadraticSpace source_;
    QuadraticSpace target_;
    Subspace graph_;
};

inline LinearRelation transpose(const LinearRelation& r) {
    return LinearRelation(r.target(), r.source(), swap_factors(r.graph(), r.source().dim(), r.target().dim()));
}

/// A subspace L ⊆ E seen as the relation E -> 0 (L × {0}).
inline LinearRelation to_point(const QuadraticSpace& e, const Subspace& l) {
    return LinearRelation(e, QuadraticSpace(Matrix(0, 0)), l);
}
/// A subspace L ⊆ E seen as the relation 0 -> E ({0} × L).
inline LinearRelation from_point(const QuadraticSpace& e, const Subspace& l) {
    return LinearRelation(QuadraticSpace(Matrix(0, 0)), e, l);
}

struct Composition {
    LinearRelation relation;
    /// R2 ⋄ R1 inside V1 × V2 × V2 × V3.
    Subspace diamond;
};

/// R2 ∘ R1 by coisotropic reduction: inside V1 × V̄2 × V2 × V̄3 the subspace
/// C = V1 × Δ(V2) × V3 is coisotropic with C⊥ = 0 × Δ(V2) × 0, and
/// C / C⊥ ≅ V1 × V̄3 through (a, b, b, c) ↦ (a, c).
inline Composition compose(const LinearRelation& r2, const LinearRelation& r1) {
    if (!(r1.target() == r2.source())) throw DimensionMismatch("relations are not composable");
    const std::size_t n1 = r1.source().dim(), n2 = r1.target().dim(), n3 = r2.target().dim();
    const std::size_t n = n1 + 2 * n2 + n3;
    const QuadraticSpace four = direct_sum(r1.ambient(), r2.ambient());

    std::vector<Vector> c_rows;
    for (std::size_t i = 0; i < n1; ++i) c_rows.push_back(unit_vector(n, i));
    for (std::size_t i = 0; i < n2; ++i) {
        Vector v(n);
        v[n1 + i] = 1;
        v[n1 + n2 + i] = 1;
        c_rows.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < n3; ++i) c_rows.push_back(unit_vector(n, n1 + 2 * n2 + i));
    const Subspace c = Subspace::span(n, c_rows);
    const Subspace l = product(r1.graph(), r2.graph());

    auto red = coisotropic_reduce(four, c);
    const Subspace reduced = reduce_subspace(four, c, l);

    // p̄ = p ∘ lift, with p(a, b, b', c) = (a, c)
    Matrix p(n1 + n3, n);
    for (std::size_t i = 0; i < n1; ++i) p(i, i) = 1;
    for (std::size_t i = 0; i < n3; ++i) p(n1 + i, n1 + 2 * n2 + i) = 1;
    const Matrix pbar = p * red.map.lift_matrix();
    Subspace graph = image(pbar, reduced);

    return {LinearRelation(r1.source(), r2.target(), std::move(graph)), meet(l, c)};
}

inline LinearRelation compose_relation(const LinearRelation& r2, const LinearRelation& r1) {
    return compose(r2, r1).relation;
}

/// R† = C(an(R)) with C(ξ1, ξ2) = (ξ1, −ξ2), in dual coordinates of V1* × V2*.
/// Returned as a plain subspace: it is not a relation between quadratic spaces.
inline Subspace dagger(const LinearRelation& r) {
    const std::size_t n1 = r.source().dim(), n2 = r.target().dim();
    Subspace ann = annihilator(r.graph());
    Matrix flip = Matrix::identity(n1 + n2);
    for (std::size_t i = 0; i < n2; ++i) flip(n1 + i, n1 + i) = -1;
    return image(flip, ann);
}

/// Covariant k-tensor on Q^dim, coefficients indexed row-major by (i1, ..., ik).
class CovariantTensor {
public:
    CovariantTensor() = default;
    CovariantTensor(std::size_t dim, std::size_t order, std::vector<Rational> coeffs)
        : dim_(dim), order_(order), coeffs_(std::move(coeffs)) {
        std::size_t expect = 1;
        for (std::size_t i = 0; i < order_; ++i) expect *= dim_;
        if (coeffs_.size() != expect) throw DimensionMismatch("tensor coefficient count is not dim^order");
    }
    static CovariantTensor zero(std::size_t dim, std::size_t order) {
        std::size_t count = 1;
        for (std::size_t i = 0; i < order; ++i) count *= dim;
        return CovariantTensor(dim, order, std::vector<Rational>(count));
    }
    static CovariantTensor from_matrix(const Matrix& m) {
        if (!m.is_square()) throw DimensionMismatch("bilinear tensor needs a square matrix");
        return CovariantTensor(m.rows(), 2, m.entries());
    }

    std::size_t dim() const { return dim_; }
    std::size_t order() const { return order_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Rational operator()(const std::vector<Vector>& args) const {
        if (args.size() != order_) throw DimensionMismatch("tensor evaluated on wrong number of arguments");
        for (const auto& a : args)
            if (a.size() != dim_) throw DimensionMismatch("tensor argument has wrong length");
        Rational acc = 0;
        eval(args, 0, 0, Rational(1), acc);
        return acc;
    }

private:
    void eval(const std::vector<Vector>& args, std::size_t slot, std::size_t offset, const Rational& weight,
              Rational& acc) const {
        if (slot == order_) {
            acc += weight * coeffs_[offset];
            return;
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            if (args[slot][i] == 0) continue;
            Rational w = weight * args[slot][i];
            eval(args, slot + 1, offset * dim_ + i, w, acc);
        }
    }

    std::size_t dim_ = 0;
    std::size_t order_ = 0;
    std::vector<Rational> coeffs_;
};

/// t1(x1, ..., xk) = t2(y1, ..., yk) for every k-tuple of graph basis vectors
/// (x_i, y_i). By multilinearity this is equivalent to the condition on all of R.
inline bool tensor_related(const CovariantTensor& t1, const CovariantTensor& t2, const LinearRelation& r) {
    if (t1.order() != t2.order()) throw DimensionMismatch("tensors have different orders");
    if (t1.dim() != r.source().dim() || t2.dim() != r.target().dim())
        throw DimensionMismatch("tensor dimensions do not match the relation");
    const std::size_t n1 = r.source().dim(), n2 = r.target().dim();
    const std::size_t k = t1.order(), d = r.dim();
    std::vector<Vector> xs, ys;
    for (std::size_t i = 0; i < d; ++i) {
        Vector v = r.graph().basis_vector(i);
        xs.push_back(slice(v, 0, n1));
        ys.push_back(slice(v, n1, n2));
    }
    if (k == 0) return t1({}) == t2({});
    if (d == 0) return true;
    std::vector<std::size_t> idx(k, 0);
    for (;;) {
        std::vector<Vector> a, b;
        for (auto i : idx) {
            a.push_back(xs[i]);
            b.push_back(ys[i]);
        }
        if (t1(a) != t2(b)) return false;
        std::size_t s = 0;
        while (s < k && ++idx[s] == d) idx[s++] = 0;
        if (s == k) break;
    }
    return true;
}

enum class Direction { forward, backward };

/// forward: R∘({0}×L) ⊆ V2 for L ⊆ V1; backward: (L×{0})∘R ⊆ V1 for L ⊆ V2.
inline Subspace push_pull(const LinearRelation& r, const Subspace& l, Direction dir) {
    if (dir == Direction::forward) {
        if (l.ambient_dim() != r.source().dim()) throw DimensionMismatch("subspace does not live in the source");
        if (!is_isotropic(r.source(), l)) throw PreconditionViolation("subspace to push forward is not isotropic");
        return compose_relation(r, from_point(r.source(), l)).graph();
    }
    if (l.ambient_dim() != r.target().dim()) throw DimensionMismatch("subspace does not live in the target");
    if (!is_isotropic(r.target(), l)) throw PreconditionViolation("subspace to pull back is not isotropic");
    return compose_relation(to_point(r.target(), l), r).graph();
}

/// (τ1 × τ2)(R) = R.
inline bool isometry_check(const LinearRelation& r, const Involution& tau1, const Involution& tau2) {
    // re-validate: involutions may have been built against other spaces
    Involution(r.source(), tau1.tau());
    Involution(r.target(), tau2.tau());
    return image(block_diag(tau1.tau(), tau2.tau()), r.graph()) == r.graph();
}

struct GraphDecomposition {
    Subspace k1;
    /// Rows are F(b_i) for the canonical basis b_i of K1.
    Matrix f_rows;

    Vector apply(const Vector& x) const {
        if (!k1.contains(x)) throw PreconditionViolation("vector is outside the domain K1");
        return f_rows.transpose() * k1.coordinates(x);
    }
};

/// Writes an isometric relation as the graph of F: K1 -> V2 with K1 = p1(R).
/// The graph obstruction is reported before the isometry test so that its
/// witness is available for any relation.
inline GraphDecomposition graph_decompose(const LinearRelation& r, const Involution& tau1, const Involution& tau2) {
    const std::size_t n1 = r.source().dim(), n2 = r.target().dim();
    const Subspace k2 = r.target_kernel();
    if (!k2.is_zero()) {
        Vector w(n1);
        Vector e2 = k2.basis_vector(0);
        w.insert(w.end(), e2.begin(), e2.end());
        throw NotAGraph("relation meets 0 x V2 nontrivially", w);
    }
    if (!isometry_check(r, tau1, tau2)) throw NotIsometric("relation is not a generalized isometry");
    // With R ∩ (0 × V2) = 0 every pivot of the canonical basis sits in the V1
    // block, so the V1 parts form the canonical basis of K1.
    const Matrix& b = r.graph().basis();
    return {Subspace::span(n1, column_block(b, 0, n1)), column_block(b, n1, n2)};
}

}  // namespace courant
