#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "courant/linear_relation.hpp"
#include "courant/quadratic_lie.hpp"

namespace courant {

// Fiber skeleton of a reduction: E, a Lie algebra g and an injective ℜ: g -> E.
// K = ℜ(g), and (x, y)_g = <ℜx, ℜy>.
struct ReductionData {
    QuadraticSpace e;
    std::optional<StructureTensor> e_bracket;  // set when E is a quadratic Lie algebra
    StructureTensor g;
    Matrix r_map;  // dim E x dim g
    Subspace k, kperp;
    Matrix induced_form;
    Inertia induced_inertia;

    std::size_t g_dim() const { return g.dim(); }
    QuadraticSpace g_form_space() const { return QuadraticSpace(induced_form); }
};

namespace detail {

inline ReductionData build_reduction(const QuadraticSpace& e, std::optional<StructureTensor> bracket,
                                     const StructureTensor& g, const Matrix& r) {
    if (r.rows() != e.dim() || r.cols() != g.dim()) throw DimensionMismatch("R must be a dim E x dim g matrix");
    if (check_jacobi(g).status == AxiomStatus::failed || check_antisymmetry(g).status == AxiomStatus::failed)
        throw InvalidObject("g is not a Lie algebra");
    if (rank(r) != g.dim()) throw PreconditionViolation("R is not injective");
    if (bracket) {
        for (std::size_t i = 0; i < g.dim(); ++i)
            for (std::size_t j = i + 1; j < g.dim(); ++j) {
                Vector lhs = r * g.bracket(unit_vector(g.dim(), i), unit_vector(g.dim(), j));
                Vector rhs = bracket->bracket(r.col(i), r.col(j));
                if (lhs != rhs) throw PreconditionViolation("R is not a Lie algebra morphism");
            }
    }
    ReductionData d;
    d.e = e;
    d.e_bracket = std::move(bracket);
    d.g = g;
    d.r_map = r;
    d.k = Subspace::span(e.dim(), r.transpose());
    d.kperp = orth_complement(e, d.k);
    d.induced_form = r.transpose() * e.gram() * r;
    d.induced_inertia = inertia_of_form(d.induced_form);
    return d;
}

/// Quadratic space W / (W ∩ W⊥) together with its quotient map.
inline std::pair<QuadraticSpace, SubquotientMap> nondegenerate_quotient(const QuadraticSpace& e, const Subspace& w) {
    SubquotientMap chi(w, meet(w, orth_complement(e, w)));
    Matrix lift = chi.lift_matrix();
    return {QuadraticSpace(lift.transpose() * e.gram() * lift), std::move(chi)};
}

/// {(e, χ(e)) : e ∈ W}
inline LinearRelation quotient_relation(const QuadraticSpace& e, const QuadraticSpace& target, const SubquotientMap& chi) {
    const Subspace& w = chi.domain();
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < w.dim(); ++i) rows.push_back(concat(w.basis_vector(i), chi.apply(w.basis_vector(i))));
    return LinearRelation(e, target, Subspace::span(e.dim() + target.dim(), rows));
}

}  // namespace detail

inline ReductionData make_reduction(const QuadraticSpace& e, const StructureTensor& g, const Matrix& r) {
    return detail::build_reduction(e, std::nullopt, g, r);
}

/// Same, with the bracket on E; ℜ must then be a Lie algebra morphism.
inline ReductionData make_reduction(const QuadraticLieAlgebra& e, const StructureTensor& g, const Matrix& r) {
    return detail::build_reduction(e.space(), e.structure(), g, r);
}

/// E = (g, form) × H^m as a quadratic Lie algebra, ℜ the inclusion of g.
inline ReductionData padded_reduction(const StructureTensor& g, const Matrix& form, std::size_t m = 1) {
    QuadraticLieAlgebra pad = hyperbolic_abelian(m);
    QuadraticLieAlgebra e(direct_sum(QuadraticSpace(form), pad.space()), direct_sum(g, pad.structure()));
    Matrix r(g.dim() + 2 * m, g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) r(i, i) = 1;
    return make_reduction(e, g, r);
}

/// g = so(3) × so(3) with Killing ⊕ (−Killing), padded by H^m.
inline ReductionData so3_pair_reduction(std::size_t m = 1) {
    Matrix kf = killing(so3_structure());
    return padded_reduction(direct_sum(so3_structure(), so3_structure()), block_diag(kf, Rational(-1) * kf), m);
}

/// E′ = K⊥/(K ∩ K⊥) and Q(ℜ) = {(e, χ(e)) : e ∈ K⊥}.
struct ReducedSpace {
    QuadraticSpace space;
    SubquotientMap chi;
    LinearRelation q;
};

inline ReducedSpace reduced_space(const ReductionData& d) {
    auto [space, chi] = detail::nondegenerate_quotient(d.e, d.kperp);
    LinearRelation q = detail::quotient_relation(d.e, space, chi);
    return {std::move(space), std::move(chi), std::move(q)};
}

/// Q(ℜ) is maximal iff (·,·)_g is semidefinite.
inline bool q_maximal(const ReductionData& d) { return d.induced_inertia.p == 0 || d.induced_inertia.q == 0; }

// Sub-reduction along a subalgebra h ⊆ g (nondegenerate (·,·)_g).
struct SubReduction {
    ReductionData base;
    Subspace h, hperp;
    Subspace k0, k0perp, k0prime;  // K′0 = ℜ(h⊥)
    ReducedSpace full;             // E′ and Q(ℜ)
    QuadraticSpace e0_prime;
    SubquotientMap chi0;  // K0⊥ -> E′0
    LinearRelation q0;    // Q(ℜ0): E -> E′0
    SubquotientMap q_map;  // h⊥ -> 𝔮 = h⊥/(h ∩ h⊥)
    Matrix psi0;  // K⊥ coordinates -> E′
    Matrix psi1;  // K⊥ coordinates ⊕ 𝔮 -> E′0
    LinearRelation rh;  // R(H): E′0 -> E′
    Inertia g_inertia, h_inertia;

    std::size_t q_dim() const { return q_map.target_dim(); }
    std::size_t kperp_dim() const { return base.kperp.dim(); }
};

inline SubReduction sub_reduce(const ReductionData& d, const Subspace& h) {
    if (h.ambient_dim() != d.g_dim()) throw DimensionMismatch("h does not live in g");
    if (!is_subalgebra(d.g, h)) throw PreconditionViolation("h is not a subalgebra of g");
    if (d.induced_inertia.k != 0) throw PreconditionViolation("the induced form on g is degenerate");
    SubReduction s;
    s.base = d;
    s.h = h;
    QuadraticSpace gs = d.g_form_space();
    s.hperp = orth_complement(gs, h);
    s.k0 = image(d.r_map, h);
    s.k0perp = orth_complement(d.e, s.k0);
    s.k0prime = image(d.r_map, s.hperp);
    s.full = reduced_space(d);
    auto [e0, chi0] = detail::nondegenerate_quotient(d.e, s.k0perp);
    s.e0_prime = std::move(e0);
    s.chi0 = std::move(chi0);
    s.q0 = detail::quotient_relation(d.e, s.e0_prime, s.chi0);
    s.q_map = SubquotientMap(s.hperp, meet(h, s.hperp));
    s.g_inertia = d.induced_inertia;
    s.h_inertia = inertia(gs, h);

    const std::size_t nk = d.kperp.dim(), nq = s.q_map.target_dim();
    s.psi0 = Matrix(s.full.space.dim(), nk);
    s.psi1 = Matrix(s.e0_prime.dim(), nk + nq);
    for (std::size_t i = 0; i < nk; ++i) {
        Vector b = d.kperp.basis_vector(i);
        Vector a = s.full.chi.apply(b), c = s.chi0.apply(b);
        for (std::size_t r = 0; r < a.size(); ++r) s.psi0(r, i) = a[r];
        for (std::size_t r = 0; r < c.size(); ++r) s.psi1(r, i) = c[r];
    }
    for (std::size_t j = 0; j < nq; ++j) {
        Vector x = s.q_map.lift(unit_vector(nq, j));
        Vector c = s.chi0.apply(d.r_map * x);
        for (std::size_t r = 0; r < c.size(); ++r) s.psi1(r, nk + j) = c[r];
    }
    // R(H) = {(Ψ1(ê, 0), Ψ0(ê))}
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < nk; ++i) rows.push_back(concat(s.psi1.col(i), s.psi0.col(i)));
    s.rh = LinearRelation(s.e0_prime, s.full.space, Subspace::span(s.e0_prime.dim() + s.full.space.dim(), rows));
    return s;
}

/// K0⊥ = K⊥ ⊕ K′0.
inline bool k0perp_decomposes(const SubReduction& s) {
    auto [m, j] = meet_join(s.base.kperp, s.k0prime);
    return m.is_zero() && j == s.k0perp;
}

/// k_h = min{p0 − p_h, q0 − q_h}
inline bool rh_maximal(const SubReduction& s) {
    return s.h_inertia.k == std::min(s.g_inertia.p - s.h_inertia.p, s.g_inertia.q - s.h_inertia.q);
}

struct QrComposition {
    LinearRelation composite;       // R(H) ∘ Q(ℜ0)
    Subspace radical_part;          // (K0 ∩ K0⊥) × 0
    bool direct_sum_identity = false;
    bool equals_q = false;
};

inline QrComposition compose_qr(const ReductionData& d, const SubReduction& s) {
    if (!(d.e == s.base.e) || !(d.r_map == s.base.r_map) || !(d.g == s.base.g))
        throw PreconditionViolation("sub-reduction was built from different reduction data");
    QrComposition out;
    out.composite = compose_relation(s.rh, s.q0);
    const Subspace& q = s.full.q.graph();
    Subspace rad = meet(s.k0, s.k0perp);
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < rad.dim(); ++i) rows.push_back(concat(rad.basis_vector(i), Vector(s.full.space.dim())));
    out.radical_part = Subspace::span(q.ambient_dim(), rows);
    auto [m, j] = meet_join(q, out.radical_part);
    out.direct_sum_identity = m.is_zero() && j == out.composite.graph();
    out.equals_q = out.composite.graph() == q;
    return out;
}

struct PlRelation {
    SubReduction first, second;
    LinearRelation relation;  // R(H′)ᵀ ∘ R(H): E′0 -> E′1
};

inline PlRelation pl_relation(const ReductionData& d, const Subspace& h, const Subspace& h2) {
    QuadraticSpace gs = d.g_form_space();
    for (const Subspace* x : {&h, &h2})
        if (x->ambient_dim() == d.g_dim() && !is_coisotropic(gs, *x))
            throw PreconditionViolation("subalgebra is not coisotropic for the induced form");
    SubReduction s0 = sub_reduce(d, h), s1 = sub_reduce(d, h2);
    LinearRelation r = compose_relation(transpose(s1.rh), s0.rh);
    return {std::move(s0), std::move(s1), std::move(r)};
}

/// Default generalized metric on the 𝔮-block: split involution of the form
/// induced through Ψ1.
inline Involution default_q_metric(const SubReduction& s) {
    const std::size_t nk = s.kperp_dim(), nq = s.q_dim();
    Matrix cols(s.e0_prime.dim(), nq);
    for (std::size_t j = 0; j < nq; ++j)
        for (std::size_t r = 0; r < cols.rows(); ++r) cols(r, j) = s.psi1(r, nk + j);
    return split_involution(QuadraticSpace(cols.transpose() * s.e0_prime.gram() * cols));
}

/// τ′0 = Ψ1 diag(Ψ0⁻¹ τ′ Ψ0, τ_𝔮) Ψ1⁻¹; the unique choice making R(H) an
/// isometry with the given 𝔮-block.
inline Involution metric_transport(const SubReduction& s, const Involution& tau_prime,
                                   const std::optional<Involution>& q_metric = std::nullopt) {
    if (tau_prime.tau().rows() != s.full.space.dim()) throw DimensionMismatch("tau' does not act on E'");
    Involution tq = q_metric ? *q_metric : default_q_metric(s);
    if (tq.tau().rows() != s.q_dim()) throw DimensionMismatch("q-block metric has the wrong size");
    Matrix t0 = inverse(s.psi0) * tau_prime.tau() * s.psi0;
    Matrix hat = block_diag(t0, tq.tau());
    return Involution(s.e0_prime, s.psi1 * hat * inverse(s.psi1));
}

/// Q(ℜ) as an isometry: τ′ = χ τ|K⊥ χ⁻¹. Needs K ∩ K⊥ = 0 and τ(K⊥) = K⊥.
inline Involution reduced_metric(const ReductionData& d, const Involution& tau) {
    if (!meet(d.k, d.kperp).is_zero())
        throw PreconditionViolation("Q(R) can be a generalized isometry only if K and its complement meet trivially");
    if (!(image(tau.tau(), d.kperp) == d.kperp)) throw PreconditionViolation("tau does not preserve the complement of K");
    ReducedSpace red = reduced_space(d);
    const std::size_t m = red.space.dim();
    Matrix out(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        Vector v = red.chi.apply(tau.tau() * red.chi.lift(unit_vector(m, j)));
        for (std::size_t i = 0; i < m; ++i) out(i, j) = v[i];
    }
    return Involution(red.space, out);
}

}  // namespace courant
