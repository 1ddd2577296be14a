#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "courant/linear_relation.hpp"

namespace courant {

/// Structure constants c[i][j][k] with [e_i, e_j] = Σ_k c[i][j][k] e_k.
class StructureTensor {
public:
    StructureTensor() = default;
    explicit StructureTensor(std::size_t n) : n_(n), c_(n * n * n) {}
    StructureTensor(std::size_t n, std::vector<Rational> coeffs) : n_(n), c_(std::move(coeffs)) {
        if (c_.size() != n_ * n_ * n_) throw DimensionMismatch("structure tensor needs dim^3 coefficients");
    }

    std::size_t dim() const { return n_; }
    Rational& operator()(std::size_t i, std::size_t j, std::size_t k) { return c_[(i * n_ + j) * n_ + k]; }
    const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * n_ + j) * n_ + k]; }
    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_abelian() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    Vector bracket(const Vector& x, const Vector& y) const {
        if (x.size() != n_ || y.size() != n_) throw DimensionMismatch("bracket arguments have wrong length");
        Vector out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (y[j] == 0) continue;
                Rational w = x[i] * y[j];
                for (std::size_t k = 0; k < n_; ++k)
                    if ((*this)(i, j, k) != 0) out[k] += w * (*this)(i, j, k);
            }
        }
        return out;
    }

    /// Matrix of ad_x = [x, ·].
    Matrix ad(const Vector& x) const {
        Matrix m(n_, n_);
        for (std::size_t j = 0; j < n_; ++j) {
            Vector col = bracket(x, unit_vector(n_, j));
            for (std::size_t k = 0; k < n_; ++k) m(k, j) = col[k];
        }
        return m;
    }

    friend bool operator==(const StructureTensor&, const StructureTensor&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Rational> c_;
};

inline StructureTensor direct_sum(const StructureTensor& a, const StructureTensor& b) {
    const std::size_t na = a.dim(), n = na + b.dim();
    StructureTensor c(n);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t k = 0; k < na; ++k) c(i, j, k) = a(i, j, k);
    for (std::size_t i = 0; i < b.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            for (std::size_t k = 0; k < b.dim(); ++k) c(na + i, na + j, na + k) = b(i, j, k);
    return c;
}

/// Structure constants of the subalgebra spanned by the rows of `basis`, in
/// that basis. Throws when the span is not closed under the bracket.
inline StructureTensor restrict_structure(const StructureTensor& c, const Matrix& basis) {
    const std::size_t m = basis.rows();
    StructureTensor out(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Vector b = c.bracket(basis.row(i), basis.row(j));
            Vector coeffs;
            if (!row_combination(basis, b, coeffs)) throw PreconditionViolation("span is not a subalgebra");
            for (std::size_t k = 0; k < m; ++k) out(i, j, k) = coeffs[k];
        }
    return out;
}

/// Structure constants in a new basis: new e'_i = Σ_j p(j, i) e_j (columns of p).
inline StructureTensor change_basis(const StructureTensor& c, const Matrix& p) {
    return restrict_structure(c, p.transpose());
}

/// The smallest subalgebra containing S.
inline Subspace generated_subalgebra(const StructureTensor& c, const Subspace& s) {
    Subspace cur = s;
    for (;;) {
        std::vector<Vector> rows = cur.basis_vectors();
        for (std::size_t i = 0; i < cur.dim(); ++i)
            for (std::size_t j = i + 1; j < cur.dim(); ++j) rows.push_back(c.bracket(cur.basis_vector(i), cur.basis_vector(j)));
        Subspace next = Subspace::span(c.dim(), rows);
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

inline Matrix killing(const StructureTensor& c) {
    const std::size_t n = c.dim();
    std::vector<Matrix> ads;
    for (std::size_t i = 0; i < n; ++i) ads.push_back(c.ad(unit_vector(n, i)));
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Rational tr = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) tr += ads[i](a, b) * ads[j](b, a);
            k(i, j) = k(j, i) = tr;
        }
    return k;
}

// ---------------------------------------------------------------------------
// axiom checks

enum class AxiomStatus { passed, failed, vacuous };

struct AxiomResult {
    std::string name;
    AxiomStatus status = AxiomStatus::passed;
    std::string detail;
    std::vector<std::size_t> witness;  // basis indices
    Vector residual;
};

struct AxiomReport {
    std::vector<AxiomResult> axioms;

    bool ok() const {
        for (const auto& a : axioms)
            if (a.status == AxiomStatus::failed) return false;
        return true;
    }
    const AxiomResult* first_failure() const {
        for (const auto& a : axioms)
            if (a.status == AxiomStatus::failed) return &a;
        return nullptr;
    }
};

/// Leibniz identity [x,[y,z]] = [[x,y],z] + [y,[x,z]] on basis triples.
inline AxiomResult check_jacobi(const StructureTensor& c) {
    const std::size_t n = c.dim();
    AxiomResult r{"C2", AxiomStatus::passed, "Leibniz identity on basis triples", {}, {}};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Vector x = unit_vector(n, i), y = unit_vector(n, j), z = unit_vector(n, k);
                Vector res = c.bracket(x, c.bracket(y, z)) - c.bracket(c.bracket(x, y), z) - c.bracket(y, c.bracket(x, z));
                if (!is_zero(res)) {
                    r.status = AxiomStatus::failed;
                    r.witness = {i, j, k};
                    r.residual = std::move(res);
                    return r;
                }
            }
    return r;
}

/// [x,x] = 0, checked as c_ijk + c_jik = 0.
inline AxiomResult check_antisymmetry(const StructureTensor& c) {
    const std::size_t n = c.dim();
    AxiomResult r{"C4", AxiomStatus::passed, "[x,x] = 0 (D = 0 over a point)", {}, {}};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Vector res(n);
            for (std::size_t k = 0; k < n; ++k) res[k] = c(i, j, k) + c(j, i, k);
            if (!is_zero(res)) {
                r.status = AxiomStatus::failed;
                r.witness = {i, j};
                r.residual = std::move(res);
                return r;
            }
        }
    return r;
}

/// <[x,y],z> + <y,[x,z]> = 0 on basis triples.
inline AxiomResult check_invariance(const StructureTensor& c, const Matrix& gram) {
    const std::size_t n = c.dim();
    AxiomResult r{"C3", AxiomStatus::passed, "ad-invariance of the pairing", {}, {}};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Vector x = unit_vector(n, i), y = unit_vector(n, j), z = unit_vector(n, k);
                Rational v = bilinear(c.bracket(x, y), gram, z) + bilinear(y, gram, c.bracket(x, z));
                if (v != 0) {
                    r.status = AxiomStatus::failed;
                    r.witness = {i, j, k};
                    r.residual = {v};
                    return r;
                }
            }
    return r;
}

inline AxiomReport validate_qla(const StructureTensor& c, const Matrix& gram) {
    if (gram.rows() != c.dim() || gram.cols() != c.dim()) throw DimensionMismatch("gram and structure tensor disagree");
    AxiomReport rep;
    rep.axioms.push_back({"C1", AxiomStatus::vacuous, "anchor is zero over a point", {}, {}});
    rep.axioms.push_back(check_jacobi(c));
    rep.axioms.push_back(check_invariance(c, gram));
    rep.axioms.push_back(check_antisymmetry(c));
    return rep;
}

// ---------------------------------------------------------------------------

struct Unchecked {};

/// A quadratic Lie algebra: a Courant algebroid over a point.
class QuadraticLieAlgebra {
public:
    QuadraticLieAlgebra() = default;
    QuadraticLieAlgebra(QuadraticSpace space, StructureTensor c) : space_(std::move(space)), c_(std::move(c)) {
        auto rep = validate_qla(c_, space_.gram());
        if (const auto* f = rep.first_failure()) throw InvalidObject("axiom " + f->name + " fails: " + f->detail);
    }
    QuadraticLieAlgebra(QuadraticSpace space, StructureTensor c, Unchecked) : space_(std::move(space)), c_(std::move(c)) {
        if (c_.dim() != space_.dim()) throw DimensionMismatch("gram and structure tensor disagree");
    }

    std::size_t dim() const { return space_.dim(); }
    const QuadraticSpace& space() const { return space_; }
    const Matrix& gram() const { return space_.gram(); }
    const StructureTensor& structure() const { return c_; }
    Vector bracket(const Vector& x, const Vector& y) const { return c_.bracket(x, y); }
    Rational pair(const Vector& x, const Vector& y) const { return space_.pair(x, y); }
    AxiomReport validate() const { return validate_qla(c_, space_.gram()); }

    QuadraticLieAlgebra bar() const { return QuadraticLieAlgebra(space_.bar(), c_, Unchecked{}); }

    friend bool operator==(const QuadraticLieAlgebra& a, const QuadraticLieAlgebra& b) {
        return a.space_ == b.space_ && a.c_ == b.c_;
    }

private:
    QuadraticSpace space_;
    StructureTensor c_;
};

/// E1 × E2 with componentwise bracket and pairing G1 ⊕ (±G2).
inline QuadraticLieAlgebra product(const QuadraticLieAlgebra& a, const QuadraticLieAlgebra& b, bool flip_second) {
    QuadraticSpace s = direct_sum(a.space(), flip_second ? b.space().bar() : b.space());
    return QuadraticLieAlgebra(std::move(s), direct_sum(a.structure(), b.structure()), Unchecked{});
}

// ---------------------------------------------------------------------------
// builders

/// so(3): [e_i, e_j] = ε_ijk e_k with its Killing form −2·I.
inline StructureTensor so3_structure() {
    StructureTensor c(3);
    c(0, 1, 2) = 1, c(1, 2, 0) = 1, c(2, 0, 1) = 1;
    c(1, 0, 2) = -1, c(2, 1, 0) = -1, c(0, 2, 1) = -1;
    return c;
}

inline QuadraticLieAlgebra so3() { return QuadraticLieAlgebra(QuadraticSpace(killing(so3_structure())), so3_structure()); }

/// Index pairs (a, b), a < b, of the basis L_ab = E_ab − E_ba of so(n).
inline std::vector<std::pair<std::size_t, std::size_t>> so_basis_pairs(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) out.emplace_back(a, b);
    return out;
}

/// so(n) in the basis L_ab (a < b, lexicographic), from matrix commutators.
inline StructureTensor so_structure(std::size_t n) {
    auto pairs = so_basis_pairs(n);
    const std::size_t d = pairs.size();
    auto gen = [&](std::size_t idx) {
        Matrix m(n, n);
        m(pairs[idx].first, pairs[idx].second) = 1;
        m(pairs[idx].second, pairs[idx].first) = -1;
        return m;
    };
    StructureTensor c(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Matrix x = gen(i), y = gen(j);
            Matrix comm = x * y - y * x;
            for (std::size_t k = 0; k < d; ++k) c(i, j, k) = comm(pairs[k].first, pairs[k].second);
        }
    return c;
}

/// so(4) with its Killing form (−4·I in the L_ab basis).
inline QuadraticLieAlgebra so4() {
    StructureTensor c = so_structure(4);
    return QuadraticLieAlgebra(QuadraticSpace(killing(c)), c);
}

/// Abelian algebra of dimension n with the identity pairing.
inline QuadraticLieAlgebra abelian(std::size_t n) {
    return QuadraticLieAlgebra(QuadraticSpace(Matrix::identity(n)), StructureTensor(n));
}

/// Abelian algebra on the hyperbolic space H^m (dimension 2m).
inline QuadraticLieAlgebra hyperbolic_abelian(std::size_t m) {
    return QuadraticLieAlgebra(QuadraticSpace::hyperbolic(m), StructureTensor(2 * m));
}

/// The inclusion so(3) -> so(4) onto the rotations fixing the fourth axis:
/// e1 = L_23, e2 = L_31, e3 = L_21 (1-based axes), in the so(4) basis above.
inline Matrix so3_in_so4() {
    auto pairs = so_basis_pairs(4);
    auto index = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (pairs[i] == std::make_pair(a, b)) return i;
        throw Error("no such generator");
    };
    Matrix f(6, 3);
    f(index(1, 2), 0) = 1;   // L_23
    f(index(0, 2), 1) = -1;  // L_31 = −L_13
    f(index(0, 1), 2) = -1;  // L_21 = −L_12
    return f;
}

/// Columns J+_1..3, J−_1..3 with J±_i = ½(e_i ± s_i L_i4), s = (1, 1, −1), where
/// e_i is the image of so(3) above. Each triple satisfies the so(3) relations
/// and the two triples commute.
inline Matrix so4_split_basis() {
    Matrix e = so3_in_so4();
    const std::size_t l4[3] = {2, 4, 5};  // L_14, L_24, L_34
    const int s[3] = {1, 1, -1};
    Matrix p(6, 6);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t r = 0; r < 6; ++r) {
            p(r, i) = e(r, i) / 2;
            p(r, 3 + i) = e(r, i) / 2;
        }
        p(l4[i], i) += Rational(s[i], 2);
        p(l4[i], 3 + i) -= Rational(s[i], 2);
    }
    return p;
}

// ---------------------------------------------------------------------------
// subalgebras, involutive structures, relations

inline void require_ambient(const StructureTensor& c, const Subspace& w) {
    if (w.ambient_dim() != c.dim()) throw DimensionMismatch("subspace does not live in the algebra");
}

struct BracketWitness {
    Vector x, y, bracket;
};

/// A pair of basis vectors of W whose bracket leaves W, if any.
inline std::optional<BracketWitness> closure_failure(const StructureTensor& c, const Subspace& w) {
    require_ambient(c, w);
    for (std::size_t i = 0; i < w.dim(); ++i)
        for (std::size_t j = 0; j < w.dim(); ++j) {
            Vector b = c.bracket(w.basis_vector(i), w.basis_vector(j));
            if (!w.contains(b)) return BracketWitness{w.basis_vector(i), w.basis_vector(j), b};
        }
    return std::nullopt;
}

inline bool is_subalgebra(const StructureTensor& c, const Subspace& w) { return !closure_failure(c, w); }

/// {v : [w, v] = 0 for every w ∈ W}.
inline Subspace centralizer(const StructureTensor& c, const Subspace& w) {
    require_ambient(c, w);
    const std::size_t n = c.dim();
    Matrix stacked(0, n);
    for (std::size_t i = 0; i < w.dim(); ++i) stacked = vstack(stacked, c.ad(w.basis_vector(i)));
    return kernel(stacked);
}

/// {w ∈ W : [x, w] = 0 for every x ∈ h}: the ad-invariants of h inside W.
inline Subspace invariants(const StructureTensor& c, const Subspace& h, const Subspace& w) {
    require_ambient(c, h);
    return meet(centralizer(c, h), w);
}

struct InvolutiveCheck {
    bool isotropic = false;
    bool closed = false;
    bool involutive = false;
    bool dirac = false;
    std::optional<BracketWitness> bracket_witness;
    std::optional<std::pair<Vector, Vector>> isotropy_witness;
};

/// Over a point: L is involutive iff it is isotropic and [L, L] ⊆ L.
inline InvolutiveCheck involutive_structure_check(const QuadraticLieAlgebra& e, const Subspace& l) {
    require_ambient(e.space(), l);
    InvolutiveCheck r;
    const Matrix g = restricted_gram(e.space(), l);
    r.isotropic = true;
    for (std::size_t i = 0; i < g.rows() && r.isotropic; ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            if (g(i, j) != 0) {
                r.isotropic = false;
                r.isotropy_witness = std::make_pair(l.basis_vector(i), l.basis_vector(j));
                break;
            }
    r.bracket_witness = closure_failure(e.structure(), l);
    r.closed = !r.bracket_witness;
    r.involutive = r.isotropic && r.closed;
    r.dirac = r.involutive && classify(e.space(), l).maximal_isotropic;
    return r;
}

struct RelationCheck {
    bool ok = false;
    std::optional<BracketWitness> witness;
};

/// graph(R) is a subalgebra of E1 × Ē2 (isotropy is guaranteed by LinearRelation).
inline RelationCheck ca_relation_check(const QuadraticLieAlgebra& e1, const QuadraticLieAlgebra& e2,
                                       const LinearRelation& r) {
    if (!(r.source() == e1.space()) || !(r.target() == e2.space()))
        throw DimensionMismatch("relation spaces do not match the algebras");
    QuadraticLieAlgebra prod = product(e1, e2, true);
    RelationCheck out;
    out.witness = closure_failure(prod.structure(), r.graph());
    out.ok = !out.witness;
    return out;
}

/// A linear map F: E1 -> E2 (column convention, dim E2 × dim E1).
struct LieMap {
    Matrix f;
};

struct MorphismCheck {
    bool preserves_pairing = false;
    bool preserves_bracket = false;
    bool ok() const { return preserves_pairing && preserves_bracket; }
    std::optional<std::pair<std::size_t, std::size_t>> witness;  // basis indices of a failing pair
};

inline MorphismCheck classical_morphism_check(const QuadraticLieAlgebra& e1, const QuadraticLieAlgebra& e2,
                                              const LieMap& map) {
    const Matrix& f = map.f;
    if (f.rows() != e2.dim() || f.cols() != e1.dim()) throw DimensionMismatch("map shape does not match the algebras");
    MorphismCheck r;
    r.preserves_pairing = f.transpose() * e2.gram() * f == e1.gram();
    r.preserves_bracket = true;
    const std::size_t n = e1.dim();
    for (std::size_t i = 0; i < n && r.preserves_bracket; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Vector x = unit_vector(n, i), y = unit_vector(n, j);
            if (f * e1.bracket(x, y) != e2.bracket(f * x, f * y)) {
                r.preserves_bracket = false;
                r.witness = std::make_pair(i, j);
                break;
            }
        }
    if (!r.preserves_pairing && !r.witness) {
        Matrix diff = f.transpose() * e2.gram() * f - e1.gram();
        for (std::size_t i = 0; i < n && !r.witness; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (diff(i, j) != 0) {
                    r.witness = std::make_pair(i, j);
                    break;
                }
    }
    return r;
}

}  // namespace courant
