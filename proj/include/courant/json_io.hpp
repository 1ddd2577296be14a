#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "courant/connection.hpp"
#include "courant/dorfman.hpp"
#include "courant/reduction.hpp"

namespace courant {

using Json = nlohmann::ordered_json;

/// Malformed or invalid input, located by a JSON pointer into the document.
class SchemaError : public Error {
public:
    SchemaError(std::string pointer, const std::string& message)
        : Error(pointer + ": " + message), pointer_(std::move(pointer)), message_(message) {}
    const std::string& pointer() const { return pointer_; }
    const std::string& message() const { return message_; }

private:
    std::string pointer_;
    std::string message_;
};

using Value = std::variant<QuadraticSpace, Subspace, LinearRelation, CovariantTensor, StructureTensor,
                           QuadraticLieAlgebra, Matrix, Involution, LieMap, Connection, DorfmanDouble, ReductionData,
                           SubReduction, PerturbationData>;

inline const char* type_name(const Value& v) {
    static const char* names[] = {"space",  "subspace",   "relation", "tensor",     "lie",       "qla",       "matrix",
                                  "involution", "liemap", "connection", "double", "reduction", "subreduction",
                                  "perturbation"};
    return names[v.index()];
}

inline std::string child(const std::string& ptr, const std::string& key) {
    std::string k;
    for (char ch : key) {
        if (ch == '~') k += "~0";
        else if (ch == '/') k += "~1";
        else k += ch;
    }
    return ptr + "/" + k;
}
inline std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

// ---------------------------------------------------------------------------
// encoding

inline Json to_json(const Rational& r) { return to_string(r); }

inline Json to_json(const Vector& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

inline Json to_json(const Matrix& m) {
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
    return a;
}

inline Json to_json(const QuadraticSpace& s) { return Json{{"dim", s.dim()}, {"gram", to_json(s.gram())}}; }

inline Json to_json(const Subspace& s) { return Json{{"ambient", s.ambient_dim()}, {"basis", to_json(s.basis())}}; }

inline Json to_json(const Inertia& in) { return Json{{"p", in.p}, {"q", in.q}, {"k", in.k}}; }

inline Json to_json(const ClassificationFlags& f) {
    return Json{{"isotropic", f.isotropic},
                {"coisotropic", f.coisotropic},
                {"maximal_isotropic", f.maximal_isotropic},
                {"lagrangian", f.lagrangian},
                {"positive_definite", f.positive_definite},
                {"negative_definite", f.negative_definite},
                {"nondegenerate", f.nondegenerate}};
}

inline Json to_json(const LinearRelation& r) {
    return Json{{"source", to_json(r.source())}, {"target", to_json(r.target())}, {"span", to_json(r.graph().basis())}};
}

namespace detail {
inline Json nested(const std::vector<Rational>& c, std::size_t dim, std::size_t order, std::size_t& pos) {
    Json a = Json::array();
    if (order == 1) {
        for (std::size_t i = 0; i < dim; ++i) a.push_back(to_json(c[pos++]));
        return a;
    }
    for (std::size_t i = 0; i < dim; ++i) a.push_back(nested(c, dim, order - 1, pos));
    return a;
}
inline Json nested(const std::vector<Rational>& c, std::size_t dim, std::size_t order) {
    if (order == 0) return to_json(c.at(0));
    std::size_t pos = 0;
    return nested(c, dim, order, pos);
}
}  // namespace detail

inline Json to_json(const CovariantTensor& t) {
    return Json{{"order", t.order()}, {"dim", t.dim()}, {"values", detail::nested(t.coeffs(), t.dim(), t.order())}};
}

inline Json to_json(const StructureTensor& c) {
    return Json{{"dim", c.dim()}, {"c", detail::nested(c.coeffs(), c.dim(), 3)}};
}

inline Json to_json(const QuadraticLieAlgebra& e) {
    return Json{{"space", to_json(e.space())}, {"c", detail::nested(e.structure().coeffs(), e.dim(), 3)}};
}

inline Json to_json(const Involution& t) { return Json{{"dim", t.tau().rows()}, {"tau", to_json(t.tau())}}; }

/// Images of the basis vectors, one per row.
inline Json to_json(const LieMap& f) { return Json{{"images", to_json(f.f.transpose())}}; }

inline Json to_json(const Connection& c) {
    return Json{{"algebra", to_json(c.algebra())}, {"gamma", detail::nested(c.coeffs(), c.dim(), 3)}};
}

inline Json to_json(const DorfmanDouble& d) { return Json{{"base", to_json(d.base)}, {"algebra", to_json(d.algebra)}}; }

inline Json to_json(const ReductionData& d) {
    Json j{{"E", to_json(d.e)}, {"g", to_json(d.g)}, {"images", to_json(d.r_map.transpose())}};
    if (d.e_bracket) j["E_c"] = detail::nested(d.e_bracket->coeffs(), d.e.dim(), 3);
    j["K"] = to_json(d.k);
    j["Kperp"] = to_json(d.kperp);
    j["induced_form"] = to_json(d.induced_form);
    j["induced_inertia"] = to_json(d.induced_inertia);
    return j;
}

inline Json to_json(const SubReduction& s) {
    return Json{{"h", to_json(s.h)},
                {"hperp", to_json(s.hperp)},
                {"E_prime", to_json(s.full.space)},
                {"E0_prime", to_json(s.e0_prime)},
                {"Q", to_json(s.full.q)},
                {"Q0", to_json(s.q0)},
                {"R_H", to_json(s.rh)},
                {"g_inertia", to_json(s.g_inertia)},
                {"h_inertia", to_json(s.h_inertia)}};
}

inline Json to_json(const PerturbationData& p) {
    std::size_t dh = p.h_dim(), dp = p.hperp_dim();
    Json k = Json::array();
    for (std::size_t a = 0; a < dh; ++a) {
        Json ra = Json::array();
        for (std::size_t b = 0; b < dh; ++b) {
            Json rb = Json::array();
            for (std::size_t c = 0; c < dp; ++c) rb.push_back(to_json(p.k0[(a * dh + b) * dp + c]));
            ra.push_back(rb);
        }
        k.push_back(ra);
    }
    return Json{{"h_basis", to_json(p.h_basis)}, {"hperp_basis", to_json(p.hperp_basis)}, {"k0", k}};
}

inline Json to_json(const Value& v) {
    Json j = std::visit([](const auto& x) { return to_json(x); }, v);
    Json out{{"type", type_name(v)}};
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value();
    return out;
}

// ---------------------------------------------------------------------------
// decoding

/// Decodes model objects from JSON. String values are references, resolved
/// first through `lookup` and then against the built-in presets.
class Decoder {
public:
    using Lookup = std::function<const Value*(const std::string&)>;

    explicit Decoder(std::size_t max_dim = 64, Lookup lookup = {}) : max_dim_(max_dim), lookup_(std::move(lookup)) {}

    std::size_t max_dim() const { return max_dim_; }

    Rational rational(const Json& j, const std::string& ptr) const {
        if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()), 10);
        if (!j.is_string()) throw SchemaError(ptr, "expected a rational as a string \"p/q\" or an integer");
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw SchemaError(ptr, e.what());
        }
    }

    std::size_t count(const Json& j, const std::string& ptr) const {
        if (!j.is_number_unsigned()) throw SchemaError(ptr, "expected a non-negative integer");
        return j.get<std::size_t>();
    }

    Vector vector(const Json& j, const std::string& ptr, std::optional<std::size_t> len = std::nullopt) const {
        if (!j.is_array()) throw SchemaError(ptr, "expected an array of rationals");
        if (len && j.size() != *len)
            throw SchemaError(ptr, "expected " + std::to_string(*len) + " entries, found " + std::to_string(j.size()));
        Vector v;
        for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational(j[i], child(ptr, i)));
        return v;
    }

    /// Rows of rationals; `cols` fixes the width (needed for empty matrices).
    Matrix matrix(const Json& j, const std::string& ptr, std::optional<std::size_t> cols = std::nullopt) const {
        if (!j.is_array()) throw SchemaError(ptr, "expected an array of rows");
        std::vector<Vector> rows;
        for (std::size_t i = 0; i < j.size(); ++i) {
            std::optional<std::size_t> w;
            if (cols) w = *cols;
            else if (!rows.empty()) w = rows[0].size();
            rows.push_back(vector(j[i], child(ptr, i), w));
        }
        std::size_t c = cols ? *cols : (rows.empty() ? 0 : rows[0].size());
        check_dim(c, ptr);
        check_dim(rows.size(), ptr);
        return Matrix::from_rows(rows, c);
    }

    /// A matrix, or a reference to a stored one.
    Matrix matrix_ref(const Json& j, const std::string& ptr, std::optional<std::size_t> cols = std::nullopt) const {
        if (!j.is_string()) return matrix(j, ptr, cols);
        Value v = resolve(j, ptr);
        if (const auto* m = std::get_if<Matrix>(&v)) {
            if (cols && m->cols() != *cols) throw SchemaError(ptr, "matrix has the wrong number of columns");
            return *m;
        }
        throw SchemaError(ptr, std::string("reference has type '") + type_name(v) + "', expected a matrix");
    }

    QuadraticSpace space(const Json& j, const std::string& ptr) const {
        if (j.is_string()) return as<QuadraticSpace>(resolve(j, ptr), ptr);
        require_object(j, ptr);
        const Json& g = field(j, ptr, "gram");
        std::optional<std::size_t> n;
        if (j.contains("dim")) n = count(j["dim"], child(ptr, "dim"));
        Matrix m = matrix(g, child(ptr, "gram"), n);
        if (n && m.rows() != *n) throw SchemaError(child(ptr, "gram"), "gram has " + std::to_string(m.rows()) + " rows, dim is " + std::to_string(*n));
        if (!m.is_square()) throw SchemaError(child(ptr, "gram"), "gram is not square");
        for (std::size_t a = 0; a < m.rows(); ++a)
            for (std::size_t b = a + 1; b < m.cols(); ++b)
                if (m(a, b) != m(b, a))
                    throw SchemaError(child(child(child(ptr, "gram"), a), b),
                                      "gram is not symmetric: entry differs from /" + std::to_string(b) + "/" +
                                          std::to_string(a));
        return wrap(ptr, [&] { return QuadraticSpace(m); });
    }

    Subspace subspace(const Json& j, const std::string& ptr) const {
        if (j.is_string()) return as<Subspace>(resolve(j, ptr), ptr);
        require_object(j, ptr);
        std::size_t n = count(field(j, ptr, "ambient"), child(ptr, "ambient"));
        check_dim(n, child(ptr, "ambient"));
        Matrix b = matrix(field(j, ptr, "basis"), child(ptr, "basis"), n);
        return Subspace::span(n, b);
    }

    LinearRelation relation(const Json& j, const std::string& ptr) const {
        if (j.is_string()) return as<LinearRelation>(resolve(j, ptr), ptr);
        require_object(j, ptr);
        QuadraticSpace s = space(field(j, ptr, "source"), child(ptr, "source"));
        QuadraticSpace t = space(field(j, ptr, "target"), child(ptr, "target"));
        Matrix span = matrix(field(j, ptr, "span"), child(ptr, "span"), s.dim() + t.dim());
        return wrap(child(ptr, "span"), [&] { return LinearRelation::from_span(s, t, span); });
    }

    CovariantTensor tensor(const Json& j, const std::string& ptr) const {
        if (j.is_string()) return as<CovariantTensor>(resolve(j, ptr), ptr);
        require_object(j, ptr);
        std::size_t order = count(field(j, ptr, "order"), child(ptr, "order"));
        std::size_t dim = count(field(j, ptr, "dim"), child(ptr, "dim"));
        check_dim(dim, child(ptr, "dim"));
        if (order > 8) throw SchemaError(child(ptr, "order"), "tensor order above 8 is not supported");
        std::vector<Rational> c;
        nested(field(j, ptr, "values"), child(ptr, "values"), dim, order, c);
        return CovariantTensor(dim, order, std::move(c));
    }

    /// {"c": 3-d array} or {"dim": n} for the abelian algebra, or a preset.
    StructureTensor lie(const Json& j, const std::string& ptr) const {
        if (j.is_string()) return as<StructureTensor>(resolve(j, ptr), ptr);
        require_object(j, ptr);
        if (!j.contains("c")) {
            std::size_t n = count(field(j, ptr, "dim"), child(ptr, "dim"));
            check_dim(n, child(ptr, "dim"));
            return StructureTensor(n);
        }
        std::size_t n = j.contains("dim") ? count(j["dim"], child(ptr, "dim")) : j["c"].size();
        check_dim(n, child(ptr, "c"));
        std::vector<Rational> c;
        nested(j["c"], child(ptr, "c"), n, 3, c);
        return StructureTensor(n, std::move(c));
    }

    /// Checked unless `checked` is false (then only shapes are verified).
    QuadraticLieAlgebra qla(const Json& j, const std::string& ptr, bool checked = true) const {
        if (j.is_string()) return as<QuadraticLieAlgebra>(resolve(j, ptr), ptr);
        require_object(j, ptr);
        QuadraticSpace s = space(field(j, ptr, "space"), child(ptr, "space"));
        StructureTensor t;
        if (field(j, ptr, "c").is_string()) {
            t = lie(j["c"], child(ptr, "c"));
            if (t.dim() != s.dim()) throw SchemaError(child(ptr, "c"), "structure tensor and space differ in dimension");
        } else {
            std::vector<Rational> c;
            nested(j["c"], child(ptr, "c"), s.dim(), 3, c);
            t = StructureTensor(s.dim(), std::move(c));
        }
        if (!checked) return QuadraticLieAlgebra(s, t, Unchecked{});
        return wrap(ptr, [&] { return QuadraticLieAlgebra(s, t); });
    }

    Involution involution(const Json& j, const std::string& ptr, const QuadraticSpace& v) const {
        if (j.is_string()) {
            Involution t = as<Involution>(resolve(j, ptr), ptr);
            return wrap(ptr, [&] { return Involution(v, t.tau()); });
        }
        require_object(j, ptr);
        Matrix t = matrix_ref(field(j, ptr, "tau"), child(ptr, "tau"), v.dim());
        return wrap(child(ptr, "tau"), [&] { return Involution(v, t); });
    }

    LieMap liemap(const Json& j, const std::string& ptr, std::size_t source_dim, std::size_t target_dim) const {
        if (j.is_string()) return as<LieMap>(resolve(j, ptr), ptr);
        require_object(j, ptr);
        Matrix images = matrix(field(j, ptr, "images"), child(ptr, "images"), target_dim);
        if (images.rows() != source_dim)
            throw SchemaError(child(ptr, "images"), "expected one image per basis vector of the source");
        return {images.transpose()};
    }

    Connection connection(const Json& j, const std::string& ptr) const {
        if (j.is_string()) return as<Connection>(resolve(j, ptr), ptr);
        require_object(j, ptr);
        QuadraticLieAlgebra e = qla(field(j, ptr, "algebra"), child(ptr, "algebra"));
        const Json& g = field(j, ptr, "gamma");
        if (g.is_string()) {
            std::string k = g.get<std::string>();
            if (k == "adjoint") return Connection::adjoint(e);
            if (k == "zero") return Connection::zero(e);
            throw SchemaError(child(ptr, "gamma"), "expected \"adjoint\", \"zero\" or a 3-d array");
        }
        std::vector<Rational> c;
        nested(g, child(ptr, "gamma"), e.dim(), 3, c);
        return wrap(child(ptr, "gamma"), [&] { return Connection(e, std::move(c)); });
    }

    /// A double given by reference, or Df of a Lie algebra.
    DorfmanDouble dorfman(const Json& j, const std::string& ptr) const {
        if (j.is_string()) {
            const Value v = resolve(j, ptr);
            if (const auto* d = std::get_if<DorfmanDouble>(&v)) return *d;
            StructureTensor c = as<StructureTensor>(v, ptr);
            return wrap(ptr, [&] { return df(c); });
        }
        StructureTensor c = lie(j, ptr);
        return wrap(ptr, [&] { return df(c); });
    }

    /// {"E": qla|space, "g": lie, "images": rows ℜ(e_i)} or
    /// {"padded": {"g": lie, "form": matrix, "m": count}}.
    ReductionData reduction(const Json& j, const std::string& ptr) const {
        if (j.is_string()) return as<ReductionData>(resolve(j, ptr), ptr);
        require_object(j, ptr);
        if (j.contains("padded")) {
            const Json& p = j["padded"];
            std::string pp = child(ptr, "padded");
            require_object(p, pp);
            StructureTensor g = lie(field(p, pp, "g"), child(pp, "g"));
            Matrix form = matrix_ref(field(p, pp, "form"), child(pp, "form"), g.dim());
            std::size_t m = p.contains("m") ? count(p["m"], child(pp, "m")) : 1;
            return wrap(pp, [&] { return padded_reduction(g, form, m); });
        }
        StructureTensor g = lie(field(j, ptr, "g"), child(ptr, "g"));
        const Json& ej = field(j, ptr, "E");
        std::optional<QuadraticLieAlgebra> eq;
        std::optional<QuadraticSpace> es;
        if (ej.is_string()) {
            Value v = resolve(ej, child(ptr, "E"));
            if (const auto* q = std::get_if<QuadraticLieAlgebra>(&v)) eq = *q;
            else if (const auto* d = std::get_if<DorfmanDouble>(&v)) eq = d->algebra;
            else es = as<QuadraticSpace>(v, child(ptr, "E"));
        } else if (ej.is_object() && ej.contains("c")) {
            eq = qla(ej, child(ptr, "E"));
        } else {
            es = space(ej, child(ptr, "E"));
        }
        std::size_t ne = eq ? eq->dim() : es->dim();
        Matrix images = matrix(field(j, ptr, "images"), child(ptr, "images"), ne);
        if (images.rows() != g.dim())
            throw SchemaError(child(ptr, "images"), "expected one image per basis vector of g");
        Matrix r = images.transpose();
        if (eq) return wrap(ptr, [&] { return make_reduction(*eq, g, r); });
        return wrap(ptr, [&] { return make_reduction(*es, g, r); });
    }

    PerturbationData perturbation(const Json& j, const std::string& ptr, std::size_t ambient) const {
        if (j.is_string()) return as<PerturbationData>(resolve(j, ptr), ptr);
        require_object(j, ptr);
        PerturbationData p;
        p.h_basis = matrix(field(j, ptr, "h_basis"), child(ptr, "h_basis"), ambient);
        p.hperp_basis = matrix(field(j, ptr, "hperp_basis"), child(ptr, "hperp_basis"), ambient);
        const std::size_t dh = p.h_dim(), dp = p.hperp_dim();
        const Json& k = field(j, ptr, "k0");
        std::string kp = child(ptr, "k0");
        p.k0.assign(dh * dh * dp, Rational(0));
        if (!k.is_array() || k.size() != dh) throw SchemaError(kp, "k0 must be a dim h x dim h x dim h-perp array");
        for (std::size_t a = 0; a < dh; ++a) {
            if (!k[a].is_array() || k[a].size() != dh) throw SchemaError(child(kp, a), "expected dim h entries");
            for (std::size_t b = 0; b < dh; ++b) {
                Vector v = vector(k[a][b], child(child(kp, a), b), dp);
                for (std::size_t c = 0; c < dp; ++c) p.k0[(a * dh + b) * dp + c] = v[c];
            }
        }
        return p;
    }

    /// An object with a "type" field.
    Value object(const Json& j, const std::string& ptr) const {
        if (j.is_string()) return resolve(j, ptr);
        require_object(j, ptr);
        const Json& t = field(j, ptr, "type");
        if (!t.is_string()) throw SchemaError(child(ptr, "type"), "expected a type name");
        const std::string type = t.get<std::string>();
        if (type == "space") return space(j, ptr);
        if (type == "subspace") return subspace(j, ptr);
        if (type == "relation") return relation(j, ptr);
        if (type == "tensor") return tensor(j, ptr);
        if (type == "lie") return lie(j, ptr);
        if (type == "qla") return qla(j, ptr);
        if (type == "matrix") {
            std::optional<std::size_t> cols;
            if (j.contains("cols")) cols = count(j["cols"], child(ptr, "cols"));
            return matrix(field(j, ptr, "rows"), child(ptr, "rows"), cols);
        }
        if (type == "involution") {
            QuadraticSpace v = space(field(j, ptr, "space"), child(ptr, "space"));
            return involution(j, ptr, v);
        }
        if (type == "liemap") {
            std::size_t s = count(field(j, ptr, "source_dim"), child(ptr, "source_dim"));
            std::size_t d = count(field(j, ptr, "target_dim"), child(ptr, "target_dim"));
            return liemap(j, ptr, s, d);
        }
        if (type == "connection") return connection(j, ptr);
        if (type == "double") return dorfman(field(j, ptr, "base"), child(ptr, "base"));
        if (type == "reduction") return reduction(j, ptr);
        if (type == "perturbation") {
            std::size_t n = count(field(j, ptr, "ambient"), child(ptr, "ambient"));
            return perturbation(j, ptr, n);
        }
        throw SchemaError(child(ptr, "type"), "unknown object type '" + type + "'");
    }

    /// Resolves a reference: named objects first, then presets.
    /// "name#field" selects a part of a compound object (a sub-reduction's R_H, ...).
    Value resolve(const Json& j, const std::string& ptr) const {
        const std::string full = j.get<std::string>();
        const auto hash = full.find('#');
        if (hash != std::string::npos) {
            Value base = resolve(Json(full.substr(0, hash)), ptr);
            return part(base, full.substr(hash + 1), ptr);
        }
        const std::string& name = full;
        if (lookup_)
            if (const Value* v = lookup_(name)) return *v;
        std::optional<Value> p;
        try {
            p = preset(name);
        } catch (const SchemaError& e) {
            throw SchemaError(ptr, e.message());
        }
        if (p) return *p;
        throw SchemaError(ptr, "unresolved reference '" + name + "'");
    }

    /// so3, so4, abelian:n, hyperbolic:n, so3-pair, so3-in-so4, so4-perturbation:s.
    std::optional<Value> preset(const std::string& name) const {
        auto suffix = [&](const std::string& prefix) -> std::optional<std::string> {
            if (name.rfind(prefix, 0) == 0) return name.substr(prefix.size());
            return std::nullopt;
        };
        auto small = [&](const std::string& s) -> std::size_t {
            if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 6)
                throw SchemaError("", "malformed preset dimension in '" + name + "'");
            std::size_t n = std::stoul(s);
            check_dim(n, "");
            return n;
        };
        if (name == "so3") return Value(so3());
        if (name == "so4") return Value(so4());
        if (name == "so3-in-so4") return Value(so3_in_so4_source());
        if (name == "so3-pair") return Value(so3_pair_reduction());
        if (auto s = suffix("abelian:")) return Value(abelian(small(*s)));
        if (auto s = suffix("hyperbolic:")) {
            std::size_t m = small(*s);
            check_dim(2 * m, "");
            return Value(hyperbolic_abelian(m));
        }
        if (auto s = suffix("so4-perturbation:")) {
            try {
                return Value(so4_perturbation(parse_rational(*s)));
            } catch (const std::invalid_argument& e) {
                throw SchemaError("", e.what());
            }
        }
        return std::nullopt;
    }

    static Value part(const Value& v, const std::string& field, const std::string& ptr) {
        if (const auto* s = std::get_if<SubReduction>(&v)) {
            if (field == "R_H") return s->rh;
            if (field == "Q0") return s->q0;
            if (field == "Q") return s->full.q;
            if (field == "E_prime") return s->full.space;
            if (field == "E0_prime") return s->e0_prime;
            if (field == "h") return s->h;
            if (field == "hperp") return s->hperp;
        } else if (const auto* d = std::get_if<ReductionData>(&v)) {
            if (field == "E") return d->e;
            if (field == "g") return d->g;
            if (field == "K") return d->k;
            if (field == "Kperp") return d->kperp;
        } else if (const auto* d = std::get_if<DorfmanDouble>(&v)) {
            if (field == "algebra") return d->algebra;
            if (field == "base") return d->base;
        } else if (const auto* q = std::get_if<QuadraticLieAlgebra>(&v)) {
            if (field == "space") return q->space();
            if (field == "lie") return q->structure();
        } else if (const auto* r = std::get_if<LinearRelation>(&v)) {
            if (field == "graph") return r->graph();
            if (field == "source") return r->source();
            if (field == "target") return r->target();
        }
        throw SchemaError(ptr, std::string("a ") + type_name(v) + " has no part '" + field + "'");
    }

private:
    template <class T>
    static T as(const Value& v, const std::string& ptr) {
        if (const auto* x = std::get_if<T>(&v)) return *x;
        // algebras stand in for their spaces and structure tensors
        if constexpr (std::is_same_v<T, QuadraticSpace>) {
            if (const auto* q = std::get_if<QuadraticLieAlgebra>(&v)) return q->space();
            if (const auto* d = std::get_if<DorfmanDouble>(&v)) return d->algebra.space();
            if (const auto* i = std::get_if<LinearRelation>(&v)) return i->ambient();
        }
        if constexpr (std::is_same_v<T, StructureTensor>) {
            if (const auto* q = std::get_if<QuadraticLieAlgebra>(&v)) return q->structure();
        }
        if constexpr (std::is_same_v<T, QuadraticLieAlgebra>) {
            if (const auto* d = std::get_if<DorfmanDouble>(&v)) return d->algebra;
        }
        throw SchemaError(ptr, std::string("reference has type '") + type_name(v) + "'");
    }

    static void require_object(const Json& j, const std::string& ptr) {
        if (!j.is_object()) throw SchemaError(ptr, "expected an object or a reference");
    }
    static const Json& field(const Json& j, const std::string& ptr, const std::string& key) {
        if (!j.contains(key)) throw SchemaError(ptr, "missing field '" + key + "'");
        return j[key];
    }
    void check_dim(std::size_t n, const std::string& ptr) const {
        if (n > max_dim_)
            throw SchemaError(ptr, "dimension " + std::to_string(n) + " exceeds the limit " + std::to_string(max_dim_));
    }
    void nested(const Json& j, const std::string& ptr, std::size_t dim, std::size_t order, std::vector<Rational>& out) const {
        if (order == 0) {
            out.push_back(rational(j, ptr));
            return;
        }
        if (!j.is_array() || j.size() != dim)
            throw SchemaError(ptr, "expected an array of length " + std::to_string(dim));
        for (std::size_t i = 0; i < dim; ++i) nested(j[i], child(ptr, i), dim, order - 1, out);
    }
    template <class F>
    static auto wrap(const std::string& ptr, F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const SchemaError&) {
            throw;
        } catch (const Error& e) {
            throw SchemaError(ptr, e.what());
        }
    }

    std::size_t max_dim_;
    Lookup lookup_;
};

}  // namespace courant
