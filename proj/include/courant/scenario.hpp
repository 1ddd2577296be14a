#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "courant/json_io.hpp"

namespace courant {

struct Command {
    std::string verb;
    Json args = Json::object();
    std::optional<std::string> output;
    Json expect = Json::object();
    std::string pointer;
};

struct ScenarioDocument {
    std::vector<std::pair<std::string, Value>> objects;
    std::vector<Command> commands;
};

struct DocumentIssue {
    std::string pointer;
    std::string message;
};

/// Schema errors collected while loading a document.
class DocumentError : public Error {
public:
    explicit DocumentError(std::vector<DocumentIssue> issues)
        : Error(issues.empty() ? "invalid document" : issues.front().pointer + ": " + issues.front().message),
          issues_(std::move(issues)) {}
    const std::vector<DocumentIssue>& issues() const { return issues_; }

private:
    std::vector<DocumentIssue> issues_;
};

struct Report {
    std::size_t index = 0;
    std::string verb;
    Json args;
    std::optional<std::string> output;
    bool ok = true;
    bool schema_failure = false;
    Json payload = Json::object();
    Json witness;
    std::string error;

    Json to_json() const {
        Json j{{"index", index}, {"verb", verb}, {"args", args}};
        if (output) j["output"] = *output;
        j["status"] = ok ? "ok" : "fail";
        j["payload"] = payload;
        if (!witness.is_null()) j["witness"] = witness;
        if (!error.empty()) j["error"] = error;
        return j;
    }
};

/// Argument access for one command; every lookup is located under /commands/i/args.
class Args {
public:
    Args(const Json& args, std::string ptr, const Decoder& dec) : j_(args), ptr_(std::move(ptr)), dec_(dec) {}

    bool has(const std::string& k) const { return j_.contains(k); }
    const Decoder& decoder() const { return dec_; }
    std::string at(const std::string& k) const { return child(ptr_, k); }
    const Json& raw(const std::string& k) const {
        if (!j_.contains(k)) throw SchemaError(ptr_, "missing argument '" + k + "'");
        return j_[k];
    }

    QuadraticSpace space(const std::string& k) const { return dec_.space(raw(k), at(k)); }
    Subspace subspace(const std::string& k) const { return dec_.subspace(raw(k), at(k)); }
    LinearRelation relation(const std::string& k) const { return dec_.relation(raw(k), at(k)); }
    CovariantTensor tensor(const std::string& k) const { return dec_.tensor(raw(k), at(k)); }
    StructureTensor lie(const std::string& k) const { return dec_.lie(raw(k), at(k)); }
    QuadraticLieAlgebra qla(const std::string& k, bool checked = true) const { return dec_.qla(raw(k), at(k), checked); }
    Involution involution(const std::string& k, const QuadraticSpace& v) const { return dec_.involution(raw(k), at(k), v); }
    Connection connection(const std::string& k) const { return dec_.connection(raw(k), at(k)); }
    DorfmanDouble dorfman(const std::string& k) const { return dec_.dorfman(raw(k), at(k)); }
    ReductionData reduction(const std::string& k) const { return dec_.reduction(raw(k), at(k)); }
    Vector vector(const std::string& k, std::size_t n) const { return dec_.vector(raw(k), at(k), n); }
    Matrix matrix(const std::string& k, std::optional<std::size_t> cols = std::nullopt) const {
        return dec_.matrix_ref(raw(k), at(k), cols);
    }
    Value object(const std::string& k) const { return dec_.object(raw(k), at(k)); }
    std::string text(const std::string& k, const std::string& fallback) const {
        if (!j_.contains(k)) return fallback;
        if (!j_[k].is_string()) throw SchemaError(at(k), "expected a string");
        return j_[k].get<std::string>();
    }
    bool flag(const std::string& k, bool fallback) const {
        if (!j_.contains(k)) return fallback;
        if (!j_[k].is_boolean()) throw SchemaError(at(k), "expected true or false");
        return j_[k].get<bool>();
    }

private:
    const Json& j_;
    std::string ptr_;
    const Decoder& dec_;
};

struct VerbResult {
    Json payload = Json::object();
    std::optional<Value> value;
    Json witness;
    bool ok = true;
};

struct Verb {
    std::string name;
    std::string summary;
    /// library operations whose home is this verb
    std::vector<std::string> operations;
    /// arguments that take objects (and so may be references)
    std::vector<std::string> object_args;
    std::function<VerbResult(const Args&)> run;
};

namespace verbs_detail {

inline Json witness_pair(const Vector& a, const Vector& b) { return Json{to_json(a), to_json(b)}; }

inline Json bracket_witness(const std::optional<BracketWitness>& w) {
    if (!w) return nullptr;
    return Json{{"x", to_json(w->x)}, {"y", to_json(w->y)}, {"bracket", to_json(w->bracket)}};
}

inline const char* status_name(AxiomStatus s) {
    switch (s) {
        case AxiomStatus::passed: return "passed";
        case AxiomStatus::failed: return "failed";
        default: return "vacuous";
    }
}

inline Json float_matrix(const Eigen::MatrixXd& m) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        a.push_back(r);
    }
    return a;
}

inline std::vector<Verb> build() {
    std::vector<Verb> v;

    v.push_back({"validate", "load an object and confirm its invariants", {"canonical_basis", "relation"}, {"object"},
                 [](const Args& a) {
                     VerbResult r;
                     Value obj = a.object("object");
                     r.payload["type"] = type_name(obj);
                     r.payload["valid"] = true;
                     if (const auto* s = std::get_if<QuadraticSpace>(&obj)) {
                         r.payload["dim"] = s->dim();
                         r.payload["inertia"] = to_json(inertia(*s));
                     } else if (const auto* w = std::get_if<Subspace>(&obj)) {
                         r.payload["ambient"] = w->ambient_dim();
                         r.payload["dim"] = w->dim();
                         r.payload["basis"] = to_json(w->basis());
                     } else if (const auto* rel = std::get_if<LinearRelation>(&obj)) {
                         r.payload["dim"] = rel->dim();
                         r.payload["span"] = to_json(rel->graph().basis());
                         r.payload["maximal_isotropic"] = rel->is_maximal();
                     } else if (const auto* e = std::get_if<QuadraticLieAlgebra>(&obj)) {
                         r.payload["dim"] = e->dim();
                         r.payload["inertia"] = to_json(inertia(e->space()));
                     }
                     r.value = std::move(obj);
                     return r;
                 }});

    v.push_back({"classify", "isotropy flags of a subspace or of a relation's graph", {"classify"},
                 {"space", "subspace", "relation"}, [](const Args& a) {
                     VerbResult r;
                     QuadraticSpace s;
                     Subspace w;
                     if (a.has("relation")) {
                         LinearRelation rel = a.relation("relation");
                         s = rel.ambient();
                         w = rel.graph();
                     } else {
                         s = a.space("space");
                         w = a.subspace("subspace");
                         if (w.ambient_dim() != s.dim()) throw SchemaError(a.at("subspace"), "subspace does not live in the space");
                     }
                     r.payload = to_json(classify(s, w));
                     r.payload["dim"] = w.dim();
                     r.payload["inertia"] = to_json(inertia(s, w));
                     return r;
                 }});

    v.push_back({"complement", "orthogonal complement", {"orth_complement"}, {"space", "subspace"}, [](const Args& a) {
                     VerbResult r;
                     Subspace w = orth_complement(a.space("space"), a.subspace("subspace"));
                     r.payload = to_json(w);
                     r.value = w;
                     return r;
                 }});

    v.push_back({"inertia", "inertia of the form, or of its restriction", {"inertia"}, {"space", "subspace"},
                 [](const Args& a) {
                     VerbResult r;
                     QuadraticSpace s = a.space("space");
                     r.payload = to_json(a.has("subspace") ? inertia(s, a.subspace("subspace")) : inertia(s));
                     return r;
                 }});

    v.push_back({"reduce-coisotropic", "C/C⊥ with its form, and the image of an isotropic subspace",
                 {"coisotropic_reduce", "reduce_subspace"}, {"space", "coisotropic", "isotropic"}, [](const Args& a) {
                     VerbResult r;
                     QuadraticSpace s = a.space("space");
                     Subspace c = a.subspace("coisotropic");
                     auto red = coisotropic_reduce(s, c);
                     r.payload["reduced"] = to_json(red.reduced);
                     r.payload["inertia"] = to_json(inertia(red.reduced));
                     r.payload["lift"] = to_json(red.map.lift_matrix().transpose());
                     if (a.has("isotropic")) r.payload["reduced_subspace"] = to_json(reduce_subspace(s, c, a.subspace("isotropic")));
                     r.value = red.reduced;
                     return r;
                 }});

    v.push_back({"involution", "compatible involution: exact split, or polar iteration in floating point",
                 {"split_involution", "polar_involution"}, {"space", "g0"}, [](const Args& a) {
                     VerbResult r;
                     QuadraticSpace s = a.space("space");
                     std::string method = a.text("method", "split");
                     Involution exact = split_involution(s);
                     r.payload["method"] = method;
                     if (method == "split") {
                         r.payload["tau"] = to_json(exact.tau());
                         r.payload["plus_dim"] = exact.plus_space().dim();
                         r.payload["minus_dim"] = exact.minus_space().dim();
                         r.value = exact;
                         return r;
                     }
                     if (method != "polar") throw SchemaError(a.at("method"), "expected \"split\" or \"polar\"");
                     Matrix g0 = a.has("g0") ? a.matrix("g0", s.dim()) : Matrix::identity(s.dim());
                     double tol = kPolarTolerance;
                     if (a.has("tol")) {
                         if (!a.raw("tol").is_number()) throw SchemaError(a.at("tol"), "expected a number");
                         tol = a.raw("tol").get<double>();
                     }
                     FloatInvolution f = polar_involution(s, g0, tol);
                     r.payload["tau"] = float_matrix(f.tau);
                     r.payload["plus_dim"] = f.plus_dim;
                     r.payload["iterations"] = f.iterations;
                     r.payload["agrees_with_split"] = f.plus_dim == exact.plus_space().dim();
                     return r;
                 }});

    v.push_back({"meet-join", "intersection and sum of two subspaces", {"meet_join"}, {"a", "b"}, [](const Args& a) {
                     VerbResult r;
                     Subspace x = a.subspace("a"), y = a.subspace("b");
                     if (x.ambient_dim() != y.ambient_dim()) throw SchemaError(a.at("b"), "subspaces live in different ambients");
                     auto [m, j] = meet_join(x, y);
                     r.payload["meet"] = to_json(m);
                     r.payload["join"] = to_json(j);
                     return r;
                 }});

    v.push_back({"quotient", "the projection V -> V/N", {"quotient"}, {"kernel"}, [](const Args& a) {
                     VerbResult r;
                     Subspace n = a.subspace("kernel");
                     QuotientMap q = quotient(n.ambient_dim(), n);
                     r.payload["target_dim"] = q.target_dim();
                     r.payload["matrix"] = to_json(q.matrix());
                     r.payload["section"] = to_json(q.section_matrix());
                     r.value = q.matrix();
                     return r;
                 }});

    v.push_back({"compose", "R2 ∘ R1 by coisotropic reduction", {"compose"}, {"r2", "r1"}, [](const Args& a) {
                     VerbResult r;
                     LinearRelation r2 = a.relation("r2"), r1 = a.relation("r1");
                     Composition c = compose(r2, r1);
                     r.payload["relation"] = to_json(c.relation);
                     r.payload["diamond"] = to_json(c.diamond);
                     r.payload["maximal_isotropic"] = c.relation.is_maximal();
                     r.value = c.relation;
                     return r;
                 }});

    v.push_back({"transpose", "Rᵀ", {"transpose"}, {"relation"}, [](const Args& a) {
                     VerbResult r;
                     LinearRelation t = transpose(a.relation("relation"));
                     r.payload = to_json(t);
                     r.value = t;
                     return r;
                 }});

    v.push_back({"dagger", "R† in dual coordinates", {"dagger"}, {"relation"}, [](const Args& a) {
                     VerbResult r;
                     Subspace d = dagger(a.relation("relation"));
                     r.payload = to_json(d);
                     r.value = d;
                     return r;
                 }});

    v.push_back({"tensor-related", "t1 and t2 agree on the graph", {"tensor_related"}, {"t1", "t2", "relation"},
                 [](const Args& a) {
                     VerbResult r;
                     r.payload["related"] = tensor_related(a.tensor("t1"), a.tensor("t2"), a.relation("relation"));
                     return r;
                 }});

    auto push_pull_verb = [](Direction d) {
        return [d](const Args& a) {
            VerbResult r;
            Subspace s = push_pull(a.relation("relation"), a.subspace("subspace"), d);
            r.payload = to_json(s);
            r.value = s;
            return r;
        };
    };
    v.push_back({"push", "R∘L for L in the source", {"push_pull/forward"}, {"relation", "subspace"}, push_pull_verb(Direction::forward)});
    v.push_back({"pull", "L∘R for L in the target", {"push_pull/backward"}, {"relation", "subspace"}, push_pull_verb(Direction::backward)});

    v.push_back({"isometry", "(τ1 × τ2)(R) = R", {"isometry_check"}, {"relation", "tau1", "tau2"}, [](const Args& a) {
                     VerbResult r;
                     LinearRelation rel = a.relation("relation");
                     r.payload["isometric"] =
                         isometry_check(rel, a.involution("tau1", rel.source()), a.involution("tau2", rel.target()));
                     return r;
                 }});

    v.push_back({"graph-decompose", "an isometric relation as the graph of F: K1 -> V2", {"graph_decompose"},
                 {"relation", "tau1", "tau2"}, [](const Args& a) {
                     VerbResult r;
                     LinearRelation rel = a.relation("relation");
                     auto g = graph_decompose(rel, a.involution("tau1", rel.source()), a.involution("tau2", rel.target()));
                     r.payload["K1"] = to_json(g.k1);
                     r.payload["images"] = to_json(g.f_rows);
                     r.value = g.k1;
                     return r;
                 }});

    v.push_back({"qla-validate", "axioms of a quadratic Lie algebra with witnesses", {"validate_qla"}, {"algebra"},
                 [](const Args& a) {
                     VerbResult r;
                     QuadraticLieAlgebra e = a.qla("algebra", false);
                     AxiomReport rep = e.validate();
                     Json ax = Json::array();
                     for (const auto& x : rep.axioms) {
                         Json j{{"name", x.name}, {"status", status_name(x.status)}};
                         if (!x.detail.empty()) j["detail"] = x.detail;
                         if (!x.witness.empty()) j["witness"] = x.witness;
                         if (!x.residual.empty()) j["residual"] = to_json(x.residual);
                         ax.push_back(j);
                     }
                     r.payload["ok"] = rep.ok();
                     r.payload["axioms"] = ax;
                     if (const auto* f = rep.first_failure()) r.witness = Json{{"axiom", f->name}, {"basis", f->witness}};
                     if (rep.ok()) r.value = QuadraticLieAlgebra(e.space(), e.structure());
                     return r;
                 }});

    v.push_back({"killing", "Killing form tr(ad x ad y)", {"killing"}, {"lie"}, [](const Args& a) {
                     VerbResult r;
                     Matrix k = killing(a.lie("lie"));
                     r.payload["killing"] = to_json(k);
                     r.payload["inertia"] = to_json(inertia_of_form(k));
                     r.value = k;
                     return r;
                 }});

    v.push_back({"subalgebra", "closure, centralizer and invariants", {"subalgebra_tools"}, {"lie", "subspace", "h"},
                 [](const Args& a) {
                     VerbResult r;
                     StructureTensor c = a.lie("lie");
                     Subspace w = a.subspace("subspace");
                     auto fail = closure_failure(c, w);
                     r.payload["is_subalgebra"] = !fail;
                     if (fail) r.payload["bracket_witness"] = bracket_witness(fail);
                     r.payload["centralizer"] = to_json(centralizer(c, w));
                     if (a.has("h")) r.payload["invariants"] = to_json(invariants(c, a.subspace("h"), w));
                     return r;
                 }});

    v.push_back({"involutive", "isotropic and bracket-closed; Dirac if also maximal", {"involutive_structure_check"},
                 {"algebra", "subspace"}, [](const Args& a) {
                     VerbResult r;
                     InvolutiveCheck c = involutive_structure_check(a.qla("algebra"), a.subspace("subspace"));
                     r.payload = Json{{"isotropic", c.isotropic}, {"closed", c.closed}, {"involutive", c.involutive}, {"dirac", c.dirac}};
                     if (c.bracket_witness) r.payload["bracket_witness"] = bracket_witness(c.bracket_witness);
                     if (c.isotropy_witness) r.payload["isotropy_witness"] = witness_pair(c.isotropy_witness->first, c.isotropy_witness->second);
                     return r;
                 }});

    v.push_back({"ca-relation", "graph closed under the product bracket", {"ca_relation_check"}, {"e1", "e2", "relation"},
                 [](const Args& a) {
                     VerbResult r;
                     RelationCheck c = ca_relation_check(a.qla("e1"), a.qla("e2"), a.relation("relation"));
                     r.payload["ok"] = c.ok;
                     if (c.witness) r.payload["bracket_witness"] = bracket_witness(c.witness);
                     return r;
                 }});

    v.push_back({"morphism", "F preserves pairing and bracket", {"classical_morphism_check"}, {"e1", "e2", "map"},
                 [](const Args& a) {
                     VerbResult r;
                     QuadraticLieAlgebra e1 = a.qla("e1"), e2 = a.qla("e2");
                     LieMap f = a.decoder().liemap(a.raw("map"), a.at("map"), e1.dim(), e2.dim());
                     MorphismCheck c = classical_morphism_check(e1, e2, f);
                     r.payload = Json{{"preserves_pairing", c.preserves_pairing}, {"preserves_bracket", c.preserves_bracket}, {"ok", c.ok()}};
                     if (c.witness) r.payload["witness"] = Json{c.witness->first, c.witness->second};
                     return r;
                 }});

    v.push_back({"product", "E1 × E2, or E1 × Ē2 when flip_second", {"product"}, {"e1", "e2"}, [](const Args& a) {
                     VerbResult r;
                     QuadraticLieAlgebra p = product(a.qla("e1"), a.qla("e2"), a.flag("flip_second", true));
                     r.payload = to_json(p);
                     r.value = p;
                     return r;
                 }});

    v.push_back({"df", "Dorfman double g ⋉ g*", {"df"}, {"lie"}, [](const Args& a) {
                     VerbResult r;
                     DorfmanDouble d = df(a.lie("lie"));
                     r.payload["algebra"] = to_json(d.algebra);
                     r.payload["inertia"] = to_json(inertia(d.algebra.space()));
                     r.value = d;
                     return r;
                 }});

    v.push_back({"dirac-of", "K ⊕ an(K) for a subalgebra K", {"dirac_of_subalgebra"}, {"double", "subalgebra"},
                 [](const Args& a) {
                     VerbResult r;
                     DorfmanDouble d = a.dorfman("double");
                     Subspace l = dirac_of_subalgebra(d, a.subspace("subalgebra"));
                     r.payload = to_json(l);
                     r.payload["dirac"] = involutive_structure_check(d.algebra, l).dirac;
                     r.value = l;
                     return r;
                 }});

    v.push_back({"relation-of", "R_K between Dorfman doubles", {"relation_of"}, {"d1", "d2", "k"}, [](const Args& a) {
                     VerbResult r;
                     DorfmanDouble d1 = a.dorfman("d1"), d2 = a.dorfman("d2");
                     LinearRelation rel = relation_of(d1, d2, a.subspace("k"));
                     r.payload = to_json(rel);
                     r.payload["maximal_isotropic"] = rel.is_maximal();
                     r.payload["ca_relation"] = ca_relation_check(d1.algebra, d2.algebra, rel).ok;
                     r.value = rel;
                     return r;
                 }});

    v.push_back({"reduce", "E′ = K⊥/(K ∩ K⊥) and Q(ℜ)", {"make_reduction", "reduced_space", "q_maximal"},
                 {"reduction"}, [](const Args& a) {
                     VerbResult r;
                     ReductionData d = a.reduction("reduction");
                     ReducedSpace red = reduced_space(d);
                     r.payload["induced_form"] = to_json(d.induced_form);
                     r.payload["induced_inertia"] = to_json(d.induced_inertia);
                     r.payload["E_inertia"] = to_json(inertia(d.e));
                     r.payload["E_prime"] = to_json(red.space);
                     r.payload["E_prime_inertia"] = to_json(inertia(red.space));
                     r.payload["Q"] = to_json(red.q);
                     r.payload["Q_dim"] = red.q.dim();
                     r.payload["q_maximal"] = q_maximal(d);
                     r.payload["Q_maximal_isotropic"] = red.q.is_maximal();
                     r.value = red.q;
                     return r;
                 }});

    v.push_back({"sub-reduce", "E′0, R(H) and the composition R(H) ∘ Q(ℜ0)", {"sub_reduce", "rh_maximal", "compose_qr"},
                 {"reduction", "h"}, [](const Args& a) {
                     VerbResult r;
                     ReductionData d = a.reduction("reduction");
                     SubReduction s = sub_reduce(d, a.subspace("h"));
                     r.payload["E0_prime"] = to_json(s.e0_prime);
                     r.payload["E0_prime_inertia"] = to_json(inertia(s.e0_prime));
                     r.payload["R_H"] = to_json(s.rh);
                     r.payload["R_H_dim"] = s.rh.dim();
                     r.payload["rh_maximal"] = rh_maximal(s);
                     r.payload["R_H_maximal_isotropic"] = s.rh.is_maximal();
                     r.payload["k0perp_decomposes"] = k0perp_decomposes(s);
                     QrComposition qr = compose_qr(d, s);
                     r.payload["composite"] = to_json(qr.composite);
                     r.payload["direct_sum_identity"] = qr.direct_sum_identity;
                     r.payload["composite_equals_Q"] = qr.equals_q;
                     r.payload["composite_maximal_isotropic"] = qr.composite.is_maximal();
                     r.value = std::move(s);
                     return r;
                 }});

    v.push_back({"pl-dualize", "R(H′)ᵀ ∘ R(H): E′0 -> E′1", {"pl_relation"}, {"reduction", "h", "h2"}, [](const Args& a) {
                     VerbResult r;
                     PlRelation p = pl_relation(a.reduction("reduction"), a.subspace("h"), a.subspace("h2"));
                     r.payload = to_json(p.relation);
                     r.payload["maximal_isotropic"] = p.relation.is_maximal();
                     r.value = p.relation;
                     return r;
                 }});

    v.push_back({"transport-metric", "τ′0 making R(H) an isometry, or τ′ making Q(ℜ) one",
                 {"metric_transport", "reduced_metric"}, {"subreduction", "reduction", "h", "tau_prime", "q_metric", "tau"},
                 [](const Args& a) {
                     VerbResult r;
                     if (a.has("tau")) {
                         ReductionData d = a.reduction("reduction");
                         Involution t = reduced_metric(d, a.involution("tau", d.e));
                         ReducedSpace red = reduced_space(d);
                         r.payload["tau"] = to_json(t.tau());
                         r.payload["isometric"] = isometry_check(red.q, a.involution("tau", d.e), t);
                         r.value = t;
                         return r;
                     }
                     SubReduction s;
                     if (a.has("subreduction")) {
                         Value v = a.decoder().resolve(a.raw("subreduction"), a.at("subreduction"));
                         const auto* p = std::get_if<SubReduction>(&v);
                         if (!p) throw SchemaError(a.at("subreduction"), "reference is not a sub-reduction");
                         s = *p;
                     } else {
                         s = sub_reduce(a.reduction("reduction"), a.subspace("h"));
                     }
                     Involution tp = a.involution("tau_prime", s.full.space);
                     std::optional<Involution> qm;
                     if (a.has("q_metric")) {
                         const Json& j = a.raw("q_metric");
                         Matrix m = j.is_object() ? a.decoder().matrix_ref(j.contains("tau") ? j["tau"] : Json::array(), child(a.at("q_metric"), "tau"), s.q_dim())
                                                 : a.decoder().matrix_ref(j, a.at("q_metric"), s.q_dim());
                         Matrix lift(s.e0_prime.dim(), s.q_dim());
                         for (std::size_t c = 0; c < s.q_dim(); ++c)
                             for (std::size_t row = 0; row < lift.rows(); ++row) lift(row, c) = s.psi1(row, s.kperp_dim() + c);
                         QuadraticSpace qs(lift.transpose() * s.e0_prime.gram() * lift);
                         try {
                             qm = Involution(qs, m);
                         } catch (const Error& e) {
                             throw SchemaError(a.at("q_metric"), e.what());
                         }
                     }
                     Involution t0 = metric_transport(s, tp, qm);
                     r.payload["tau"] = to_json(t0.tau());
                     r.payload["isometric"] = isometry_check(s.rh, t0, tp);
                     r.value = t0;
                     return r;
                 }});

    v.push_back({"connection-validate", "metric compatibility of connection coefficients", {"validate_connection"},
                 {"algebra"}, [](const Args& a) {
                     VerbResult r;
                     QuadraticLieAlgebra e = a.qla("algebra");
                     const Json& g = a.raw("gamma");
                     std::vector<Rational> c;
                     const std::size_t n = e.dim();
                     if (!g.is_array() || g.size() != n) throw SchemaError(a.at("gamma"), "expected a dim^3 array");
                     for (std::size_t i = 0; i < n; ++i) {
                         if (!g[i].is_array() || g[i].size() != n) throw SchemaError(child(a.at("gamma"), i), "expected a dim^2 array");
                         for (std::size_t j = 0; j < n; ++j) {
                             Vector row = a.decoder().vector(g[i][j], child(child(a.at("gamma"), i), j), n);
                             c.insert(c.end(), row.begin(), row.end());
                         }
                     }
                     CompatibilityReport rep = validate_connection(e, c);
                     r.payload["compatible"] = rep.ok;
                     if (!rep.ok) r.payload["witness"] = Json{{"indices", rep.witness}, {"residual", to_json(rep.residual)}};
                     else r.value = Connection(e, c);
                     return r;
                 }});

    v.push_back({"torsion", "T(a,b,c) = <∇_a b − ∇_b a − [a,b], c> + <∇_c a, b>", {"torsion"}, {"connection"},
                 [](const Args& a) {
                     VerbResult r;
                     CovariantTensor t = torsion(a.connection("connection"));
                     r.payload = to_json(t);
                     r.value = t;
                     return r;
                 }});

    v.push_back({"kmap", "<𝐊(a,b), c> = <∇_c a, b>", {"kmap"}, {"connection"}, [](const Args& a) {
                     VerbResult r;
                     Connection c = a.connection("connection");
                     CovariantTensor t = kmap(c);
                     r.payload = to_json(t);
                     if (a.has("psi")) r.payload["value"] = to_json(kmap_value(c, a.vector("psi", c.dim()), a.vector("psi2", c.dim())));
                     r.value = t;
                     return r;
                 }});

    v.push_back({"riemann", "generalized curvature R(φ′,φ,ψ,ψ′)", {"riemann"}, {"connection"}, [](const Args& a) {
                     VerbResult r;
                     Connection c = a.connection("connection");
                     CovariantTensor t = riemann(c);
                     r.payload = to_json(t);
                     if (a.has("at")) {
                         const Json& at = a.raw("at");
                         if (!at.is_array() || at.size() != 4) throw SchemaError(a.at("at"), "expected four vectors");
                         std::vector<Vector> xs;
                         for (std::size_t i = 0; i < 4; ++i) xs.push_back(a.decoder().vector(at[i], child(a.at("at"), i), c.dim()));
                         r.payload["value"] = to_json(t(xs));
                     }
                     r.value = t;
                     return r;
                 }});

    v.push_back({"related-connections", "∇¹ × ∇² preserves the graph", {"related_connections"}, {"n1", "n2", "relation"},
                 [](const Args& a) {
                     VerbResult r;
                     RelatednessReport rep = related_connections(a.connection("n1"), a.connection("n2"), a.relation("relation"));
                     r.payload["related"] = rep.related;
                     if (rep.witness) r.payload["witness"] = witness_pair(rep.witness->first, rep.witness->second);
                     return r;
                 }});

    v.push_back({"product-connection", "∇¹ × ∇² on E1 × Ē2", {"product_connection"}, {"n1", "n2"}, [](const Args& a) {
                     VerbResult r;
                     Connection c = product_connection(a.connection("n1"), a.connection("n2"));
                     r.payload["dim"] = c.dim();
                     r.payload["inertia"] = to_json(inertia(c.algebra().space()));
                     r.value = c;
                     return r;
                 }});

    v.push_back({"perturb", "∇_u v = [u,v] + 𝐤(u,v)", {"perturb"}, {"algebra", "perturbation"}, [](const Args& a) {
                     VerbResult r;
                     QuadraticLieAlgebra e = a.qla("algebra");
                     PerturbationData p = a.decoder().perturbation(a.raw("perturbation"), a.at("perturbation"), e.dim());
                     Connection c = perturb(e, p);
                     r.payload = to_json(c);
                     r.value = c;
                     return r;
                 }});

    std::sort(v.begin(), v.end(), [](const Verb& x, const Verb& y) { return x.name < y.name; });
    return v;
}

}  // namespace verbs_detail

inline const std::vector<Verb>& verbs() {
    static const std::vector<Verb> table = verbs_detail::build();
    return table;
}

inline const Verb* find_verb(const std::string& name) {
    for (const auto& v : verbs())
        if (v.name == name) return &v;
    return nullptr;
}

struct RunOptions {
    std::size_t max_dim = 64;
    bool strict = false;
};

/// Loads objects in document order (later objects may refer to earlier ones)
/// and checks command structure and references.
inline ScenarioDocument parse_document(const std::string& text, const RunOptions& opt = {}) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw DocumentError(std::vector<DocumentIssue>{{"", std::string("malformed JSON: ") + e.what()}});
    }
    std::vector<DocumentIssue> issues;
    if (!doc.is_object()) throw DocumentError(std::vector<DocumentIssue>{{"", "document must be an object"}});
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (it.key() != "objects" && it.key() != "commands") issues.push_back({child("", it.key()), "unknown top-level field"});

    ScenarioDocument out;
    std::map<std::string, std::size_t> names;
    Decoder dec(opt.max_dim, [&](const std::string& n) -> const Value* {
        auto f = names.find(n);
        return f == names.end() ? nullptr : &out.objects[f->second].second;
    });

    if (doc.contains("objects")) {
        const Json& objs = doc["objects"];
        if (!objs.is_object()) {
            issues.push_back({"/objects", "expected an object"});
        } else {
            for (auto it = objs.begin(); it != objs.end(); ++it) {
                std::string ptr = child("/objects", it.key());
                try {
                    Value v = dec.object(it.value(), ptr);
                    names[it.key()] = out.objects.size();
                    out.objects.emplace_back(it.key(), std::move(v));
                } catch (const SchemaError& e) {
                    issues.push_back({e.pointer(), e.message()});
                }
            }
        }
    }

    std::map<std::string, bool> outputs;
    if (doc.contains("commands")) {
        const Json& cmds = doc["commands"];
        if (!cmds.is_array()) {
            issues.push_back({"/commands", "expected an array"});
        } else {
            for (std::size_t i = 0; i < cmds.size(); ++i) {
                std::string ptr = child("/commands", i);
                const Json& c = cmds[i];
                if (!c.is_object()) {
                    issues.push_back({ptr, "expected an object"});
                    continue;
                }
                Command cmd;
                cmd.pointer = ptr;
                for (auto it = c.begin(); it != c.end(); ++it)
                    if (it.key() != "verb" && it.key() != "args" && it.key() != "output" && it.key() != "expect")
                        issues.push_back({child(ptr, it.key()), "unknown command field"});
                const Verb* verb = nullptr;
                if (!c.contains("verb") || !c["verb"].is_string()) {
                    issues.push_back({ptr, "missing verb"});
                } else {
                    cmd.verb = c["verb"].get<std::string>();
                    verb = find_verb(cmd.verb);
                    if (!verb) issues.push_back({child(ptr, "verb"), "unknown verb '" + cmd.verb + "'"});
                }
                if (c.contains("args")) {
                    if (!c["args"].is_object()) issues.push_back({child(ptr, "args"), "expected an object"});
                    else cmd.args = c["args"];
                }
                if (c.contains("expect")) {
                    if (!c["expect"].is_object()) issues.push_back({child(ptr, "expect"), "expected an object"});
                    else cmd.expect = c["expect"];
                }
                if (c.contains("output")) {
                    if (!c["output"].is_string()) {
                        issues.push_back({child(ptr, "output"), "expected a name"});
                    } else {
                        cmd.output = c["output"].get<std::string>();
                        if (names.count(*cmd.output))
                            issues.push_back({child(ptr, "output"), "output name shadows object '" + *cmd.output + "'"});
                    }
                }
                if (verb && cmd.args.is_object()) {
                    for (const auto& k : verb->object_args) {
                        if (!cmd.args.contains(k) || !cmd.args[k].is_string()) continue;
                        std::string ref = cmd.args[k].get<std::string>();
                        ref = ref.substr(0, ref.find('#'));
                        if (names.count(ref) || outputs.count(ref)) continue;
                        try {
                            if (dec.preset(ref)) continue;
                        } catch (const SchemaError& e) {
                            issues.push_back({child(child(ptr, "args"), k), e.message()});
                            continue;
                        }
                        issues.push_back({child(child(ptr, "args"), k), "unresolved reference '" + ref + "'"});
                    }
                }
                if (cmd.output) outputs[*cmd.output] = true;
                out.commands.push_back(std::move(cmd));
            }
        }
    }
    if (!issues.empty()) throw DocumentError(std::move(issues));
    return out;
}

/// Runs the commands in order. Failures are recorded in the reports; with
/// `strict` execution stops after the first one.
inline std::vector<Report> execute(const ScenarioDocument& doc, const RunOptions& opt = {}) {
    std::map<std::string, Value> names;
    for (const auto& [k, v] : doc.objects) names.emplace(k, v);
    Decoder dec(opt.max_dim, [&](const std::string& n) -> const Value* {
        auto f = names.find(n);
        return f == names.end() ? nullptr : &f->second;
    });
    std::vector<Report> reports;
    for (std::size_t i = 0; i < doc.commands.size(); ++i) {
        const Command& c = doc.commands[i];
        Report rep;
        rep.index = i;
        rep.verb = c.verb;
        rep.args = c.args;
        rep.output = c.output;
        const Verb* verb = find_verb(c.verb);
        try {
            if (!verb) throw SchemaError(child(c.pointer, "verb"), "unknown verb '" + c.verb + "'");
            Args args(c.args, child(c.pointer, "args"), dec);
            VerbResult res = verb->run(args);
            rep.payload = std::move(res.payload);
            rep.witness = std::move(res.witness);
            rep.ok = res.ok;
            Json mismatches = Json::array();
            for (auto it = c.expect.begin(); it != c.expect.end(); ++it) {
                const Json actual = rep.payload.contains(it.key()) ? rep.payload[it.key()] : Json();
                if (actual != it.value())
                    mismatches.push_back(Json{{"field", it.key()}, {"expected", it.value()}, {"actual", actual}});
            }
            if (!mismatches.empty()) {
                rep.ok = false;
                if (rep.witness.is_null()) rep.witness = Json::object();
                rep.witness["expect"] = mismatches;
                rep.error = "expectation not met";
            }
            if (c.output && res.value) names.insert_or_assign(*c.output, std::move(*res.value));
            else if (c.output) throw PreconditionViolation("verb '" + c.verb + "' produces no object to store");
        } catch (const SchemaError& e) {
            rep.ok = false;
            rep.schema_failure = true;
            rep.error = e.what();
        } catch (const NotAGraph& e) {
            rep.ok = false;
            rep.error = e.what();
            rep.witness = Json{{"element", to_json(e.witness)}};
        } catch (const IsotropyViolation& e) {
            rep.ok = false;
            rep.error = e.what();
            rep.witness = Json{{"first", to_json(e.first)}, {"second", to_json(e.second)}, {"pairing", to_json(e.pairing)}};
        } catch (const Error& e) {
            rep.ok = false;
            rep.error = e.what();
        }
        bool stop = opt.strict && !rep.ok;
        reports.push_back(std::move(rep));
        if (stop) break;
    }
    return reports;
}

/// 0 when every report is ok, 2 when any failed on its input, 1 otherwise.
inline int exit_code(const std::vector<Report>& reports) {
    int code = 0;
    for (const auto& r : reports) {
        if (r.schema_failure) return 2;
        if (!r.ok) code = 1;
    }
    return code;
}

inline Json reports_json(const std::vector<Report>& reports) {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    return Json{{"status", exit_code(reports) == 0 ? "ok" : "fail"}, {"reports", arr}};
}

namespace detail {
inline void flatten_scalars(const Json& j, const std::string& prefix, std::ostringstream& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (v.is_boolean() || v.is_number() || v.is_string()) out << ' ' << key << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
        else if (v.is_object() && (it.key().find("inertia") != std::string::npos)) flatten_scalars(v, key, out);
    }
}
}  // namespace detail

/// One line per report: index, verb, status and the scalar payload fields.
inline std::string reports_text(const std::vector<Report>& reports) {
    std::ostringstream out;
    for (const auto& r : reports) {
        out << '[' << r.index << "] " << r.verb << ' ' << (r.ok ? "ok" : "FAIL");
        if (r.output) out << " -> " << *r.output;
        if (r.payload.is_object()) detail::flatten_scalars(r.payload, "", out);
        if (!r.error.empty()) out << " error=\"" << r.error << '"';
        out << '\n';
    }
    return out.str();
}

}  // namespace courant
