// Acceptance run: one PASS/FAIL line per criterion, with the figures behind it.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "courant/connection.hpp"
#include "courant/dorfman.hpp"
#include "courant/linear_relation.hpp"
#include "courant/reduction.hpp"
#include "oracle.hpp"
#include "reduction_models.hpp"

using namespace courant;
using namespace testing_models;

namespace {

// Pinned limits.
constexpr double kInertiaBudget = 10.0;
constexpr double kGoldenBudget = 1.0;
constexpr double kPolarTol = 1e-9;
constexpr int kInertiaCases = 1200;
constexpr int kReductionCases = 600;
constexpr int kTripleCases = 600;

class Criterion {
public:
    Criterion(int id, std::string title, double budget = 0) : id_(id), title_(std::move(title)), budget_(budget) {}

    void check(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 6) failures_.push_back(what);
        if (!ok) ++failed_;
    }
    void note(const std::string& s) { notes_.push_back(s); }
    void count_case() { ++cases_; }
    void min_cases(int n) { check(cases_ >= n, "only " + std::to_string(cases_) + " cases, need " + std::to_string(n)); }

    bool run(const std::function<void(Criterion&)>& body) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            body(*this);
        } catch (const std::exception& e) {
            check(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget_ > 0) check(secs < budget_, "took " + std::to_string(secs) + " s");
        bool pass = failed_ == 0;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.3f s", secs);
        std::cout << (pass ? "PASS" : "FAIL") << " " << id_ << " " << title_ << ": " << cases_ << " cases, " << checks_
                  << " checks, " << timing;
        if (budget_ > 0) std::cout << " (limit " << budget_ << " s)";
        std::cout << "\n";
        for (const auto& n : notes_) std::cout << "    " << n << "\n";
        for (const auto& f : failures_) std::cout << "    failed: " << f << "\n";
        return pass;
    }

private:
    int id_;
    std::string title_;
    double budget_;
    int cases_ = 0;
    int checks_ = 0;
    int failed_ = 0;
    std::vector<std::string> notes_, failures_;
};

std::string str(const Inertia& i) {
    return "(" + std::to_string(i.p) + "," + std::to_string(i.q) + "," + std::to_string(i.k) + ")";
}

Subspace random_mixed_subspace(std::mt19937& rng, const RandomSpace& rs) {
    const std::size_t n = rs.space.dim();
    Subspace iso = random_isotropic(rng, rs, static_cast<std::size_t>(uniform(rng, 0, 3)));
    Subspace gen = random_subspace(rng, n, static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(n) / 2)));
    return join(iso, gen);
}

Matrix leading_block(const Matrix& g, std::size_t k) {
    Matrix b(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) b(i, j) = g(i, j);
    return b;
}

void inertia_additivity(Criterion& c) {
    std::mt19937 rng(1001);
    int degenerate = 0;
    for (int trial = 0; trial < kInertiaCases; ++trial) {
        RandomSpace rs = random_space(rng, static_cast<std::size_t>(uniform(rng, 1, 8)));
        Subspace p = random_mixed_subspace(rng, rs);
        Inertia v = inertia(rs.space), ip = inertia(rs.space, p), iq = inertia(rs.space, orth_complement(rs.space, p));
        const std::size_t k0 = meet(p, orth_complement(rs.space, p)).dim();
        auto sig = oracle::inertia(rs.space.gram().row_list());
        bool ok = ip.k == k0 && iq.k == k0 && v.k == 0 && v.p == ip.p + iq.p + k0 && v.q == ip.q + iq.q + k0 &&
                  sig.p == v.p && sig.q == v.q;
        c.check(ok, "In(V)=" + str(v) + " In(P)=" + str(ip) + " In(P⊥)=" + str(iq));
        if (k0 > 0) ++degenerate;
        c.count_case();
    }
    c.min_cases(1000);
    c.check(degenerate > 100, "too few degenerate P");
    c.note(std::to_string(degenerate) + " cases with P ∩ P⊥ ≠ 0");
}

void coisotropic_reduction(Criterion& c) {
    std::mt19937 rng(1002);
    int split = 0;
    for (int trial = 0; trial < kReductionCases; ++trial) {
        const bool lagrangian_case = trial % 2 == 0;
        RandomSpace rs = [&] {
            if (lagrangian_case) {
                std::size_t m = static_cast<std::size_t>(uniform(rng, 1, 4));
                return random_space(rng, 2 * m, static_cast<int>(m));
            }
            return random_space(rng, static_cast<std::size_t>(uniform(rng, 1, 8)));
        }();
        Subspace cs = random_coisotropic(rng, rs);
        Subspace cperp = orth_complement(rs.space, cs);
        auto red = coisotropic_reduce(rs.space, cs);
        Inertia amb = inertia(rs.space), r = inertia(red.reduced);
        const std::size_t k = cperp.dim();
        c.check(r.p == amb.p - k && r.q == amb.q - k && r.k == 0, "reduced inertia " + str(r) + " from " + str(amb));
        Subspace l = random_maximal_isotropic(rng, rs);
        Subspace lp = reduce_subspace(rs.space, cs, l);
        c.check(classify(red.reduced, lp).maximal_isotropic, "L′ not maximal isotropic");
        c.check(red.map.image(meet(orth_complement(rs.space, l), cs)) == orth_complement(red.reduced, lp), "♮(L⊥∩C) ≠ L′⊥");
        if (lagrangian_case) {
            c.check(classify(rs.space, l).lagrangian, "L not Lagrangian");
            c.check(classify(red.reduced, lp).lagrangian, "L′ not Lagrangian");
            ++split;
        }
        c.count_case();
    }
    c.min_cases(500);
    c.note(std::to_string(split) + " cases in split ambients");
}

void relation_calculus(Criterion& c) {
    std::mt19937 rng(1003);
    int maximal = 0;
    for (int trial = 0; trial < kTripleCases; ++trial) {
        auto a = random_space(rng, static_cast<std::size_t>(uniform(rng, 1, 3)));
        auto b = random_space(rng, static_cast<std::size_t>(uniform(rng, 1, 3)));
        auto x = random_space(rng, static_cast<std::size_t>(uniform(rng, 1, 3)));
        auto d = random_space(rng, static_cast<std::size_t>(uniform(rng, 1, 3)));
        const std::size_t na = a.space.dim(), nb = b.space.dim(), nx = x.space.dim();
        LinearRelation r1 = random_relation(rng, a, b, rng() % 2), r2 = random_relation(rng, b, x, rng() % 2);
        LinearRelation r3 = random_relation(rng, x, d, rng() % 2);
        LinearRelation r21 = compose_relation(r2, r1);
        c.check(compose_relation(r3, r21) == compose_relation(compose_relation(r3, r2), r1), "associativity");
        c.check(compose_relation(LinearRelation::diagonal(b.space), r1) == r1, "Δ∘R ≠ R");
        c.check(compose_relation(r1, LinearRelation::diagonal(a.space)) == r1, "R∘Δ ≠ R");
        c.check(is_isotropic(r21.ambient(), r21.graph()), "composite not isotropic");
        Subspace lhs = orth_complement(r21.ambient(), r21.graph());
        Subspace p1 = orth_complement(r1.ambient(), r1.graph()), p2 = orth_complement(r2.ambient(), r2.graph());
        c.check(lhs == compose_linear(p2, p1, na, nb, nx), "perp law");
        QuadraticSpace four = direct_sum(r1.ambient(), r2.ambient());
        if (classify(four, product(r1.graph(), r2.graph())).maximal_isotropic) {
            ++maximal;
            c.check(r21.is_maximal(), "R2 × R1 maximal but R2∘R1 not");
        }
        c.count_case();
    }
    c.min_cases(500);
    c.note(std::to_string(maximal) + " triples with R2 × R1 maximal");
}

void dorfman_functor(Criterion& c) {
    std::mt19937 rng(1004);
    for (int trial = 0; trial < 150; ++trial) {
        StructureTensor c1 = random_lie_algebra(rng), c2 = random_lie_algebra(rng), c3 = random_lie_algebra(rng);
        DorfmanDouble d1 = df(c1), d2 = df(c2), d3 = df(c3);
        c.check(d1.algebra.validate().ok(), "Df(g) fails an axiom");
        c.check(inertia(d1.algebra.space()) == (Inertia{c1.dim(), c1.dim(), 0}), "Df(g) not split");
        Subspace k1 = random_lie_relation(rng, c1, c2), k2 = random_lie_relation(rng, c2, c3);
        LinearRelation r1 = relation_of(d1, d2, k1), r2 = relation_of(d2, d3, k2);
        c.check(r1.is_maximal(), "R_K not maximal isotropic");
        c.check(ca_relation_check(d1.algebra, d2.algebra, r1).ok, "R_K not involutive");
        Subspace k21 = compose_linear(k2, k1, c1.dim(), c2.dim(), c3.dim());
        c.check(relation_of(d1, d3, k21) == compose_relation(r2, r1), "R_{K′∘K} ≠ R_{K′}∘R_K");
        std::vector<Vector> diag;
        for (std::size_t i = 0; i < c1.dim(); ++i) diag.push_back(concat(unit_vector(c1.dim(), i), unit_vector(c1.dim(), i)));
        Subspace delta = Subspace::span(2 * c1.dim(), Matrix::from_rows(diag, 2 * c1.dim()));
        c.check(relation_of(d1, d1, delta) == LinearRelation::diagonal(d1.algebra.space()), "R_Δ ≠ Δ");
        c.count_case();
    }
}

void reduction_signatures(Criterion& c) {
    std::mt19937 rng(1005);
    int q_max = 0, rh_max = 0, degenerate = 0;
    for (int trial = 0; trial < 300; ++trial) {
        ReductionData d = trial % 2 ? random_plain_reduction(rng) : random_lie_reduction(rng);
        ReducedSpace red = reduced_space(d);
        Inertia e = inertia(d.e), g0 = d.induced_inertia, r = inertia(red.space);
        c.check(r.p == e.p - g0.p - g0.k && r.q == e.q - g0.q - g0.k && r.k == 0,
                "E′ inertia " + str(r) + " from E " + str(e) + " g " + str(g0));
        c.check(red.q.dim() == d.e.dim() - d.g_dim(), "rank of Q(ℜ)");
        c.check(q_maximal(d) == red.q.is_maximal(), "q_maximal disagrees with classification");
        q_max += q_maximal(d);
        degenerate += g0.k > 0;
        if (trial % 2 == 0) {
            SubReduction s = sub_reduce(d, random_subalgebra(rng, d.g));
            c.check(rh_maximal(s) == s.rh.is_maximal(), "rh_maximal disagrees with classification");
            rh_max += rh_maximal(s);
        }
        c.count_case();
    }
    c.note("q_maximal true in " + std::to_string(q_max) + ", rh_maximal true in " + std::to_string(rh_max) +
           ", degenerate pairing in " + std::to_string(degenerate));
    c.check(q_max > 0 && q_max < 300 && rh_max > 0 && rh_max < 150, "maximality flags never vary");
}

void golden_pipeline(Criterion& c) {
    ReductionData d = so3_pair_reduction();
    c.check(d.induced_inertia == (Inertia{3, 3, 0}), "induced inertia " + str(d.induced_inertia));
    SubReduction s = sub_reduce(d, first_block(6, 3));
    QrComposition qr = compose_qr(d, s);
    c.check(s.q0.is_maximal(), "Q(ℜ0) not maximal isotropic");
    c.check(s.rh.is_maximal(), "R(H) not maximal isotropic");
    c.check(qr.equals_q, "R(H)∘Q(ℜ0) ≠ Q(ℜ)");
    c.check(qr.composite == s.full.q, "composite differs from Q(ℜ)");
    c.check(!s.full.q.is_maximal(), "Q(ℜ) classified maximal");
    c.note("induced inertia " + str(d.induced_inertia) + ", dim Q(ℜ) = " + std::to_string(s.full.q.dim()) + " in " +
           std::to_string(s.full.q.ambient().dim()));
    c.count_case();
}

void counterexample(Criterion& c) {
    const QuadraticLieAlgebra h = so3_in_so4_source(), g = so4();
    const Matrix i = so3_in_so4();
    LinearRelation gr = LinearRelation::graph_of(h.space(), g.space(), i);
    c.check(inertia(gr.ambient()) == (Inertia{6, 3, 0}), "h × ḡ inertia " + str(inertia(gr.ambient())));
    c.check(gr.dim() == 3 && gr.is_maximal(), "gr(i) not a 3-dim maximal isotropic");

    Connection nh = Connection::adjoint(h), ng = Connection::adjoint(g);
    bool cartan = true;
    CovariantTensor th = torsion(nh);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t e = 0; e < 3; ++e) {
                Vector x = unit_vector(3, a), y = unit_vector(3, b), z = unit_vector(3, e);
                cartan = cartan && th({x, y, z}) == 2 * h.pair(h.bracket(x, y), z);
            }
    c.check(cartan, "adjoint torsion ≠ 2χ");
    c.check(related_connections(nh, ng, gr).related, "adjoint connections not related");
    c.check(tensor_related(th, torsion(ng), gr), "adjoint torsions not related");
    c.check(tensor_related(riemann(nh), riemann(ng), gr), "adjoint curvatures not related");

    const Rational s(3);
    PerturbationData p = so4_perturbation(s);
    Connection nbar = perturb(g, p);
    c.check(related_connections(nh, nbar, gr).related, "perturbed pair not related");
    c.check(tensor_related(th, torsion(nbar), gr), "perturbed torsions not related");
    c.check(!tensor_related(riemann(nh), riemann(nbar), gr), "perturbed curvatures still related");

    Connection prod = product_connection(nh, nbar);
    CovariantTensor r = riemann(prod);
    Vector x = unit_vector(3, 0), y = unit_vector(3, 1);
    Vector gx = concat(x, i * x), gy = concat(y, i * y);
    Vector k0 = k0_value(p, x, y);
    Rational k0k0 = g.pair(k0, k0);
    Vector kbar = kmap_value(prod, gx, gy);
    Rational kk = prod.algebra().pair(kbar, kbar);
    Rational value = r({gx, gy, gx, gy});
    c.note("s = " + to_string(s) + ", <k0,k0> = " + to_string(k0k0) + ", <K̄,K̄> = " + to_string(kk));
    c.note("R((x,ix),(y,iy),(x,ix),(y,iy)) = " + to_string(value) + ", target -<k0,k0> = " + to_string(-k0k0));
    c.check(kk == -k0k0, "<K̄,K̄> ≠ -<k0,k0>");
    c.check(value != 0, "curvature value is zero");
    c.check(value == -k0k0, "R = " + to_string(value) + " but -<k0,k0> = " + to_string(-k0k0));
    c.count_case();
}

void generalized_metrics(Criterion& c) {
    std::mt19937 rng(1008);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 10));
        auto rs = random_space(rng, n);
        Involution t = split_involution(rs.space);
        c.check(t.tau() * t.tau() == Matrix::identity(n), "τ² ≠ 1");
        Matrix gm = t.metric(rs.space);
        bool pd = gm.is_symmetric();
        for (std::size_t k = 1; k <= n && pd; ++k) pd = determinant(leading_block(gm, k)) > 0;
        c.check(pd, "<·,τ·> not positive definite");
        c.check(t.plus_space().dim() == inertia(rs.space).p, "dim V+ ≠ p");
        Matrix a = random_invertible(rng, n);
        auto ft = polar_involution(rs.space, a.transpose() * a);
        const long ln = static_cast<long>(n);
        c.check(ft.plus_dim == t.plus_space().dim(), "polar eigenspace dimension");
        c.check((ft.tau * ft.tau - Eigen::MatrixXd::Identity(ln, ln)).norm() < kPolarTol, "polar τ² ≠ 1 within tol");
        c.count_case();
    }
    int composed = 0, isometric = 0, kernel_rejected = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_space(rng, static_cast<std::size_t>(uniform(rng, 1, 3)));
        auto x = random_space(rng, static_cast<std::size_t>(uniform(rng, 1, 3)));
        QuadraticSpace b = direct_sum(a.space, x.space);
        Involution ta = split_involution(a.space);
        Involution tb(b, block_diag(ta.tau(), split_involution(x.space).tau()));
        Subspace k1 = random_tau_invariant(rng, a.space);
        Matrix incl = vstack(Matrix::identity(a.space.dim()), Matrix(x.space.dim(), a.space.dim()));
        Matrix f = random_tau_isometry(rng, b, tb);
        LinearRelation r1 = LinearRelation::from_span(a.space, b, hstack(k1.basis(), k1.basis().map_rows(f * incl)));
        LinearRelation r2 = LinearRelation::graph_of(b, b, random_tau_isometry(rng, b, tb));
        if (isometry_check(r1, ta, tb) && isometry_check(r2, tb, tb)) {
            ++composed;
            LinearRelation r21 = compose_relation(r2, r1);
            c.check(isometry_check(r21, ta, tb), "composite of isometries is not an isometry");
            c.check(graph_decompose(r21, ta, tb).k1 == k1, "composite domain");
        }
        // every isometry misses 0 × E2, and a relation meeting it is never an isometry
        LinearRelation rr = random_relation(rng, a, a, rng() % 2);
        Involution t = split_involution(a.space);
        const bool iso = isometry_check(rr, t, t);
        if (iso) ++isometric;
        if (!rr.target_kernel().is_zero()) {
            ++kernel_rejected;
            c.check(!iso, "isometry meeting 0 × E2");
        }
        if (iso) c.check(rr.target_kernel().is_zero(), "isometry meeting 0 × E2");
        c.count_case();
    }
    c.check(composed > 100 && kernel_rejected > 20, "too few composable or obstructed instances");
    for (std::size_t m = 1; m <= 3; ++m) {
        ReductionData d = padded_reduction(StructureTensor(2 * m), QuadraticSpace::hyperbolic(m).gram(), 1);
        Subspace u = first_block(2 * m, m);
        std::vector<Vector> rows;
        for (std::size_t j = m; j < 2 * m; ++j) rows.push_back(unit_vector(2 * m, j));
        Subspace v = Subspace::span(2 * m, Matrix::from_rows(rows, 2 * m));
        PlRelation pl = pl_relation(d, u, v);
        Involution tp = split_involution(pl.first.full.space);
        Involution t0 = metric_transport(pl.first, tp), t1 = metric_transport(pl.second, tp);
        c.check(isometry_check(pl.relation, t0, t1), "τ′0, τ′1 not PL-isometric");
        c.check(isometry_check(transpose(pl.relation), t1, t0), "transposed PL relation not isometric");
        c.check(pl.relation.is_lagrangian(), "PL relation not Lagrangian");
        c.count_case();
    }
    c.note(std::to_string(composed) + " composed isometries, " + std::to_string(isometric) + " random isometries, " +
           std::to_string(kernel_rejected) + " relations meeting 0 × E2");
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* title;
        double budget;
        void (*body)(Criterion&);
    };
    const Entry entries[] = {
        {1, "inertia additivity", kInertiaBudget, inertia_additivity},
        {2, "coisotropic reduction", 0, coisotropic_reduction},
        {3, "relation calculus", 0, relation_calculus},
        {4, "Dorfman functor", 0, dorfman_functor},
        {5, "reduction signatures", 0, reduction_signatures},
        {6, "so(3)⊕so(3) reduction pipeline", kGoldenBudget, golden_pipeline},
        {7, "o(4)/o(3) curvature counterexample", kGoldenBudget, counterexample},
        {8, "generalized metrics", 0, generalized_metrics},
    };
    int failed = 0;
    for (const auto& e : entries) {
        Criterion c(e.id, e.title, e.budget);
        if (!c.run(e.body)) ++failed;
    }
    std::cout << (failed ? std::to_string(failed) + " of 8 criteria failed" : std::string("all 8 criteria passed")) << "\n";
    return failed ? 1 : 0;
}
