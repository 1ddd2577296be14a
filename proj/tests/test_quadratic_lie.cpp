#include <gtest/gtest.h>

#include <random>

#include "courant/quadratic_lie.hpp"
#include "lie_models.hpp"
#include "oracle.hpp"

using namespace courant;
using namespace testing_models;

namespace {

/// so(3) as 3x3 matrices e1 = L23, e2 = L31, e3 = L21 (independent of the tensor code).
std::vector<Matrix> so3_matrices() {
    auto l = [](std::size_t a, std::size_t b) {
        Matrix m(3, 3);
        m(a, b) = 1;
        m(b, a) = -1;
        return m;
    };
    return {l(1, 2), l(2, 0), l(1, 0)};
}

/// Coordinates of a matrix in a list of linearly independent matrices.
Vector coords(const std::vector<Matrix>& basis, const Matrix& x) {
    std::vector<Vector> rows;
    for (const auto& b : basis) rows.push_back(b.entries());
    Vector c;
    EXPECT_TRUE(row_combination(Matrix::from_rows(rows, x.entries().size()), x.entries(), c));
    return c;
}

/// Killing form from ad matrices of the matrix realization.
Matrix killing_from_matrices(const std::vector<Matrix>& basis) {
    const std::size_t n = basis.size();
    std::vector<Matrix> ads;
    for (const auto& x : basis) {
        Matrix ad(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            Vector c = coords(basis, x * basis[j] - basis[j] * x);
            for (std::size_t i = 0; i < n; ++i) ad(i, j) = c[i];
        }
        ads.push_back(ad);
    }
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Matrix p = ads[i] * ads[j];
            for (std::size_t a = 0; a < n; ++a) k(i, j) += p(a, a);
        }
    return k;
}

/// h = so(3) with the form restricted from the Killing form of so(4).
QuadraticLieAlgebra h_in_so4() {
    Matrix i = so3_in_so4();
    return QuadraticLieAlgebra(QuadraticSpace(i.transpose() * so4().gram() * i), so3_structure());
}

}  // namespace

TEST(Validate, So3Passes) {
    auto rep = so3().validate();
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.axioms[0].status, AxiomStatus::vacuous);
    EXPECT_EQ(so3().gram(), Rational(-2) * Matrix::identity(3));
    // the structure constants match the matrix commutators
    auto m = so3_matrices();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_EQ(coords(m, m[i] * m[j] - m[j] * m[i]), so3().bracket(unit_vector(3, i), unit_vector(3, j)));
}

TEST(Validate, ScaledAxisBreaksInvariance) {
    auto rep = validate_qla(so3_structure(), Matrix::diagonal({1, 1, 2}));
    EXPECT_FALSE(rep.ok());
    const AxiomResult* f = rep.first_failure();
    ASSERT_NE(f, nullptr);
    EXPECT_EQ(f->name, "C3");
    // the witness triple really violates invariance
    Vector x = unit_vector(3, f->witness[0]), y = unit_vector(3, f->witness[1]), z = unit_vector(3, f->witness[2]);
    Matrix g = Matrix::diagonal({1, 1, 2});
    auto c = so3_structure();
    EXPECT_NE(bilinear(c.bracket(x, y), g, z) + bilinear(y, g, c.bracket(x, z)), 0);
    EXPECT_THROW(QuadraticLieAlgebra(QuadraticSpace(g), c), InvalidObject);
    EXPECT_NO_THROW(QuadraticLieAlgebra(QuadraticSpace(g), c, Unchecked{}));
}

TEST(Validate, AbelianPasses) {
    std::mt19937 rng(1);
    auto rs = random_space(rng, 4);
    EXPECT_TRUE(validate_qla(StructureTensor(4), rs.space.gram()).ok());
}

TEST(Validate, JacobiAndAntisymmetryFailures) {
    StructureTensor c(3);
    c(0, 1, 2) = 1;  // not antisymmetric
    auto rep = validate_qla(c, Matrix::identity(3));
    EXPECT_EQ(rep.axioms[3].status, AxiomStatus::failed);
    StructureTensor bad(3);  // [e1,e2] = e3, [e1,e3] = e1: the Jacobiator of (e1,e2,e3) is e3
    bad(0, 1, 2) = 1, bad(1, 0, 2) = -1;
    bad(0, 2, 0) = 1, bad(2, 0, 0) = -1;
    EXPECT_EQ(check_jacobi(bad).status, AxiomStatus::failed);
}

TEST(Killing, So3AgainstAdMatrices) {
    EXPECT_EQ(killing(so3_structure()), killing_from_matrices(so3_matrices()));
    EXPECT_EQ(killing(so3_structure()), Rational(-2) * Matrix::identity(3));
}

TEST(Killing, AbelianIsZero) { EXPECT_TRUE(killing(StructureTensor(3)).is_zero()); }

TEST(Killing, So4SplitBasisIsBlockDiagonal) {
    StructureTensor split = change_basis(so_structure(4), so4_split_basis());
    Matrix k = killing(split);
    EXPECT_EQ(k, Rational(-2) * Matrix::identity(6));
    // each block is so(3) with the standard relations
    EXPECT_EQ(restrict_structure(split, Matrix::from_rows({unit_vector(6, 0), unit_vector(6, 1), unit_vector(6, 2)}, 6)),
              so3_structure());
    EXPECT_EQ(restrict_structure(split, Matrix::from_rows({unit_vector(6, 3), unit_vector(6, 4), unit_vector(6, 5)}, 6)),
              so3_structure());
    // L_ab basis: Killing = 2 tr(XY) = −4 I
    EXPECT_EQ(so4().gram(), Rational(-4) * Matrix::identity(6));
}

TEST(Subalgebra, LineInSo3) {
    EXPECT_TRUE(is_subalgebra(so3_structure(), Subspace::span(3, Matrix{{0, 0, 1}})));
    EXPECT_FALSE(is_subalgebra(so3_structure(), Subspace::span(3, Matrix{{1, 0, 0}, {0, 1, 0}})));
}

TEST(Subalgebra, CenterOfSo3IsTrivial) {
    Subspace z = centralizer(so3_structure(), Subspace::full(3));
    EXPECT_TRUE(z.is_zero());
    // oracle: solve [e_i, v] = 0 directly
    oracle::Rows eqs;
    auto c = so3_structure();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            oracle::Vec row(3);
            for (std::size_t j = 0; j < 3; ++j) row[j] = c(i, j, k);
            eqs.push_back(row);
        }
    EXPECT_TRUE(oracle::kernel(eqs, 3).empty());
}

TEST(Subalgebra, InvariantsOfFirstFactor) {
    StructureTensor g = direct_sum(so3_structure(), so3_structure());
    Subspace h = Subspace::span(6, Matrix::from_rows({unit_vector(6, 0), unit_vector(6, 1), unit_vector(6, 2)}, 6));
    Subspace second = Subspace::span(6, Matrix::from_rows({unit_vector(6, 3), unit_vector(6, 4), unit_vector(6, 5)}, 6));
    EXPECT_EQ(invariants(g, h, Subspace::full(6)), second);
}

TEST(Involutive, GraphOfSo3InSo4IsDirac) {
    QuadraticLieAlgebra h = h_in_so4();
    QuadraticLieAlgebra g = so4();
    QuadraticLieAlgebra hg = product(h, g, true);
    EXPECT_EQ(inertia(hg.space()), (Inertia{6, 3, 0}));
    Subspace gr = lie_graph(so3_in_so4());
    EXPECT_EQ(gr.dim(), 3u);
    auto r = involutive_structure_check(hg, gr);
    EXPECT_TRUE(r.involutive);
    EXPECT_TRUE(r.dirac);
}

TEST(Involutive, DefiniteFormsHaveNoInvolutiveSubalgebras) {
    auto r = involutive_structure_check(so3(), Subspace::span(3, Matrix{{0, 0, 1}}));
    EXPECT_FALSE(r.isotropic);
    EXPECT_TRUE(r.closed);
    EXPECT_FALSE(r.involutive);
    ASSERT_TRUE(r.isotropy_witness.has_value());
    EXPECT_NE(so3().pair(r.isotropy_witness->first, r.isotropy_witness->second), 0);
}

TEST(CaRelation, DiagonalAndInclusion) {
    std::mt19937 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        StructureTensor c = random_lie_algebra(rng);
        QuadraticLieAlgebra e = df(c).algebra;
        EXPECT_TRUE(ca_relation_check(e, e, LinearRelation::diagonal(e.space())).ok);
    }
    QuadraticLieAlgebra h = h_in_so4(), g = so4();
    LinearRelation gr = LinearRelation::graph_of(h.space(), g.space(), so3_in_so4());
    EXPECT_TRUE(ca_relation_check(h, g, gr).ok);
}

TEST(CaRelation, NonSubalgebraHasWitness) {
    QuadraticLieAlgebra e = df(so3_structure()).algebra;
    QuadraticLieAlgebra pt(QuadraticSpace(Matrix(0, 0)), StructureTensor(0));
    LinearRelation l = to_point(e.space(), Subspace::span(6, Matrix{{1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}}));
    auto r = ca_relation_check(e, pt, l);
    EXPECT_FALSE(r.ok);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_FALSE(l.graph().contains(r.witness->bracket));
}

TEST(Morphism, IdentityScalingAndInclusion) {
    QuadraticLieAlgebra e = so3();
    EXPECT_TRUE(classical_morphism_check(e, e, {Matrix::identity(3)}).ok());
    auto scaled = classical_morphism_check(e, e, {Rational(2) * Matrix::identity(3)});
    EXPECT_FALSE(scaled.ok());
    EXPECT_FALSE(scaled.preserves_pairing);
    EXPECT_THROW(LinearRelation::graph_of(e.space(), e.space(), Rational(2) * Matrix::identity(3)), IsotropyViolation);
    auto inc = classical_morphism_check(h_in_so4(), so4(), {so3_in_so4()});
    EXPECT_TRUE(inc.ok());
}

TEST(Product, HyperbolicSignatureFromDefiniteLine) {
    QuadraticLieAlgebra e = abelian(1);
    EXPECT_EQ(inertia(product(e, e, true).space()), (Inertia{1, 1, 0}));
    EXPECT_EQ(inertia(product(e, e, false).space()), (Inertia{2, 0, 0}));
}

TEST(Product, InvolutiveStructuresMultiply) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        StructureTensor c1 = random_lie_algebra(rng, 3), c2 = random_lie_algebra(rng, 3);
        DorfmanDouble d1 = df(c1), d2 = df(c2);
        Subspace k1 = generated_subalgebra(c1, random_subspace(rng, c1.dim(), 1));
        Subspace k2 = generated_subalgebra(c2, random_subspace(rng, c2.dim(), 1));
        Subspace l1 = dirac_of_subalgebra(d1, k1), l2 = dirac_of_subalgebra(d2, k2);
        QuadraticLieAlgebra prod = product(d1.algebra, d2.algebra, false);
        EXPECT_TRUE(involutive_structure_check(prod, product(l1, l2)).involutive);
    }
}

TEST(Product, DiracTimesDiracNeedNotBeDirac) {
    QuadraticLieAlgebra e1(QuadraticSpace::diagonal({1, -1, -1}), StructureTensor(3));
    QuadraticLieAlgebra e2(QuadraticSpace::diagonal({1, 1, -1}), StructureTensor(3));
    Subspace l1 = Subspace::span(3, Matrix{{1, 1, 0}}), l2 = Subspace::span(3, Matrix{{1, 0, 1}});
    EXPECT_TRUE(involutive_structure_check(e1, l1).dirac);
    EXPECT_TRUE(involutive_structure_check(e2, l2).dirac);
    QuadraticLieAlgebra prod = product(e1, e2, false);
    EXPECT_EQ(inertia(prod.space()), (Inertia{3, 3, 0}));
    auto r = involutive_structure_check(prod, product(l1, l2));
    EXPECT_TRUE(r.involutive);
    EXPECT_FALSE(r.dirac);
}

TEST(Morphism, GraphCriterionAndComposition) {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        StructureTensor c = random_lie_algebra(rng, 3);
        DorfmanDouble d = df(c);
        const std::size_t n = c.dim();
        // automorphisms of the double: lifts of Lie algebra automorphisms, e.g. exp-free choices:
        // identity, −1 on the dual shift, and random F̂ for abelian algebras
        Matrix f = c.is_abelian() ? random_invertible(rng, n) : Matrix::identity(n);
        Matrix fhat = dorfman_lift(f);
        LieMap m{fhat};
        auto chk = classical_morphism_check(d.algebra, d.algebra, m);
        EXPECT_TRUE(chk.ok());
        LinearRelation gr = LinearRelation::graph_of(d.algebra.space(), d.algebra.space(), fhat);
        EXPECT_EQ(chk.ok(), ca_relation_check(d.algebra, d.algebra, gr).ok);
        LinearRelation gr2 = LinearRelation::graph_of(d.algebra.space(), d.algebra.space(), fhat * fhat);
        EXPECT_EQ(compose_relation(gr, gr), gr2);
        // a map that preserves the pairing but not the bracket
        if (!c.is_abelian()) {
            Matrix g = dorfman_lift(random_invertible(rng, n));
            auto bad = classical_morphism_check(d.algebra, d.algebra, {g});
            LinearRelation grg = LinearRelation::graph_of(d.algebra.space(), d.algebra.space(), g);
            EXPECT_EQ(bad.ok(), ca_relation_check(d.algebra, d.algebra, grg).ok);
        }
    }
}

TEST(CaRelation, BracketsOfRelatedPairsStayInside) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        StructureTensor c1 = random_lie_algebra(rng, 3), c2 = random_lie_algebra(rng, 3);
        DorfmanDouble d1 = df(c1), d2 = df(c2);
        Subspace k = random_lie_relation(rng, c1, c2);
        LinearRelation r = relation_of(d1, d2, k);
        ASSERT_TRUE(ca_relation_check(d1.algebra, d2.algebra, r).ok);
        const std::size_t n1 = d1.algebra.dim(), n2 = d2.algebra.dim();
        for (std::size_t i = 0; i < r.dim(); ++i)
            for (std::size_t j = 0; j < r.dim(); ++j) {
                Vector a = r.graph().basis_vector(i), b = r.graph().basis_vector(j);
                Vector first = d1.algebra.bracket(slice(a, 0, n1), slice(b, 0, n1));
                Vector second = d2.algebra.bracket(slice(a, n1, n2), slice(b, n1, n2));
                EXPECT_TRUE(r.graph().contains(concat(first, second)));
            }
    }
}

TEST(CaRelation, ClosedUnderComposition) {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        StructureTensor c1 = random_lie_algebra(rng, 3), c2 = random_lie_algebra(rng, 3), c3 = random_lie_algebra(rng, 3);
        DorfmanDouble d1 = df(c1), d2 = df(c2), d3 = df(c3);
        LinearRelation r1 = relation_of(d1, d2, random_lie_relation(rng, c1, c2));
        LinearRelation r2 = relation_of(d2, d3, random_lie_relation(rng, c2, c3));
        EXPECT_TRUE(ca_relation_check(d1.algebra, d3.algebra, compose_relation(r2, r1)).ok);
    }
}
