#include "dsq/opcore.hpp"
#include "dsq/sl2reps.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dsq;

namespace {

Mat random_matrix(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    Mat m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = {d(rng), d(rng)};
    return m;
}

} // namespace

TEST(Basis, HalfIntegerLevels)
{
    BasisDescriptor b(3);
    EXPECT_EQ(b.num_levels(), 6);
    EXPECT_EQ(b.dim(), 12);
    EXPECT_DOUBLE_EQ(b.level(0), -2.5);
    EXPECT_DOUBLE_EQ(b.max_level(), 2.5);
    EXPECT_EQ(b.level_index(0.5), 3);
    EXPECT_EQ(b.level_index(3.5), -1);
    EXPECT_EQ(b.index(2, 1), 5);
}

TEST(Basis, IntegerLevels)
{
    BasisDescriptor b(2, 1, Lattice::Integer);
    EXPECT_EQ(b.num_levels(), 5);
    EXPECT_DOUBLE_EQ(b.level(0), -2.0);
    EXPECT_EQ(b.level_index(0.0), 2);
}

TEST(TruncatedOperator, RejectsEntriesOutsideBand)
{
    BasisDescriptor b(2);
    Mat m = Mat::Zero(b.dim(), b.dim());
    m(0, 0) = 1.0;
    EXPECT_THROW(TruncatedOperator(b, m, 1), std::invalid_argument);
    EXPECT_NO_THROW(TruncatedOperator(b, m, 0));
    EXPECT_THROW(TruncatedOperator(b, Mat::Zero(3, 3)), std::invalid_argument);
}

TEST(TruncatedOperator, ShiftDegreesAdd)
{
    BasisDescriptor b(4);
    const TruncatedOperator u = shift_operator(b);
    EXPECT_EQ(u.shift_degree(), 1);
    EXPECT_EQ((u * u).shift_degree(), 2);
    EXPECT_EQ((u * adjoint(u)).shift_degree(), 0);
    EXPECT_EQ(shift_power(u, -2).shift_degree(), -2);
}

TEST(TruncatedOperator, ShiftIsUnitaryOnInterior)
{
    BasisDescriptor b(6);
    const TruncatedOperator u = shift_operator(b);
    const TruncatedOperator one = TruncatedOperator::identity(b);
    EXPECT_LE(interior_residual(u * adjoint(u) - one, 1), 1e-15);
    // the truncation edge is where u fails to be unitary
    EXPECT_GT(op_norm(u * adjoint(u) - one), 0.5);
}

TEST(InteriorProjector, MarginMustBeBelowNmax)
{
    BasisDescriptor b(3);
    EXPECT_THROW(InteriorProjector(b, 3), std::invalid_argument);
    InteriorProjector p(b, 1);
    EXPECT_EQ(p.interior_levels().size(), 4u);
    EXPECT_FALSE(p.contains_level(0));
    EXPECT_TRUE(p.contains_level(1));
}

TEST(Operators, JacobiIdentity)
{
    std::mt19937_64 rng(11);
    BasisDescriptor b(3);
    for (int t = 0; t < 5; ++t) {
        TruncatedOperator x(b, random_matrix(b.dim(), rng)), y(b, random_matrix(b.dim(), rng)), z(b, random_matrix(b.dim(), rng));
        const TruncatedOperator j = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) + commutator(z, commutator(x, y));
        EXPECT_LE(op_norm(j), 1e-12 * op_norm(x) * op_norm(y) * op_norm(z));
    }
}

TEST(Operators, OpNormOfDiagonal)
{
    Mat d = Mat::Zero(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = cplx(0.0, -5.0);
    d(2, 2) = 1.0;
    EXPECT_NEAR(op_norm(d), 5.0, 1e-14);
    EXPECT_NEAR(frobenius_norm(TruncatedOperator(BasisDescriptor::plain(3), d)), std::sqrt(30.0), 1e-14);
}

TEST(Bch, MatchesConjugationSeries)
{
    // sum_k t^k term_k equals e^{t iH} f e^{-t iH} up to O(t^{K+1})
    std::mt19937_64 rng(5);
    BasisDescriptor b(3);
    Mat h = random_matrix(b.dim(), rng);
    h = 0.5 * (h - h.adjoint().eval());
    const TruncatedOperator ih(b, h), f(b, random_matrix(b.dim(), rng));
    const auto terms = bch_terms(ih, f, 6);
    auto err = [&](double t) {
        Mat sum = Mat::Zero(b.dim(), b.dim());
        for (int k = 0; k <= 6; ++k) sum += std::pow(t, k) * terms[k].matrix();
        return (sum - expm(t * h) * f.matrix() * expm(-t * h)).norm();
    };
    EXPECT_LE(err(1e-3), 1e-12);
    // the remainder is O(t^7): doubling t multiplies it by 2^7
    EXPECT_NEAR(err(2e-2) / err(1e-2), 128.0, 10.0);
    EXPECT_THROW(bch_terms(ih, f, -1), std::invalid_argument);
}

TEST(Bch, OrderKScalesAsLambdaToTheK)
{
    std::mt19937_64 rng(8);
    BasisDescriptor b(2);
    const TruncatedOperator ih(b, random_matrix(b.dim(), rng)), f(b, random_matrix(b.dim(), rng));
    const auto a = bch_terms(ih, f, 4);
    const auto c = bch_terms(2.0 * ih, f, 4);
    for (int k = 0; k <= 4; ++k) EXPECT_LE(op_norm(c[k] - std::pow(2.0, k) * a[k]), 1e-10 * (1.0 + op_norm(c[k])));
}

TEST(Antilinear, ComposeAndIntertwine)
{
    std::mt19937_64 rng(3);
    BasisDescriptor b(2);
    const AntilinearOperator c(b, random_matrix(b.dim(), rng));
    const TruncatedOperator a(b, random_matrix(b.dim(), rng));
    Vec v(b.dim());
    for (int k = 0; k < b.dim(); ++k) v(k) = {double(k) - 1.5, 0.25 * k};
    EXPECT_LE((c.after(a).apply(v) - c.apply(a.matrix() * v)).norm(), 1e-12);
    EXPECT_LE((c.before(a).apply(v) - a.matrix() * c.apply(v)).norm(), 1e-12);
    EXPECT_LE((c.compose(c).matrix() * v - c.apply(c.apply(v))).norm(), 1e-12);
    // C 1 = 1 C for any C
    EXPECT_LE(op_norm(antilinear_intertwining(c, TruncatedOperator::identity(b), TruncatedOperator::identity(b))), 1e-14);
}

// ---- sl2 -------------------------------------------------------------------

TEST(Ladder, CoefficientValues)
{
    EXPECT_DOUBLE_EQ(ladder_coefficient_sq(0.5, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(ladder_coefficient_sq(-0.5, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(ladder_coefficient_sq(2.5, -1.0), 8.0);
}

TEST(Ladder, RecursionHolds)
{
    for (double r : {-0.2, 0.0, 0.25, 1.0, 4.0}) EXPECT_LE(verify_ladder_recursion(r, weight_range(-9.5, 9.5)), 1e-14);
}

TEST(Ladder, CorruptedCoefficientFails)
{
    auto bad = [](double n, double r) { return (n + 0.5) * (n + 0.5) + r + 0.01 * n * n; };
    EXPECT_GT(verify_ladder_recursion(1.0, weight_range(-3.5, 3.5), bad), 1e-3);
}

TEST(Classify, PaperExamples)
{
    EXPECT_EQ(classify({1.0, Lattice::HalfInteger}).kind, SeriesKind::PrincipalHalfInteger);
    EXPECT_EQ(classify({1.0, Lattice::Integer}).kind, SeriesKind::PrincipalInteger);
    EXPECT_EQ(classify({-0.1, Lattice::Integer}).kind, SeriesKind::Complementary);
    const SeriesClass d = classify({-1.0, Lattice::HalfInteger});
    EXPECT_EQ(d.kind, SeriesKind::DiscreteBoundedBelow);
    EXPECT_DOUBLE_EQ(d.n0, 0.5);
    EXPECT_DOUBLE_EQ(d.n0_above, -1.5);
}

TEST(Classify, EdgeValues)
{
    EXPECT_EQ(classify({-0.1, Lattice::HalfInteger}).kind, SeriesKind::Invalid);
    EXPECT_EQ(classify({-0.5, Lattice::Integer}).kind, SeriesKind::Invalid);
    EXPECT_EQ(classify({0.0, Lattice::HalfInteger}).kind, SeriesKind::DiscreteBoundedBelow);
    EXPECT_EQ(classify({0.0, Lattice::Integer}).kind, SeriesKind::Complementary);
    const SeriesClass q = classify({-0.25, Lattice::Integer});
    EXPECT_EQ(q.kind, SeriesKind::DiscreteBoundedBelow);
    EXPECT_DOUBLE_EQ(q.n0, 0.0);
    EXPECT_EQ(classify({std::nan(""), Lattice::Integer}).kind, SeriesKind::Invalid);
}

TEST(Classify, DiscretePointsUpToSevenHalves)
{
    for (double n0 : {0.5, 1.5, 2.5, 3.5}) {
        const SeriesClass c = classify({-(n0 + 0.5) * (n0 + 0.5), Lattice::HalfInteger});
        EXPECT_TRUE(c.is_discrete());
        EXPECT_DOUBLE_EQ(c.n0, n0);
    }
    for (double n0 : {0.0, 1.0, 2.0, 3.0}) {
        const SeriesClass c = classify({-(n0 + 0.5) * (n0 + 0.5), Lattice::Integer});
        EXPECT_TRUE(c.is_discrete());
        EXPECT_DOUBLE_EQ(c.n0, n0);
    }
}

TEST(Classify, LocallyConstantAwayFromBreakpoints)
{
    // breakpoints: 0, -1/4 and the discrete points
    for (Lattice lat : {Lattice::Integer, Lattice::HalfInteger})
        for (double r : {-3.0, -1.7, -0.6, -0.16, -0.03, 0.4, 2.0}) {
            const auto k = classify({r, lat}).kind;
            EXPECT_EQ(classify({r + 1e-7, lat}).kind, k);
            EXPECT_EQ(classify({r - 1e-7, lat}).kind, k);
        }
}

TEST(Generators, RelationsOnInterior)
{
    for (auto rep : {RepParams{1.0, Lattice::HalfInteger}, RepParams{-0.1, Lattice::Integer}, RepParams{0.0, Lattice::Integer}}) {
        const Sl2Generators g = build_generators(rep, 8);
        EXPECT_LE(interior_residual(commutator(g.t21, g.t_plus) - I * g.t_plus, 1), 1e-12);
        EXPECT_LE(interior_residual(commutator(g.t21, g.t_minus) + I * g.t_minus, 1), 1e-12);
        EXPECT_LE(interior_residual(commutator(g.t_plus, g.t_minus) + cplx(0.0, 2.0) * g.t21, 1), 1e-12);
        EXPECT_LE(op_norm(adjoint(g.t21) + g.t21), 0.0);
        EXPECT_LE(interior_residual(adjoint(g.t_plus) + g.t_minus, 1), 1e-14);
        const TruncatedOperator c = casimir(g);
        EXPECT_LE(interior_residual(c - (0.25 + rep.r2m2) * TruncatedOperator::identity(c.basis()), 1), 1e-12);
    }
}

TEST(Generators, PhasesKeepRelations)
{
    const RepParams rep{2.0, Lattice::HalfInteger};
    std::vector<cplx> ph;
    for (int k = 0; k < 12; ++k) ph.push_back(std::exp(I * (0.3 * k * k)));
    const Sl2Generators g = build_generators(rep, 6, ph);
    EXPECT_LE(interior_residual(commutator(g.t_plus, g.t_minus) + cplx(0.0, 2.0) * g.t21, 1), 1e-12);
    EXPECT_THROW(build_generators(rep, 6, {cplx(1.0)}), std::invalid_argument);
}

TEST(Generators, RefusesDiscreteAndInvalid)
{
    EXPECT_THROW(build_generators({-1.0, Lattice::HalfInteger}, 6), std::invalid_argument);
    EXPECT_THROW(build_generators({-0.1, Lattice::HalfInteger}, 6), std::invalid_argument);
}

TEST(Generators, TPlusEntriesAreLadderCoefficients)
{
    const Sl2Generators g = build_generators({1.0, Lattice::HalfInteger}, 4);
    const BasisDescriptor& b = g.t_plus.basis();
    for (int li = 0; li + 1 < b.num_levels(); ++li) {
        const double n = b.level(li);
        EXPECT_NEAR(std::norm(g.t_plus.block(li + 1, li)(0, 0)), (n + 0.5) * (n + 0.5) + 1.0, 1e-13);
    }
}
