#include "dsq/desitter.hpp"
#include "dsq/oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dsq;
using namespace dsq::oracle;

namespace {

Mat2 diag_pm_i()
{
    Mat2 d = Mat2::Zero();
    d(0, 0) = I;
    d(1, 1) = -I;
    return d;
}

} // namespace

TEST(Geometry, Origin)
{
    const GeometryData g = geometry_at({0.0, 0.0, 1.0});
    EXPECT_NEAR(g.x[0], 0.0, 1e-15);
    EXPECT_NEAR(g.x[1], 1.0, 1e-15);
    EXPECT_NEAR(g.x[2], 0.0, 1e-15);
    EXPECT_NEAR((g.g - Eigen::Vector2d(-1.0, 1.0).asDiagonal().toDenseMatrix()).norm(), 0.0, 1e-15);
    EXPECT_NEAR(g.christoffel_theta_phiphi, 0.0, 1e-15);
    EXPECT_NEAR(g.christoffel_phi_thetaphi, 0.0, 1e-15);
}

TEST(Geometry, ChristoffelFrozen)
{
    // cosh(1) sinh(1)
    EXPECT_NEAR(geometry_at({1.0, 0.4, 1.0}).christoffel_theta_phiphi, 1.8134302039235093, 1e-13);
    EXPECT_NEAR(geometry_at({1.0, 0.4, 1.0}).christoffel_phi_thetaphi, 0.76159415595576489, 1e-14);
}

TEST(Geometry, RandomPoints)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> th(-2.0, 2.0), ph(0.0, 6.3), rr(0.3, 3.0);
    for (int k = 0; k < 50; ++k) {
        const ChartPoint p{th(rng), ph(rng), rr(rng)};
        const GeometryData g = geometry_at(p);
        const double r2 = -g.x[0] * g.x[0] + g.x[1] * g.x[1] + g.x[2] * g.x[2];
        EXPECT_NEAR(r2, p.radius * p.radius, 1e-12 * (1.0 + r2));
        EXPECT_NEAR(g.k_trace(), 2.0 / p.radius, 1e-9);
        const double c = std::cosh(p.theta);
        EXPECT_NEAR(g.g(0, 0), -p.radius * p.radius, 1e-12);
        EXPECT_NEAR(g.g(1, 1), p.radius * p.radius * c * c, 1e-11 * c * c);
        EXPECT_NEAR(g.g(0, 1), 0.0, 1e-12);
        EXPECT_LE((g.g * g.g_inv - Eigen::Matrix2d::Identity()).norm(), 1e-12);
    }
}

TEST(Symmetry, BracketsOnXSquared)
{
    const ChartPoint p{0.5, 1.0, 1.0};
    const auto x2 = default_test_functions(1.0)[3];
    ASSERT_EQ(x2.first, "x2");
    const SymmetryResiduals r = symmetry_checks(p, {x2});
    EXPECT_LE(r.l1, 1e-12);
    EXPECT_LE(r.l2, 1e-12);
    EXPECT_LE(r.l3, 1e-12);
}

TEST(Symmetry, ConstantFunction)
{
    const SymmetryResiduals r = symmetry_checks({0.7, 2.0, 1.5}, {default_test_functions(1.5)[0]});
    EXPECT_EQ(r.l1, 0.0);
    EXPECT_EQ(r.casimir, 0.0);
}

TEST(Symmetry, CasimirIsLaplacian)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> th(-1.5, 1.5), ph(0.0, 6.3), rr(0.5, 2.0);
    for (int k = 0; k < 20; ++k) {
        const ChartPoint p{th(rng), ph(rng), rr(rng)};
        const SymmetryResiduals r = symmetry_checks(p);
        EXPECT_LE(std::max({r.l1, r.l2, r.l3}), 1e-9);
        EXPECT_LE(r.casimir, 1e-9);
    }
}

TEST(Symmetry, ChristoffelLaplacianMatchesClosedForm)
{
    const ChartPoint p{0.8, 0.3, 1.7};
    const GeometryData geo = geometry_at(p);
    for (const auto& [name, fn] : default_test_functions(p.radius)) {
        const Jet2 f = fn(Jet2::variable(p.theta, 0), Jet2::variable(p.phi, 1));
        const cplx lap = geo.g_inv(0, 0) * f.h[0][0] + geo.g_inv(1, 1) * (f.h[1][1] - geo.christoffel_theta_phiphi * f.d[0]);
        EXPECT_NEAR(std::abs(lap - laplace_beltrami_closed(f, p.theta, p.radius)), 0.0, 1e-12) << name;
    }
}

TEST(Spin, BoostAndRotation)
{
    const SpinMatrices s0 = spin_matrices(0.0, 0.0);
    EXPECT_LE((s0.s_theta_phi - Mat2::Identity()).norm(), 1e-15);
    EXPECT_LE((spin_matrices(0.0, 2.0 * std::numbers::pi).s12 + Mat2::Identity()).norm(), 1e-15);
    const SpinMatrices s = spin_matrices(1.7, 0.9);
    EXPECT_NEAR(std::abs(s.s01.determinant() - 1.0), 0.0, 1e-14);
    EXPECT_LE((s.s_theta_phi * s.s_theta_phi.inverse() - Mat2::Identity()).norm(), 1e-14);
    EXPECT_LE((s.s_theta_phi - s.s12 * s.s01).norm(), 0.0);
}

TEST(Clifford, GammaAndFrame)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> th(-1.5, 1.5), ph(0.0, 6.3);
    const auto g = gammas();
    for (int k = 0; k < 100; ++k) {
        const double t = th(rng), p = ph(rng);
        const std::array<Mat2, 3> f{e0_frame(t, p), n_slash(t, p), e2_frame(p)};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double eta = a == b ? 2.0 * kEta[a] : 0.0;
                EXPECT_LE((g[a] * g[b] + g[b] * g[a] - eta * Mat2::Identity()).norm(), 1e-12);
                EXPECT_LE((f[a] * f[b] + f[b] * f[a] - eta * Mat2::Identity()).norm(), 1e-12);
            }
    }
}

TEST(Clifford, TransportConjugatesFrames)
{
    for (double t : {-0.9, 0.0, 0.6})
        for (double p : {0.0, 1.1, 4.0}) {
            const Mat2 s = values(transport(Jet2(t), Jet2(p)));
            const Mat2 si = values(transport_inverse(Jet2(t), Jet2(p)));
            EXPECT_LE((s * si - Mat2::Identity()).norm(), 1e-14);
            EXPECT_LE((s * gamma0() * si - e0_frame(t, p)).norm(), 1e-13);
            EXPECT_LE((s * gamma1() * si - n_slash(t, p)).norm(), 1e-13);
            EXPECT_LE((s * gamma2() * si - e2_frame(p)).norm(), 1e-13);
        }
}

TEST(Clifford, BProductSymmetry)
{
    // B is antihermitian; the slice form B(., e0 .) is hermitian
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (int k = 0; k < 10; ++k) {
        const Vec2 a(cplx(g(rng), g(rng)), cplx(g(rng), g(rng))), b(cplx(g(rng), g(rng)), cplx(g(rng), g(rng)));
        EXPECT_NEAR(std::abs(b_product(a, b) + std::conj(b_product(b, a))), 0.0, 1e-14);
        const Mat2 e0 = e0_frame(0.4, 1.0 + k);
        EXPECT_NEAR(std::abs(b_product(a, e0 * b) - std::conj(b_product(b, e0 * a))), 0.0, 1e-13);
    }
}

TEST(Dirac, IntrinsicMatchesExtrinsic)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> th(-1.2, 1.2), ph(0.0, 6.3), rr(0.5, 2.0);
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto d = dirac_pair(random_spinor_field(100 + k), {th(rng), ph(rng), rr(rng)});
        EXPECT_LE((d.intrinsic - d.extrinsic).norm(), 1e-9);
    }
    const auto tb = dirac_pair(t_basis(0.5, 0), {0.3, 1.2, 1.0});
    EXPECT_LE((tb.intrinsic - tb.extrinsic).norm(), 1e-9);
}

TEST(Dirac, ConstantSpinorAtEquator)
{
    const SpinorFieldFn c{[](const Jet2&, const Jet2&) -> Spinor2 { return {Jet2(cplx(1.0, 0.5)), Jet2(-0.3)}; }};
    const auto d = dirac_pair(c, {0.0, 0.7, 1.0});
    EXPECT_LE((d.intrinsic - d.extrinsic).norm(), 1e-12);
}

TEST(Dirac, Linear)
{
    const SpinorFieldFn f = random_spinor_field(7);
    const SpinorFieldFn f2{[f](const Jet2& a, const Jet2& b) -> Spinor2 {
        auto s = f.f(a, b);
        return {2.0 * s[0], 2.0 * s[1]};
    }};
    const auto a = dirac_pair(f, {0.4, 0.2, 1.0}), b = dirac_pair(f2, {0.4, 0.2, 1.0});
    EXPECT_LE((b.intrinsic - 2.0 * a.intrinsic).norm(), 1e-14);
    EXPECT_LE((b.extrinsic - 2.0 * a.extrinsic).norm(), 1e-14);
}

TEST(Jets, AgreeWithFiniteDifferences)
{
    const SpinorFieldFn f = random_spinor_field(9);
    const double h = 1e-4, t = 0.35, p = 2.1;
    EXPECT_LE((f.d_theta(t, p) - (f.value(t + h, p) - f.value(t - h, p)) / (2.0 * h)).norm(), 1e-6);
    EXPECT_LE((f.d_phi(t, p) - (f.value(t, p + h) - f.value(t, p - h)) / (2.0 * h)).norm(), 1e-6);
}

// ---- T basis -------------------------------------------------------------------

TEST(TBasis, T21Eigenvalue)
{
    for (double n : {-2.5, 0.5, 4.5})
        for (int s = 0; s < 2; ++s) {
            const TAction a = apply_T_grid(Generator::T21, n, s, 1.0, 0.3);
            EXPECT_NEAR(std::abs(a.coeffs(s) - I * n), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(a.coeffs(1 - s)), 0.0, 1e-12);
        }
}

TEST(TBasis, RSlashFlipsFiber)
{
    const TAction a = apply_T_grid(Generator::RSlash, 1.5, 0, 0.0, 0.0);
    EXPECT_NEAR(std::abs(a.coeffs(1) - I), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a.coeffs(0)), 0.0, 1e-12);
}

TEST(TBasis, E0Action)
{
    // e0|n,±> = ±i coshθ|n,±> ± i sinhθ|n,∓>
    const double th = 0.6;
    const Mat2 g = grid_block(Generator::E0, 0.5, 0.0, th);
    const Mat2 e = desitter::e0_tbasis(th);
    EXPECT_LE((g - e).norm(), 1e-12);
    EXPECT_NEAR(std::abs(g(0, 0) - I * std::cosh(th)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(g(1, 0) - I * std::sinh(th)), 0.0, 1e-12);
}

TEST(TBasis, TPlusFrozen)
{
    const TAction a = apply_T_grid(Generator::Tplus, 0.5, 0, 1.0, 0.0);
    EXPECT_DOUBLE_EQ(a.level, 1.5);
    EXPECT_NEAR(std::abs(a.coeffs(0) - cplx(0.0, -1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a.coeffs(1) + 1.0), 0.0, 1e-12);
}

TEST(TBasis, LeakageRaises)
{
    EXPECT_THROW(apply_T_grid(Generator::DTheta, 0.5, 0, 1.0, 0.3, 1.0, -1.0), std::runtime_error);
}

TEST(TBasis, HamiltonianMatchesGrid)
{
    for (double rm : {0.0, 0.5, 1.0, 2.0})
        for (double th : {0.0, 0.3, 1.0})
            for (int k = -6; k <= 5; ++k) {
                const double n = k + 0.5;
                EXPECT_LE((grid_block(Generator::DTheta, n, rm, th) - desitter::hamiltonian_block_tbasis(rm, th, n)).norm(), 1e-9);
                EXPECT_LE((grid_block(Generator::Tplus, n, rm, th) - desitter::t_plus_tbasis(rm, th, n)).norm(), 1e-9);
                EXPECT_LE((grid_block(Generator::Tminus, n, rm, th) - desitter::t_minus_tbasis(rm, th, n)).norm(), 1e-9);
            }
}

TEST(TBasis, OrthonormalFrameChangeFrozen)
{
    EXPECT_LE((orthonormal_frame_change(0.0) - Mat2::Identity()).norm(), 0.0);
    const Mat2 p = orthonormal_frame_change(1.0);
    EXPECT_LE((p.inverse() * desitter::e0_tbasis(1.0) * p - diag_pm_i()).norm(), 1e-14);
    const Mat2 g = fiber_gram(1.0);
    EXPECT_LE((p.adjoint() * g * p - Mat2::Identity()).norm(), 1e-13);
    // the half-angle form used in the construction is the same basis for θ > 0
    EXPECT_LE((p - desitter::frame_change(1.0)).norm(), 1e-14);
    EXPECT_LE((orthonormal_frame_change(-1.0).col(1) + desitter::frame_change(-1.0).col(1)).norm(), 1e-14);
}

// ---- inner product -------------------------------------------------------------

TEST(InnerProduct, SliceIndependence)
{
    const TBasisState a{{0.5}, {Vec2(1.0, 0.0)}};
    for (double rm : {0.0, 1.0, 2.0}) EXPECT_LE(slice_independence(a, a, rm, 0.0, 0.7), 1e-8);
}

TEST(InnerProduct, OrthogonalityIsConserved)
{
    // at θ = 0 the fiber Gram matrix is the identity
    const TBasisState a{{-0.5, 0.5}, {Vec2(1.0, 0.5), Vec2(0.0, cplx(0.0, 1.0))}};
    const TBasisState b{{-0.5, 0.5}, {Vec2(-0.5, 1.0), Vec2(cplx(0.0, 2.0), 0.0)}};
    ASSERT_NEAR(std::abs(inner_product_slice(a, b, 0.0)), 0.0, 1e-14);
    const double rm = 1.0;
    EXPECT_LE(std::abs(inner_product_slice(propagate(a, rm, 0.0, 0.7), propagate(b, rm, 0.0, 0.7), 0.7)), 1e-8);
}

TEST(InnerProduct, ZeroField)
{
    const TBasisState z{{0.5}, {Vec2::Zero()}};
    const TBasisState a{{0.5}, {Vec2(1.0, 0.0)}};
    EXPECT_EQ(inner_product_slice(z, a, 0.4), cplx(0.0));
}

TEST(InnerProduct, PositiveDefinite)
{
    const TBasisState a{{1.5, -2.5}, {Vec2(0.3, -1.0), Vec2(0.2, 0.7)}};
    const cplx p = inner_product_slice(a, a, 0.9);
    EXPECT_GT(p.real(), 0.0);
    EXPECT_NEAR(p.imag(), 0.0, 1e-14);
}

// ---- Minkowski -------------------------------------------------------------------

TEST(Minkowski, DiracCommutesWithSymmetries)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) EXPECT_LE(minkowski_commutator_residual(seed), 1e-8);
}
