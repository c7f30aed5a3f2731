#pragma once
// Differential and spin geometry of 1+1 de Sitter space embedded in
// 2+1 Minkowski space, evaluated with analytic derivatives. Used as an
// independent reference for the matrix constructions.

#include "dsq/desitter.hpp"
#include "dsq/jet.hpp"
#include "dsq/opcore.hpp"

#include <boost/numeric/odeint.hpp>

#include <functional>
#include <numbers>
#include <random>
#include <string>

namespace dsq::oracle {

using Jet2 = Jet<2>;
using Jet3 = Jet<3>;
using Spinor2 = std::array<Jet2, 2>;
using Spinor3 = std::array<Jet3, 2>;

struct ChartPoint {
    double theta = 0.0;
    double phi = 0.0;
    double radius = 1.0;
};

struct GeometryData {
    std::array<double, 3> x{};
    Eigen::Matrix2d g;
    Eigen::Matrix2d g_inv;
    double christoffel_theta_phiphi = 0.0; // Γ^θ_φφ
    double christoffel_phi_thetaphi = 0.0; // Γ^φ_θφ
    Eigen::Matrix2d k;                     // K_A^B in the orthonormal frame
    double k_trace() const { return k.trace(); }
};

inline constexpr std::array<double, 3> kEta{-1.0, 1.0, 1.0};

namespace detail {

template <int N>
std::array<Jet<N>, 3> embedding(const Jet<N>& th, const Jet<N>& ph, double r)
{
    return {r * sinh(th), r * (cosh(th) * cos(ph)), r * (cosh(th) * sin(ph))};
}

inline double eta_dot(const std::array<cplx, 3>& a, const std::array<cplx, 3>& b)
{
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += kEta[k] * (a[k] * b[k]).real();
    return s;
}

} // namespace detail

/// Embedding, induced metric, Christoffel symbols and extrinsic curvature at p.
inline GeometryData geometry_at(const ChartPoint& p)
{
    const double r = p.radius;
    const auto th = Jet2::variable(p.theta, 0), ph = Jet2::variable(p.phi, 1);
    const auto x = detail::embedding(th, ph, r);
    GeometryData out;
    for (int k = 0; k < 3; ++k) out.x[k] = x[k].v.real();

    // tangent vectors ∂_A X and their derivatives ∂_B ∂_A X
    std::array<std::array<cplx, 3>, 2> t{};
    std::array<std::array<std::array<cplx, 3>, 2>, 2> dt{};
    for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 2; ++a) {
            t[a][k] = x[k].d[a];
            for (int b = 0; b < 2; ++b) dt[b][a][k] = x[k].h[a][b];
        }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out.g(a, b) = detail::eta_dot(t[a], t[b]);
    out.g_inv = out.g.inverse();
    // ∂_C g_AB = η(∂_C∂_A X, ∂_B X) + η(∂_A X, ∂_C∂_B X)
    auto dg = [&](int c, int a, int b) { return detail::eta_dot(dt[c][a], t[b]) + detail::eta_dot(t[a], dt[c][b]); };
    auto christoffel = [&](int up, int a, int b) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l) s += 0.5 * out.g_inv(up, l) * (dg(a, l, b) + dg(b, l, a) - dg(l, a, b));
        return s;
    };
    out.christoffel_theta_phiphi = christoffel(0, 1, 1);
    out.christoffel_phi_thetaphi = christoffel(1, 0, 1);

    // orthonormal frame e_A = ∂_A X / sqrt|g_AA|, unit normal n = X / R
    std::array<std::array<cplx, 3>, 2> e{};
    for (int a = 0; a < 2; ++a)
        for (int k = 0; k < 3; ++k) e[a][k] = t[a][k] / std::sqrt(std::abs(out.g(a, a)));
    // ∂_{e_A} n = (∂_A X / R) / sqrt|g_AA|, lowered and raised with the frame signature (-,+)
    const std::array<double, 2> sig{-1.0, 1.0};
    for (int a = 0; a < 2; ++a) {
        std::array<cplx, 3> dn{};
        for (int k = 0; k < 3; ++k) dn[k] = t[a][k] / r / std::sqrt(std::abs(out.g(a, a)));
        for (int b = 0; b < 2; ++b) out.k(a, b) = sig[b] * detail::eta_dot(dn, e[b]);
    }
    return out;
}

// ---- Clifford data ---------------------------------------------------------

inline Mat2 gamma0()
{
    Mat2 m;
    m << I, 0.0, 0.0, -I;
    return m;
}
inline Mat2 gamma1()
{
    Mat2 m;
    m << 0.0, -I, I, 0.0;
    return m;
}
inline Mat2 gamma2()
{
    Mat2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
inline std::array<Mat2, 3> gammas() { return {gamma0(), gamma1(), gamma2()}; }

/// Dirac product B(ψ, φ) = ψ† B φ with B = diag(−i, i).
inline Mat2 dirac_b()
{
    Mat2 m;
    m << -I, 0.0, 0.0, I;
    return m;
}

inline cplx b_product(const Vec2& a, const Vec2& b) { return (a.adjoint() * dirac_b() * b)(0, 0); }

inline Mat2 r_slash_hat(double phi) { return std::cos(phi) * gamma1() + std::sin(phi) * gamma2(); }
inline Mat2 e2_frame(double phi) { return -std::sin(phi) * gamma1() + std::cos(phi) * gamma2(); }
inline Mat2 e0_frame(double theta, double phi) { return std::cosh(theta) * gamma0() + std::sinh(theta) * r_slash_hat(phi); }
inline Mat2 n_slash(double theta, double phi) { return std::sinh(theta) * gamma0() + std::cosh(theta) * r_slash_hat(phi); }

struct SpinMatrices {
    Mat2 s01, s02, s12, s_theta_phi;
};

/// Boost and rotation spin matrices and S_θφ = S12·S01.
inline SpinMatrices spin_matrices(double theta, double phi)
{
    SpinMatrices s;
    s.s01 << std::exp(theta / 2.0), 0.0, 0.0, std::exp(-theta / 2.0);
    s.s02 << std::cosh(theta / 2.0), std::sinh(theta / 2.0), std::sinh(theta / 2.0), std::cosh(theta / 2.0);
    s.s12 << std::cos(phi / 2.0), std::sin(phi / 2.0), -std::sin(phi / 2.0), std::cos(phi / 2.0);
    s.s_theta_phi = s.s12 * s.s01;
    return s;
}

struct FrameData {
    std::array<Mat2, 3> gamma;
    Mat2 e0, e1, e2; // e1 = normal slash
    SpinMatrices spin;
    Mat2 b;
};

inline FrameData frame_at(const ChartPoint& p)
{
    return {gammas(), e0_frame(p.theta, p.phi), n_slash(p.theta, p.phi), e2_frame(p.phi), spin_matrices(p.theta, p.phi), dirac_b()};
}

// ---- spinor fields -----------------------------------------------------------

struct SpinorFieldFn {
    std::function<Spinor2(const Jet2&, const Jet2&)> f;

    Spinor2 jet(double theta, double phi) const { return f(Jet2::variable(theta, 0), Jet2::variable(phi, 1)); }
    Vec2 value(double theta, double phi) const
    {
        auto s = jet(theta, phi);
        return {s[0].v, s[1].v};
    }
    Vec2 d_theta(double theta, double phi) const
    {
        auto s = jet(theta, phi);
        return {s[0].d[0], s[1].d[0]};
    }
    Vec2 d_phi(double theta, double phi) const
    {
        auto s = jet(theta, phi);
        return {s[0].d[1], s[1].d[1]};
    }
};

using JetMat2 = std::array<std::array<Jet2, 2>, 2>;

inline Spinor2 mat_apply(const JetMat2& m, const Spinor2& s)
{
    return {m[0][0] * s[0] + m[0][1] * s[1], m[1][0] * s[0] + m[1][1] * s[1]};
}

inline Vec2 values(const Spinor2& s) { return {s[0].v, s[1].v}; }
inline Vec2 partial_values(const Spinor2& s, int k) { return {s[0].d[k], s[1].d[k]}; }

/// Spin transport from the global γ frame to the local frame:
/// S γ0 S⁻¹ = e0, S γ1 S⁻¹ = n̸, S γ2 S⁻¹ = e2.
inline JetMat2 transport(const Jet2& th, const Jet2& ph)
{
    const Jet2 ch = cosh(0.5 * th), sh = sinh(0.5 * th);
    const Jet2 ep = exp(cplx(0.0, 0.5) * ph), em = exp(cplx(0.0, -0.5) * ph);
    return {{{ep * ch, ep * sh}, {em * sh, em * ch}}};
}

inline JetMat2 transport_inverse(const Jet2& th, const Jet2& ph)
{
    const Jet2 ch = cosh(0.5 * th), sh = sinh(0.5 * th);
    const Jet2 ep = exp(cplx(0.0, 0.5) * ph), em = exp(cplx(0.0, -0.5) * ph);
    return {{{ch * em, -1.0 * (sh * ep)}, {-1.0 * (sh * em), ch * ep}}};
}

inline Mat2 values(const JetMat2& m)
{
    Mat2 r;
    r << m[0][0].v, m[0][1].v, m[1][0].v, m[1][1].v;
    return r;
}

struct DiracPair {
    Vec2 intrinsic; // transported back to the global frame
    Vec2 extrinsic;
};

/// Intrinsic operator −γ0∂θ/R + γ2∂φ/(R coshθ) − γ0 tanhθ/(2R) on χ = S⁻¹ψ,
/// transported by S; extrinsic operator −e0∂θ/R + e2∂φ/(R coshθ) − (K/2)n̸.
inline DiracPair dirac_pair(const SpinorFieldFn& psi, const ChartPoint& p)
{
    const double r = p.radius;
    const auto th = Jet2::variable(p.theta, 0), ph = Jet2::variable(p.phi, 1);
    const Spinor2 s = psi.f(th, ph);
    const Spinor2 chi = mat_apply(transport_inverse(th, ph), s);
    const double c = std::cosh(p.theta), t = std::tanh(p.theta);
    const Vec2 dint = -gamma0() * partial_values(chi, 0) / r + gamma2() * partial_values(chi, 1) / (r * c) -
                      gamma0() * values(chi) * (t / (2.0 * r));
    const double k = geometry_at(p).k_trace();
    const Vec2 dext = -e0_frame(p.theta, p.phi) * partial_values(s, 0) / r + e2_frame(p.phi) * partial_values(s, 1) / (r * c) -
                      0.5 * k * n_slash(p.theta, p.phi) * values(s);
    return {values(transport(th, ph)) * dint, dext};
}

/// |T:n,+> = (e^{−i(n−1/2)φ}, 0), |T:n,−> = (0, e^{−i(n+1/2)φ}); sigma 0 is '+'.
inline SpinorFieldFn t_basis(double n, int sigma)
{
    return {[n, sigma](const Jet2&, const Jet2& ph) -> Spinor2 {
        if (sigma == 0) return {exp(cplx(0.0, -(n - 0.5)) * ph), Jet2(0.0)};
        return {Jet2(0.0), exp(cplx(0.0, -(n + 0.5)) * ph)};
    }};
}

/// Smooth random fields Σ c e^{ikφ} (a + bθ + cθ²) e^{dθ} per component.
inline SpinorFieldFn random_spinor_field(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> freq(-3, 3);
    struct Term {
        cplx coef;
        int k;
        double a, b, c, d;
    };
    std::array<std::vector<Term>, 2> terms;
    for (auto& comp : terms)
        for (int l = 0; l < 3; ++l) comp.push_back({{u(rng), u(rng)}, freq(rng), u(rng), u(rng), u(rng), 0.5 * u(rng)});
    return {[terms](const Jet2& th, const Jet2& ph) -> Spinor2 {
        Spinor2 out{Jet2(0.0), Jet2(0.0)};
        for (int s = 0; s < 2; ++s)
            for (const Term& tm : terms[s]) {
                const Jet2 prof = Jet2(tm.a) + tm.b * th + tm.c * (th * th);
                out[s] = out[s] + tm.coef * (exp(cplx(0.0, double(tm.k)) * ph) * prof * exp(tm.d * th));
            }
        return out;
    }};
}

// ---- symmetry generators ------------------------------------------------------

/// L21 = ∂φ, L02 = sinφ∂θ + cosφ tanhθ∂φ, L01 = cosφ∂θ − sinφ tanhθ∂φ.
enum class Killing { L01, L02, L21 };

inline Jet2 apply_killing(Killing l, const Jet2& f, const Jet2& th, const Jet2& ph)
{
    switch (l) {
    case Killing::L21: return f.partial(1);
    case Killing::L02: return sin(ph) * f.partial(0) + (cos(ph) * tanh(th)) * f.partial(1);
    case Killing::L01: return cos(ph) * f.partial(0) - (sin(ph) * tanh(th)) * f.partial(1);
    }
    return f;
}

using ScalarFn = std::function<Jet2(const Jet2&, const Jet2&)>;

/// Restrictions of x⁰, x¹, x², products and a constant.
inline std::vector<std::pair<std::string, ScalarFn>> default_test_functions(double r)
{
    auto xk = [r](int k) {
        return ScalarFn([r, k](const Jet2& th, const Jet2& ph) { return detail::embedding(th, ph, r)[k]; });
    };
    return {{"1", [](const Jet2&, const Jet2&) { return Jet2(1.0); }},
            {"x0", xk(0)},
            {"x1", xk(1)},
            {"x2", xk(2)},
            {"x0*x1", [xk](const Jet2& a, const Jet2& b) { return xk(0)(a, b) * xk(1)(a, b); }},
            {"x1*x2", [xk](const Jet2& a, const Jet2& b) { return xk(1)(a, b) * xk(2)(a, b); }},
            {"x2*x2", [xk](const Jet2& a, const Jet2& b) { return xk(2)(a, b) * xk(2)(a, b); }}};
}

struct SymmetryResiduals {
    double l1 = 0.0; // [L01,L21] − L02
    double l2 = 0.0; // [L02,L21] + L01
    double l3 = 0.0; // [L01,L02] − L21
    double casimir = 0.0; // L01² + L02² − L21² + R²∇²
};

inline SymmetryResiduals symmetry_checks(const ChartPoint& p, const std::vector<std::pair<std::string, ScalarFn>>& fns)
{
    const auto th = Jet2::variable(p.theta, 0), ph = Jet2::variable(p.phi, 1);
    const GeometryData geo = geometry_at(p);
    SymmetryResiduals res;
    auto L = [&](Killing k, const Jet2& f) { return apply_killing(k, f, th, ph); };
    auto br = [&](Killing a, Killing b, const Jet2& f) { return (L(a, L(b, f)) - L(b, L(a, f))).v; };
    for (const auto& [name, fn] : fns) {
        const Jet2 f = fn(th, ph);
        res.l1 = std::max(res.l1, std::abs(br(Killing::L01, Killing::L21, f) - L(Killing::L02, f).v));
        res.l2 = std::max(res.l2, std::abs(br(Killing::L02, Killing::L21, f) + L(Killing::L01, f).v));
        res.l3 = std::max(res.l3, std::abs(br(Killing::L01, Killing::L02, f) - L(Killing::L21, f).v));
        const cplx cas = L(Killing::L01, L(Killing::L01, f)).v + L(Killing::L02, L(Killing::L02, f)).v - L(Killing::L21, L(Killing::L21, f)).v;
        // ∇^A∇_A f = g^{AB}(∂_A∂_B f − Γ^C_AB ∂_C f): only Γ^θ_φφ and Γ^φ_θφ are nonzero
        const cplx lap = geo.g_inv(0, 0) * f.h[0][0] +
                         geo.g_inv(1, 1) * (f.h[1][1] - geo.christoffel_theta_phiphi * f.d[0]);
        res.casimir = std::max(res.casimir, std::abs(cas + p.radius * p.radius * lap));
    }
    return res;
}

inline SymmetryResiduals symmetry_checks(const ChartPoint& p) { return symmetry_checks(p, default_test_functions(p.radius)); }

/// Laplace-Beltrami in closed form: −(1/R²)((1/coshθ)∂θ(coshθ∂θ f) − (1/cosh²θ)∂φ²f).
inline cplx laplace_beltrami_closed(const Jet2& f, double theta, double r)
{
    const double c = std::cosh(theta), t = std::tanh(theta);
    return -(f.h[0][0] + t * f.d[0] - f.h[1][1] / (c * c)) / (r * r);
}

// ---- generator actions on the T basis -----------------------------------------

enum class Generator { T21, Tplus, Tminus, E0, NSlash, RSlash, DTheta };

inline std::string to_string(Generator g)
{
    switch (g) {
    case Generator::T21: return "T21";
    case Generator::Tplus: return "Tplus";
    case Generator::Tminus: return "Tminus";
    case Generator::E0: return "e0";
    case Generator::NSlash: return "n_slash";
    case Generator::RSlash: return "r_slash";
    case Generator::DTheta: return "dtheta";
    }
    return "?";
}

inline Mat2 omega(int i, int j)
{
    const auto g = gammas();
    return 0.25 * (g[i] * g[j] - g[j] * g[i]);
}

/// θ-derivative of a solution of (D̸ − m)ψ = 0, from the extrinsic operator.
inline Vec2 dirac_dtheta(const Vec2& psi, const Vec2& dphi, double rm, double theta, double phi, double r = 1.0)
{
    const double m = rm / r;
    const double k = geometry_at({theta, phi, r}).k_trace();
    const Mat2 e0 = e0_frame(theta, phi);
    return r * e0 * (m * psi - e2_frame(phi) * dphi / (r * std::cosh(theta)) + 0.5 * k * n_slash(theta, phi) * psi);
}

/// Value of the generator applied to a field at (θ, φ); the θ-derivative comes
/// from the Dirac equation.
inline Vec2 apply_generator(Generator gen, const SpinorFieldFn& psi, double rm, double theta, double phi, double r = 1.0)
{
    const Vec2 v = psi.value(theta, phi);
    const Vec2 dp = psi.d_phi(theta, phi);
    const Vec2 dt = dirac_dtheta(v, dp, rm, theta, phi, r);
    const double th = std::tanh(theta);
    switch (gen) {
    case Generator::T21: return -dp + omega(2, 1) * v;
    case Generator::E0: return e0_frame(theta, phi) * v;
    case Generator::NSlash: return n_slash(theta, phi) * v;
    case Generator::RSlash: return r_slash_hat(phi) * v;
    case Generator::DTheta: return dt;
    case Generator::Tplus:
    case Generator::Tminus: {
        // T_ij = −L_ij + ω_ij
        const Vec2 t02 = -(std::sin(phi) * dt + std::cos(phi) * th * dp) + omega(0, 2) * v;
        const Vec2 t01 = -(std::cos(phi) * dt - std::sin(phi) * th * dp) + omega(0, 1) * v;
        return gen == Generator::Tplus ? Vec2(t01 - I * t02) : Vec2(t01 + I * t02);
    }
    }
    return v;
}

struct TAction {
    double level = 0.0;
    Vec2 coeffs = Vec2::Zero(); // on |T:level,+>, |T:level,->
    double leakage = 0.0;
};

inline constexpr int kPhiGrid = 1 << 10;

/// Apply `gen` to |T:n,σ> at slice θ and decompose by φ-Fourier analysis.
inline TAction apply_T_grid(Generator gen, double n, int sigma, double rm, double theta, double r = 1.0, double tol = 1e-9)
{
    const SpinorFieldFn psi = t_basis(n, sigma);
    TAction out;
    out.level = gen == Generator::Tplus ? n + 1.0 : gen == Generator::Tminus ? n - 1.0 : n;
    std::vector<Vec2> w(kPhiGrid);
    for (int jj = 0; jj < kPhiGrid; ++jj) {
        const double phi = 2.0 * std::numbers::pi * jj / kPhiGrid;
        w[jj] = apply_generator(gen, psi, rm, theta, phi, r);
        out.coeffs(0) += w[jj](0) * std::exp(I * ((out.level - 0.5) * phi));
        out.coeffs(1) += w[jj](1) * std::exp(I * ((out.level + 0.5) * phi));
    }
    out.coeffs /= double(kPhiGrid);
    // residual after removing the two target components, measured pointwise
    double power = 0.0, rest = 0.0;
    for (int jj = 0; jj < kPhiGrid; ++jj) {
        const double phi = 2.0 * std::numbers::pi * jj / kPhiGrid;
        const Vec2 fit(out.coeffs(0) * std::exp(-I * ((out.level - 0.5) * phi)), out.coeffs(1) * std::exp(-I * ((out.level + 0.5) * phi)));
        power += w[jj].squaredNorm();
        rest += (w[jj] - fit).squaredNorm();
    }
    out.leakage = std::sqrt(rest / kPhiGrid);
    if (out.leakage > tol * std::max(1.0, std::sqrt(power / kPhiGrid)))
        throw std::runtime_error("apply_T_grid: " + to_string(gen) + " leaks outside the two target basis vectors");
    return out;
}

/// 2x2 matrix (columns are images of |n,+>, |n,->) of a generator from the grid action.
inline Mat2 grid_block(Generator gen, double n, double rm, double theta, double r = 1.0)
{
    Mat2 m;
    for (int s = 0; s < 2; ++s) m.col(s) = apply_T_grid(gen, n, s, rm, theta, r).coeffs;
    return m;
}

// ---- inner product on slices ----------------------------------------------------

/// A field given by its T-basis coefficients at one slice.
struct TBasisState {
    std::vector<double> levels;
    std::vector<Vec2> coeffs;

    Vec2 value(double phi) const
    {
        Vec2 v = Vec2::Zero();
        for (std::size_t k = 0; k < levels.size(); ++k) {
            v(0) += coeffs[k](0) * std::exp(-I * ((levels[k] - 0.5) * phi));
            v(1) += coeffs[k](1) * std::exp(-I * ((levels[k] + 0.5) * phi));
        }
        return v;
    }
};

/// (1/2π)∫ B(ψ1, e0 ψ2) R coshθ dφ by the trapezoid rule on 2^10 points.
inline cplx inner_product_slice(const TBasisState& a, const TBasisState& b, double theta, double r = 1.0)
{
    cplx s{0.0};
    for (int jj = 0; jj < kPhiGrid; ++jj) {
        const double phi = 2.0 * std::numbers::pi * jj / kPhiGrid;
        s += b_product(a.value(phi), e0_frame(theta, phi) * b.value(phi));
    }
    return s / double(kPhiGrid) * r * std::cosh(theta);
}

/// Per-level integration of ∂θc = h_T(θ)c with an adaptive Dormand-Prince stepper.
inline TBasisState propagate(const TBasisState& s, double rm, double theta_a, double theta_b, double tol = 1e-12)
{
    namespace ode = boost::numeric::odeint;
    using State = std::array<cplx, 2>;
    TBasisState out = s;
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
        const double n = s.levels[k];
        State x{s.coeffs[k](0), s.coeffs[k](1)};
        auto rhs = [rm, n](const State& c, State& dc, double th) {
            const Mat2 h = desitter::hamiltonian_block_tbasis(rm, th, n);
            dc[0] = h(0, 0) * c[0] + h(0, 1) * c[1];
            dc[1] = h(1, 0) * c[0] + h(1, 1) * c[1];
        };
        ode::integrate_adaptive(ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<State>()), rhs, x, theta_a, theta_b,
                                (theta_b - theta_a) / 100.0);
        out.coeffs[k] = Vec2(x[0], x[1]);
    }
    return out;
}

inline double slice_independence(const TBasisState& a, const TBasisState& b, double rm, double theta_a, double theta_b)
{
    const cplx pa = inner_product_slice(a, b, theta_a);
    const cplx pb = inner_product_slice(propagate(a, rm, theta_a, theta_b), propagate(b, rm, theta_a, theta_b), theta_b);
    return std::abs(pa - pb);
}

/// Columns e_{+i}, e_{−i}: (coshθ ± 1, sinhθ)/sqrt(2coshθ ± 2); the θ = 0 value is the limit θ → 0+.
inline Mat2 orthonormal_frame_change(double theta)
{
    if (theta == 0.0) return Mat2::Identity();
    const double c = std::cosh(theta), s = std::sinh(theta);
    Mat2 m;
    m << (c + 1.0) / std::sqrt(2.0 * c + 2.0), (c - 1.0) / std::sqrt(2.0 * c - 2.0), s / std::sqrt(2.0 * c + 2.0),
        s / std::sqrt(2.0 * c - 2.0);
    return m;
}

/// Fiber Gram matrix of the T basis under (1/2π)∫ B(·, e0 ·) dφ.
inline Mat2 fiber_gram(double theta)
{
    Mat2 g;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            TBasisState sa{{0.5}, {Vec2::Unit(a)}}, sb{{0.5}, {Vec2::Unit(b)}};
            g(a, b) = inner_product_slice(sa, sb, theta) / std::cosh(theta);
        }
    return g;
}

// ---- Minkowski space ----------------------------------------------------------------

/// Random polynomial-times-Gaussian spinor on R^3.
inline std::function<Spinor3(const std::array<Jet3, 3>&)> random_minkowski_field(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<std::array<cplx, 10>, 2> c;
    for (auto& comp : c)
        for (auto& z : comp) z = {u(rng), u(rng)};
    return [c](const std::array<Jet3, 3>& x) -> Spinor3 {
        const Jet3 g = exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
        Spinor3 out;
        for (int s = 0; s < 2; ++s) {
            const auto& k = c[s];
            Jet3 p = Jet3(k[0]) + k[1] * x[0] + k[2] * x[1] + k[3] * x[2] + k[4] * (x[0] * x[0]) + k[5] * (x[1] * x[1]) +
                     k[6] * (x[2] * x[2]) + k[7] * (x[0] * x[1]) + k[8] * (x[1] * x[2]) + k[9] * (x[0] * x[2]);
            out[s] = p * g;
        }
        return out;
    };
}

/// max over (i,j) and sample points of |([D̸_M, T_ij]ψ)(x)|, D̸_M = γ^k∂_k,
/// T_ij = −L_ij + ω_ij with L_ij = x_j∂_i − x_i∂_j.
inline double minkowski_commutator_residual(std::uint64_t seed, int fields = 4, int points = 8)
{
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const auto g = gammas();
    auto mat = [](const Mat2& m, const Spinor3& s) -> Spinor3 {
        return {m(0, 0) * s[0] + m(0, 1) * s[1], m(1, 0) * s[0] + m(1, 1) * s[1]};
    };
    auto add = [](const Spinor3& a, const Spinor3& b) -> Spinor3 { return {a[0] + b[0], a[1] + b[1]}; };
    auto scale = [](const Jet3& f, const Spinor3& s) -> Spinor3 { return {f * s[0], f * s[1]}; };
    auto partial = [](const Spinor3& s, int k) -> Spinor3 { return {s[0].partial(k), s[1].partial(k)}; };
    double worst = 0.0;
    for (int f = 0; f < fields; ++f) {
        const auto field = random_minkowski_field(seed + 1000u * std::uint64_t(f));
        for (int pt = 0; pt < points; ++pt) {
            const std::array<Jet3, 3> x{Jet3::variable(u(rng), 0), Jet3::variable(u(rng), 1), Jet3::variable(u(rng), 2)};
            const Spinor3 psi = field(x);
            auto dirac = [&](const Spinor3& s) {
                Spinor3 out{Jet3(0.0), Jet3(0.0)};
                for (int k = 0; k < 3; ++k) out = add(out, mat(kEta[k] * g[k], partial(s, k)));
                return out;
            };
            for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{2, 1}}) {
                auto tij = [&, i = i, j = j](const Spinor3& s) {
                    const Jet3 xi = kEta[i] * x[i], xj = kEta[j] * x[j];
                    Spinor3 l = add(scale(xj, partial(s, i)), scale(-xi, partial(s, j)));
                    return add(scale(Jet3(-1.0), l), mat(omega(i, j), s));
                };
                const Spinor3 a = dirac(tij(psi));
                const Spinor3 b = tij(dirac(psi));
                worst = std::max({worst, std::abs(a[0].v - b[0].v), std::abs(a[1].v - b[1].v)});
            }
        }
    }
    return worst;
}

} // namespace dsq::oracle
