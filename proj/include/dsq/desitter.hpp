#pragma once
// The 1+1 de Sitter spectral quadruple on a truncated level basis, built from
// the order-one recursion and cross-checked against closed-form matrices.
// Units R = 1 throughout; rm is the product of radius and mass.

#include "dsq/opcore.hpp"
#include "dsq/quadruple.hpp"

#include <numbers>
#include <utility>

namespace dsq::desitter {

struct DeSitterParams {
    double rm = 0.0;
    double theta = 0.0;
    int nmax = 32;
    double rho = 0.0; // gauge: level phase e^{i rho n}
    double y = 0.0;   // gauge: relative fiber phase diag(e^{iy/2}, e^{-iy/2})
};

struct U2Params {
    double rho = 0.0;
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

/// e^{iρ}(1+x²+y²)^{-1/2} [[-ix+tanhθ, sechθ+iy], [-sechθ+iy, ix+tanhθ]].
inline Mat2 u2_from_params(const U2Params& p)
{
    const double t = std::tanh(p.theta), sc = 1.0 / std::cosh(p.theta);
    Mat2 m;
    m << -I * p.x + t, sc + I * p.y, -sc + I * p.y, I * p.x + t;
    return std::exp(I * p.rho) / std::sqrt(1.0 + p.x * p.x + p.y * p.y) * m;
}

namespace detail {
inline bool same_phase(double a, double b, double tol)
{
    return std::abs(std::exp(I * a) - std::exp(I * b)) <= tol;
}
} // namespace detail

/// Constraints from C T+ C = T- with C|n,σ> = conj|−n,−σ>:
/// e^{iρ-} = −e^{−iρ+}, x- = −x+, θ- = −θ+, y- = y+.
inline bool cc_constraints_hold(const U2Params& pp, const U2Params& pm, double tol = 1e-12)
{
    return detail::same_phase(pm.rho, std::numbers::pi - pp.rho, tol) && std::abs(pm.x + pp.x) <= tol &&
           std::abs(pm.theta + pp.theta) <= tol && std::abs(pm.y - pp.y) <= tol;
}

/// The constrained family (u+ params, u- params) for free (ρ, x, θ, y).
inline std::pair<U2Params, U2Params> cc_family(double rho, double x, double theta, double y)
{
    return {{rho, x, y, theta}, {std::numbers::pi - rho, -x, y, -theta}};
}

/// Seeds in the unnormalized convention U± = T±(±1/2), U U† = (1+rm²)·1.
inline std::pair<Mat2, Mat2> seed_operators(double rm, double theta)
{
    const double t = std::tanh(theta), sc = 1.0 / std::cosh(theta);
    Mat2 up, um;
    up << -I * rm + t, sc, -sc, I * rm + t;
    um << -I * rm + t, -sc, sc, I * rm + t;
    return {up, um};
}

struct LadderFamily {
    std::vector<double> levels;
    std::vector<Mat2> t_plus;
    std::vector<Mat2> t_minus;
};

/// T+(n) = (n/2 − 1/4)(U+ + U-†) + U+, T-(n) = (−n/2 − 1/4)(U- + U+†) + U-.
inline LadderFamily solve_order_one_recursion(const Mat2& up, const Mat2& um, const std::vector<double>& levels)
{
    LadderFamily f;
    f.levels = levels;
    const Mat2 sp = up + um.adjoint();
    const Mat2 sm = um + up.adjoint();
    for (double n : levels) {
        f.t_plus.push_back((n / 2.0 - 0.25) * sp + up);
        f.t_minus.push_back((-n / 2.0 - 0.25) * sm + um);
    }
    return f;
}

/// Closed-form T+(n) block (raising n -> n+1) in the orthonormal e0-eigenbasis.
inline Mat2 closed_form_t_plus(double rm, double theta, double n)
{
    const double t = std::tanh(theta), sc = 1.0 / std::cosh(theta), a = n + 0.5;
    Mat2 m;
    m << -I * rm + a * t, a * sc, -a * sc, I * rm + a * t;
    return m;
}

/// Closed-form T-(n) block (lowering n -> n-1).
inline Mat2 closed_form_t_minus(double rm, double theta, double n)
{
    const double t = std::tanh(theta), sc = 1.0 / std::cosh(theta), b = n - 0.5;
    Mat2 m;
    m << -I * rm - b * t, b * sc, -b * sc, I * rm - b * t;
    return m;
}

/// θ-derivative of the |T:n,±> basis. Columns are images: column '+' holds
/// ((n−1/2)tanhθ + i rm coshθ, (n+1/2) + i rm sinhθ).
inline Mat2 hamiltonian_block_tbasis(double rm, double theta, double n)
{
    const double t = std::tanh(theta), c = std::cosh(theta), s = std::sinh(theta);
    Mat2 m;
    m << (n - 0.5) * t + I * rm * c, (-n + 0.5) - I * rm * s, (n + 0.5) + I * rm * s, (-n - 0.5) * t - I * rm * c;
    return m;
}

inline TruncatedOperator hamiltonian_theta(double rm, double theta, const BasisDescriptor& b)
{
    return level_diagonal(b, [&](double n) -> Mat { return hamiltonian_block_tbasis(rm, theta, n); });
}

/// The e0 matrix in the T basis: i[[coshθ, −sinhθ], [sinhθ, −coshθ]].
inline Mat2 e0_tbasis(double theta)
{
    const double c = std::cosh(theta), s = std::sinh(theta);
    Mat2 m;
    m << I * c, -I * s, I * s, -I * c;
    return m;
}

/// T± blocks in the T basis, from the generator actions on |T:n,±>.
inline Mat2 t_plus_tbasis(double rm, double theta, double n)
{
    const double t = std::tanh(theta), c = std::cosh(theta), s = std::sinh(theta), a = n + 0.5;
    Mat2 m;
    m << -I * rm * c, a + I * rm * s, -(a + I * rm * s), 2.0 * a * t + I * rm * c;
    return m;
}

inline Mat2 t_minus_tbasis(double rm, double theta, double n)
{
    const double t = std::tanh(theta), c = std::cosh(theta), s = std::sinh(theta), a = n - 0.5;
    Mat2 m;
    m << -2.0 * a * t - I * rm * c, a + I * rm * s, -(a + I * rm * s), I * rm * c;
    return m;
}

/// Columns are the e0 eigenvectors (eigenvalues +i, −i), in half-angle form.
inline Mat2 frame_change(double theta)
{
    const double ch = std::cosh(theta / 2.0), sh = std::sinh(theta / 2.0);
    Mat2 m;
    m << ch, sh, sh, ch;
    return m;
}

inline Mat2 frame_change_derivative(double theta)
{
    const double ch = std::cosh(theta / 2.0), sh = std::sinh(theta / 2.0);
    Mat2 m;
    m << sh, ch, ch, sh;
    return 0.5 * m;
}

/// Generator in the conserved-orthonormal frame:
/// P^{-1}(h_T P − P') + (1/2) tanhθ, the last term from the coshθ line element.
inline Mat2 orthonormal_hamiltonian_block(double rm, double theta, double n)
{
    const Mat2 p = frame_change(theta);
    const Mat2 pinv = p.inverse();
    return pinv * (hamiltonian_block_tbasis(rm, theta, n) * p - frame_change_derivative(theta)) +
           0.5 * std::tanh(theta) * Mat2::Identity();
}

/// Closed form of the orthonormal-frame generator, rm e_perp + n sechθ [[0,−1],[1,0]]
/// (the −P^{-1}P' term cancels the line-element term). Used for assembly; the
/// frame-transport expression above is its cross-check.
inline Mat2 hamiltonian_block(double rm, double theta, double n)
{
    const double sc = n / std::cosh(theta);
    Mat2 m;
    m << I * rm, -sc, sc, -I * rm;
    return m;
}

inline Mat2 e_perp_block()
{
    Mat2 m;
    m << I, 0.0, 0.0, -I;
    return m;
}

inline Mat2 e2_block()
{
    Mat2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

/// |n,σ> -> conj |−n,−σ>.
inline AntilinearOperator charge_conjugation(const BasisDescriptor& b)
{
    Mat m = Mat::Zero(b.dim(), b.dim());
    for (int li = 0; li < b.num_levels(); ++li) {
        const int lj = b.num_levels() - 1 - li;
        m(b.index(lj, 1), b.index(li, 0)) = 1.0;
        m(b.index(lj, 0), b.index(li, 1)) = 1.0;
    }
    return {b, m};
}

inline Mat2 fiber_gauge(double y)
{
    Mat2 f = Mat2::Zero();
    f(0, 0) = std::exp(I * (y / 2.0));
    f(1, 1) = std::exp(-I * (y / 2.0));
    return f;
}

/// V = e^{iρn} ⊗ diag(e^{iy/2}, e^{−iy/2}).
inline TruncatedOperator gauge_unitary(const BasisDescriptor& b, double rho, double y)
{
    const Mat2 f = fiber_gauge(y);
    return level_diagonal(b, [&](double n) -> Mat { return std::exp(I * (rho * n)) * f; });
}

/// Seeds after the basis-phase gauge V.
inline std::pair<Mat2, Mat2> gauged_seeds(double rm, double theta, double rho, double y)
{
    auto [up, um] = seed_operators(rm, theta);
    const Mat2 f = fiber_gauge(y);
    return {std::exp(I * rho) * f * up * f.adjoint(), std::exp(-I * rho) * f * um * f.adjoint()};
}

inline SpectralQuadruple assemble_quadruple(const DeSitterParams& p)
{
    if (p.nmax < 4) throw std::invalid_argument("assemble_quadruple: nmax must be at least 4");
    if (!std::isfinite(p.rm) || !std::isfinite(p.theta)) throw std::invalid_argument("assemble_quadruple: parameters must be finite");
    const BasisDescriptor b(p.nmax);
    auto [up, um] = gauged_seeds(p.rm, p.theta, p.rho, p.y);
    const LadderFamily fam = solve_order_one_recursion(up, um, b.levels());
    auto tp = level_shift(b, 1, [&](double n) -> Mat { return fam.t_plus[b.level_index(n)]; });
    auto tm = level_shift(b, -1, [&](double n) -> Mat { return fam.t_minus[b.level_index(n)]; });

    const TruncatedOperator v = gauge_unitary(b, p.rho, p.y);
    const TruncatedOperator vd = adjoint(v);
    auto g = [&](const TruncatedOperator& a) { return v * a * vd; };

    SpectralQuadruple q{
        b,
        g(shift_operator(b)),
        g(fiberwise(b, e_perp_block())),
        g(fiberwise(b, e2_block())),
        AntilinearOperator(b, v.matrix() * charge_conjugation(b).matrix() * v.matrix().transpose()),
        g(level_diagonal(b, [](double n) -> Mat { return I * n * Mat2::Identity(); })),
        tp,
        tm,
        g(level_diagonal(b, [&](double n) -> Mat { return hamiltonian_block(p.rm, p.theta, n); })),
        2};
    return q;
}

/// max |recursion − closed form| over levels (both T+ and T-).
inline double crosscheck_recursion_vs_closed_form(double rm, double theta, const std::vector<double>& levels,
                                                  const std::pair<Mat2, Mat2>* seeds = nullptr)
{
    auto s = seeds ? *seeds : seed_operators(rm, theta);
    const LadderFamily fam = solve_order_one_recursion(s.first, s.second, levels);
    double worst = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        worst = std::max(worst, (fam.t_plus[i] - closed_form_t_plus(rm, theta, levels[i])).cwiseAbs().maxCoeff());
        worst = std::max(worst, (fam.t_minus[i] - closed_form_t_minus(rm, theta, levels[i])).cwiseAbs().maxCoeff());
    }
    return worst;
}

inline double crosscheck_recursion_vs_closed_form(const DeSitterParams& p)
{
    return crosscheck_recursion_vs_closed_form(p.rm, p.theta, BasisDescriptor(p.nmax).levels());
}

/// max over n of |T+(n)T+(n)† − ((n+1/2)²+rm²)| and |T-(n+1)T-(n+1)† − ((n+1/2)²+rm²)|.
inline double norm_law_residual(double rm, double theta, const std::vector<double>& levels)
{
    auto s = seed_operators(rm, theta);
    std::vector<double> ext = levels;
    ext.push_back(levels.back() + 1.0);
    const LadderFamily fam = solve_order_one_recursion(s.first, s.second, ext);
    double worst = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const double c2 = (levels[i] + 0.5) * (levels[i] + 0.5) + rm * rm;
        worst = std::max(worst, (fam.t_plus[i] * fam.t_plus[i].adjoint() - c2 * Mat2::Identity()).cwiseAbs().maxCoeff());
        worst = std::max(worst, (fam.t_minus[i + 1] * fam.t_minus[i + 1].adjoint() - c2 * Mat2::Identity()).cwiseAbs().maxCoeff());
    }
    return worst;
}

} // namespace dsq::desitter
