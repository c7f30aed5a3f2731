#pragma once
// Commutator expansions of evolved algebra elements and extraction of
// lapse, shift and mass scale from them.

#include "dsq/desitter.hpp"
#include "dsq/opcore.hpp"
#include "dsq/quadruple.hpp"

#include <algorithm>

namespace dsq::recon {

using OrderCoefficients = std::vector<TruncatedOperator>;

/// Term k = [ad_{iH}^k(f)/k!, g], interior-projected.
inline OrderCoefficients commutator_expansion(const TruncatedOperator& ih, const TruncatedOperator& f, const TruncatedOperator& g,
                                              int kmax, int margin)
{
    if (kmax > margin) throw std::invalid_argument("commutator_expansion: order exceeds margin (edge contamination)");
    OrderCoefficients out;
    for (const auto& t : bch_terms(ih, f, kmax)) out.push_back(interior(commutator(t, g), margin));
    return out;
}

inline std::vector<double> order_residuals(const OrderCoefficients& c)
{
    std::vector<double> r;
    for (const auto& t : c) r.push_back(op_norm(t));
    return r;
}

namespace detail {
inline double median(std::vector<double> v)
{
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}
} // namespace detail

struct ThirdOrderFit {
    cplx kappa{0.0};
    double fit_residual = 0.0; // ‖term3 − κ e⊥u²‖ on the interior
    std::vector<cplx> per_level;
};

/// Fit term 3 of [u(t),u] to κ·e⊥·u², per level then median.
inline ThirdOrderFit fit_third_order(const SpectralQuadruple& q, int margin)
{
    const OrderCoefficients c = commutator_expansion(q.ih, q.u, q.u, 3, margin);
    const TruncatedOperator shape = interior(q.e_perp * q.u * q.u, margin);
    ThirdOrderFit fit;
    InteriorProjector p(q.basis, margin);
    std::vector<double> re, im;
    for (int li : p.interior_levels()) {
        const int to = li + 2;
        if (!p.contains_level(to)) continue;
        const Mat s = shape.block(to, li);
        const Mat t = c[3].block(to, li);
        const cplx k = s.squaredNorm() > 0.0 ? (s.adjoint() * t).trace() / s.squaredNorm() : cplx(0.0);
        fit.per_level.push_back(k);
        re.push_back(k.real());
        im.push_back(k.imag());
    }
    fit.kappa = {detail::median(re), detail::median(im)};
    fit.fit_residual = op_norm(c[3] - fit.kappa * shape);
    return fit;
}

/// Mean over interior levels of ‖Δ_n‖², Δ_n the fiber block of u^{-1}[iH,u]
/// (N² g^{φφ} for a unit-lapse generator).
inline double metric_scale(const SpectralQuadruple& q, int margin)
{
    const TruncatedOperator c = commutator(q.ih, q.u);
    InteriorProjector p(q.basis, margin);
    double sum = 0.0;
    int count = 0;
    for (int li : p.interior_levels()) {
        if (!p.contains_level(li + 1)) continue;
        const double nrm = op_norm(c.block(li + 1, li));
        sum += nrm * nrm;
        ++count;
    }
    return count ? sum / count : 0.0;
}

/// κ / (rm·‖Δ‖²) at the reference point rm = 1, θ = 0; measured once.
inline double third_order_calibration()
{
    static const double value = [] {
        const SpectralQuadruple q = desitter::assemble_quadruple({1.0, 0.0, 8});
        return fit_third_order(q, 4).kappa.real() / metric_scale(q, 4);
    }();
    return value;
}

inline double extract_mass_scale(const SpectralQuadruple& q, int margin, double fit_tol = 1e-8)
{
    const ThirdOrderFit fit = fit_third_order(q, margin);
    if (fit.fit_residual > fit_tol) throw std::runtime_error("extract_mass_scale: third-order term not of the predicted shape");
    const double g = metric_scale(q, margin);
    if (g <= 0.0) throw std::runtime_error("extract_mass_scale: first-order commutator vanishes, no metric scale");
    return fit.kappa.real() / (third_order_calibration() * g);
}

struct ADMExtract {
    double lapse_mass = 0.0;
    double shift = 0.0;
    double mass_scale = 0.0;
    double shape_residual = 0.0;
    std::vector<double> order_residuals;
};

/// −(1/2) tr over the fiber.
inline cplx fiber_trace(const Mat& blk) { return -0.5 * blk.trace(); }

inline ADMExtract extract_adm(const SpectralQuadruple& q, const TruncatedOperator& f, int margin)
{
    ADMExtract out;
    InteriorProjector p(q.basis, margin);
    const TruncatedOperator he = q.ih * q.e_perp;
    double lsum = 0.0;
    int count = 0;
    for (int li : p.interior_levels()) {
        lsum += fiber_trace(he.block(li, li)).real();
        ++count;
    }
    out.lapse_mass = count ? lsum / count : 0.0;

    const TruncatedOperator hf = commutator(q.ih, f);
    const int k = f.shift_degree().value_or(0);
    for (int li : p.interior_levels()) {
        if (!p.contains_level(li + k)) continue;
        out.shift = std::max(out.shift, std::abs(fiber_trace(hf.block(li + k, li))));
    }

    // [[iH, e⊥], f] against e₂·f′ with f′ = [T21, f]; in 1+1 the volume element is e₂
    const Mat x = p.compress(commutator(commutator(q.ih, q.e_perp), f).matrix());
    const Mat y = p.compress((q.gamma * commutator(q.t21, f)).matrix());
    const double xn = x.norm();
    if (xn > 0.0) {
        const double yn2 = y.squaredNorm();
        const cplx a = yn2 > 0.0 ? (y.adjoint() * x).trace() / yn2 : cplx(0.0);
        out.shape_residual = (x - a * y).norm() / xn;
    }

    if (margin >= 3) {
        out.order_residuals = order_residuals(commutator_expansion(q.ih, q.u, q.u, 3, margin));
        const ThirdOrderFit fit = fit_third_order(q, margin);
        const double g = metric_scale(q, margin);
        out.mass_scale = g > 0.0 ? fit.kappa.real() / (third_order_calibration() * g) : 0.0;
    }
    return out;
}

/// Max interior residual of expansion terms k <= K of [u(t),u].
inline double massless_degeneracy_check(const SpectralQuadruple& q, int kmax, int margin)
{
    double worst = 0.0;
    for (const auto& t : commutator_expansion(q.ih, q.u, q.u, kmax, margin)) worst = std::max(worst, op_norm(t));
    return worst;
}

} // namespace dsq::recon
