#pragma once
// Unitary representations of sl(2,R): ladder coefficients, series
// classification and truncated generator matrices.

#include "dsq/opcore.hpp"

#include <functional>
#include <string>

namespace dsq {

struct RepParams {
    double r2m2 = 0.0;
    Lattice lattice = Lattice::HalfInteger;
};

enum class SeriesKind {
    PrincipalInteger,
    PrincipalHalfInteger,
    Complementary,
    DiscreteBoundedBelow,
    DiscreteBoundedAbove,
    Invalid
};

/// Discrete classes carry both zeros of c_n, r2m2 = -(n0+1/2)^2:
/// the bounded-below tower has weights >= n0+1, the bounded-above tower
/// has weights <= n0_above = -1-n0.
struct SeriesClass {
    SeriesKind kind = SeriesKind::Invalid;
    double n0 = 0.0;
    double n0_above = 0.0;

    bool is_discrete() const
    {
        return kind == SeriesKind::DiscreteBoundedBelow || kind == SeriesKind::DiscreteBoundedAbove;
    }
};

inline std::string to_string(SeriesKind k)
{
    switch (k) {
    case SeriesKind::PrincipalInteger: return "PrincipalInteger";
    case SeriesKind::PrincipalHalfInteger: return "PrincipalHalfInteger";
    case SeriesKind::Complementary: return "Complementary";
    case SeriesKind::DiscreteBoundedBelow: return "DiscreteBoundedBelow";
    case SeriesKind::DiscreteBoundedAbove: return "DiscreteBoundedAbove";
    case SeriesKind::Invalid: return "Invalid";
    }
    return "Invalid";
}

/// |c_n|^2 = (n+1/2)^2 + r2m2. Negative values mark excluded weights.
inline double ladder_coefficient_sq(double n, double r2m2) { return (n + 0.5) * (n + 0.5) + r2m2; }

/// max_n | |c_n|^2 - |c_{n-1}|^2 - 2n |.
inline double verify_ladder_recursion(double r2m2, const std::vector<double>& ns,
                                      const std::function<double(double, double)>& coeff = ladder_coefficient_sq)
{
    double worst = 0.0;
    for (double n : ns) worst = std::max(worst, std::abs(coeff(n, r2m2) - coeff(n - 1.0, r2m2) - 2.0 * n));
    return worst;
}

inline std::vector<double> weight_range(double lo, double hi)
{
    std::vector<double> out;
    for (double n = lo; n <= hi + 1e-12; n += 1.0) out.push_back(n);
    return out;
}

namespace detail {
inline bool near_integer(double x, double tol = 1e-12) { return std::abs(x - std::round(x)) <= tol; }
} // namespace detail

inline SeriesClass classify(const RepParams& rep)
{
    SeriesClass out;
    const double r = rep.r2m2;
    if (!std::isfinite(r)) return out;
    const bool half = rep.lattice == Lattice::HalfInteger;
    if (r > 0.0) {
        out.kind = half ? SeriesKind::PrincipalHalfInteger : SeriesKind::PrincipalInteger;
        return out;
    }
    // zeros of |c_n|^2 sit at n = -1/2 ± sqrt(-r2m2); a discrete tower needs them on the lattice
    const double k = std::sqrt(-r);
    const double n0 = -0.5 + k;
    const bool on_lattice = half ? detail::near_integer(n0 - 0.5) : detail::near_integer(n0);
    if (on_lattice) {
        out.kind = SeriesKind::DiscreteBoundedBelow;
        out.n0 = half ? std::round(n0 - 0.5) + 0.5 : std::round(n0);
        out.n0_above = -1.0 - out.n0;
        return out;
    }
    if (!half && r > -0.25) {
        out.kind = SeriesKind::Complementary;
        return out;
    }
    return out;
}

struct Sl2Generators {
    TruncatedOperator t21;
    TruncatedOperator t_plus;
    TruncatedOperator t_minus;
};

/// T21|n> = i n|n>, T+|n> = c_n|n+1>, T-|n+1> = -conj(c_n)|n> on a one-dimensional fiber.
/// `phases` (optional, one per level) multiplies c_n; default c_n = +sqrt(|c_n|^2).
inline Sl2Generators build_generators(const RepParams& rep, int nmax, const std::vector<cplx>& phases = {})
{
    SeriesClass cls = classify(rep);
    if (cls.is_discrete())
        throw std::invalid_argument("build_generators: discrete series cannot be truncated symmetrically (weight window crosses the bound)");
    if (cls.kind == SeriesKind::Invalid)
        throw std::invalid_argument("build_generators: parameters do not define a unitary representation");
    BasisDescriptor b(nmax, 1, rep.lattice);
    if (!phases.empty() && int(phases.size()) != b.num_levels())
        throw std::invalid_argument("build_generators: one phase per level expected");
    auto coeff = [&](double n) {
        double c2 = ladder_coefficient_sq(n, rep.r2m2);
        if (c2 < 0.0) throw std::invalid_argument("build_generators: negative |c_n|^2 inside the weight window");
        cplx c = std::sqrt(c2);
        if (!phases.empty()) c *= phases[b.level_index(n)];
        return c;
    };
    auto t21 = level_diagonal(b, [](double n) { return Mat::Constant(1, 1, I * n); });
    auto tp = level_shift(b, 1, [&](double n) { return Mat::Constant(1, 1, coeff(n)); });
    auto tm = level_shift(b, -1, [&](double n) { return Mat::Constant(1, 1, -std::conj(coeff(n - 1.0))); });
    return {t21, tp, tm};
}

/// T21^2 - (T+T- + T-T+)/2.
inline TruncatedOperator casimir(const Sl2Generators& g)
{
    return g.t21 * g.t21 - 0.5 * (g.t_plus * g.t_minus + g.t_minus * g.t_plus);
}

} // namespace dsq
