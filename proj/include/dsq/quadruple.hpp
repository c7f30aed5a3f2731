#pragma once
// Spectral quadruple data and the axiom checks on truncated matrices.

#include "dsq/opcore.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace dsq {

struct SpectralQuadruple {
    BasisDescriptor basis;
    TruncatedOperator u;
    TruncatedOperator e_perp;
    TruncatedOperator gamma;
    AntilinearOperator cc;
    TruncatedOperator t21;
    TruncatedOperator t_plus;
    TruncatedOperator t_minus;
    TruncatedOperator ih; // the antihermitian generator iH
    int spacetime_dim = 2;
};

struct CheckEntry {
    std::string id;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    int margin = 0;
    std::string notes;
};

using AxiomReport = std::vector<CheckEntry>;

inline CheckEntry make_check(std::string id, double residual, double tol, int margin = 0, std::string notes = {})
{
    return {std::move(id), residual, tol, residual <= tol, margin, std::move(notes)};
}

inline void append(AxiomReport& dst, const AxiomReport& src) { dst.insert(dst.end(), src.begin(), src.end()); }

inline bool all_pass(const AxiomReport& r)
{
    return std::all_of(r.begin(), r.end(), [](const CheckEntry& e) { return e.pass; });
}

/// s(n) = (n-1)(n-2)(n-3)(n-4)/8.
inline std::int64_t s_exponent(std::int64_t n) { return (n - 1) * (n - 2) * (n - 3) * (n - 4) / 8; }

inline int parity_sign(std::int64_t e) { return (e % 2 == 0) ? 1 : -1; }

/// Required value of C^2.
inline int cc_square_sign(int spacetime_dim) { return parity_sign(s_exponent(spacetime_dim)); }

// ---- time vector and volume element (plain-matrix forms) ------------------

inline AxiomReport time_vector_entries(const Mat& e_perp, double tol = 1e-12)
{
    const Mat id = Mat::Identity(e_perp.rows(), e_perp.cols());
    return {make_check("time_vector.square", op_norm(e_perp * e_perp + id), tol),
            make_check("time_vector.antihermitian", op_norm(e_perp.adjoint() + e_perp), tol)};
}

inline AxiomReport volume_element_entries(const Mat& e_perp, const Mat& gamma, int spacetime_dim, double tol = 1e-12)
{
    const Mat id = Mat::Identity(gamma.rows(), gamma.cols());
    const Mat g2 = gamma * gamma;
    const double rp = op_norm(g2 - id);
    const double rm = op_norm(g2 + id);
    AxiomReport out;
    out.push_back(make_check("volume.gamma_square", std::min(rp, rm), tol, 0, rp <= rm ? "gamma^2 = +1" : "gamma^2 = -1"));
    if (spacetime_dim % 2 == 0)
        out.push_back(make_check("volume.anticommute_e_perp", op_norm(e_perp * gamma + gamma * e_perp), tol, 0, "even dimension"));
    else
        out.push_back(make_check("volume.commute_e_perp", op_norm(e_perp * gamma - gamma * e_perp), tol, 0, "odd dimension"));
    return out;
}

inline AxiomReport check_time_vector(const SpectralQuadruple& q, double tol = 1e-12)
{
    return time_vector_entries(q.e_perp.matrix(), tol);
}

inline AxiomReport check_volume_element(const SpectralQuadruple& q, double tol = 1e-12)
{
    return volume_element_entries(q.e_perp.matrix(), q.gamma.matrix(), q.spacetime_dim, tol);
}

// ---- dynamics ------------------------------------------------------------

inline TruncatedOperator opposite(const SpectralQuadruple& q, const TruncatedOperator& g)
{
    return antilinear_conjugate(q.cc, g);
}

/// interior_residual([[f, iH], C g† C], margin); `ih` overrides the stored generator.
inline double check_first_order(const SpectralQuadruple& q, const TruncatedOperator& f, const TruncatedOperator& g, int margin,
                                const TruncatedOperator* ih = nullptr)
{
    const TruncatedOperator& h = ih ? *ih : q.ih;
    return interior_residual(commutator(commutator(f, h), opposite(q, g)), margin);
}

inline AxiomReport check_charge_conjugation(const SpectralQuadruple& q, int margin, double tol = 1e-10)
{
    AxiomReport out;
    const int sign = cc_square_sign(q.spacetime_dim);
    Mat c2 = q.cc.compose(q.cc).matrix() - double(sign) * Mat::Identity(q.basis.dim(), q.basis.dim());
    out.push_back(make_check("cc.square", op_norm(c2), tol, 0, sign > 0 ? "C^2 = +1 required" : "C^2 = -1 required"));
    InteriorProjector p(q.basis, margin);
    auto res = [&](const TruncatedOperator& a, const TruncatedOperator& b) {
        return op_norm(p.compress(antilinear_intertwining(q.cc, a, b)));
    };
    out.push_back(make_check("cc.t21", res(q.t21, q.t21), tol, margin, "C T21 = T21 C"));
    out.push_back(make_check("cc.tplus", res(q.t_plus, q.t_minus), tol, margin, "C T+ = T- C"));
    out.push_back(make_check("cc.tminus", res(q.t_minus, q.t_plus), tol, margin, "C T- = T+ C"));
    out.push_back(make_check("cc.ih", res(q.ih, q.ih), tol, margin, "C iH = iH C"));
    out.push_back(make_check("cc.u_op", interior_residual(opposite(q, q.u) - q.u, margin), tol, margin, "u^op = C u* C = u"));
    return out;
}

/// gamma[iH, gamma] in even dimension, iH in odd dimension.
inline TruncatedOperator spatial_dirac(const SpectralQuadruple& q)
{
    if (q.spacetime_dim % 2 == 1) return q.ih;
    return q.gamma * commutator(q.ih, q.gamma);
}

struct OrientabilityResult {
    double residual = 1.0;
    std::vector<std::pair<int, int>> monomials; // (p, q)
    std::vector<cplx> coefficients;
};

/// Least-squares membership of gamma in span{e_perp u^p [D, u^q]} (even) or
/// span{u^p [D, u^q]} (odd), |p|,|q| <= bound, q != 0, interior Frobenius norm.
inline OrientabilityResult check_orientability(const SpectralQuadruple& q, int bound, int margin)
{
    if (bound < 1) throw std::invalid_argument("check_orientability: empty monomial span");
    InteriorProjector proj(q.basis, margin);
    const TruncatedOperator d = spatial_dirac(q);
    OrientabilityResult out;
    std::vector<Mat> cols;
    for (int p = -bound; p <= bound; ++p)
        for (int k = -bound; k <= bound; ++k) {
            if (k == 0) continue;
            TruncatedOperator uk = shift_power(q.u, k);
            TruncatedOperator x = shift_power(q.u, p) * commutator(d, uk);
            if (q.spacetime_dim % 2 == 0) x = q.e_perp * x;
            cols.push_back(proj.compress(x.matrix()));
            out.monomials.emplace_back(p, k);
        }
    const Mat target = proj.compress(q.gamma.matrix());
    const double tnorm = target.norm();
    if (tnorm == 0.0) throw std::invalid_argument("check_orientability: gamma vanishes on the interior");
    const Eigen::Index n = target.size();
    Mat a(n, Eigen::Index(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) a.col(Eigen::Index(j)) = cols[j].reshaped();
    Vec b = target.reshaped();
    Vec coef = Vec::Zero(a.cols());
    if (a.norm() > 0.0) coef = a.completeOrthogonalDecomposition().solve(b);
    out.residual = (b - a * coef).norm() / tnorm;
    out.coefficients.assign(coef.data(), coef.data() + coef.size());
    return out;
}

/// Projectors onto the ±i eigenspaces of e_perp.
inline std::pair<TruncatedOperator, TruncatedOperator> e_perp_projectors(const SpectralQuadruple& q)
{
    const TruncatedOperator id = TruncatedOperator::identity(q.basis);
    return {0.5 * (id - I * q.e_perp), 0.5 * (id + I * q.e_perp)};
}

/// Median of the interior fiber-block norms of a shift-degree-k operator, and
/// the worst relative deviation from it.
inline std::pair<double, double> level_uniformity(const TruncatedOperator& a, int k, int margin)
{
    InteriorProjector p(a.basis(), margin + std::abs(k));
    std::vector<double> norms;
    for (int li : p.interior_levels()) norms.push_back(op_norm(a.block(li + k, li)));
    if (norms.empty()) return {0.0, 0.0};
    std::vector<double> s = norms;
    std::sort(s.begin(), s.end());
    const double med = s[s.size() / 2];
    double dev = 0.0;
    for (double v : norms) dev = std::max(dev, std::abs(v - med));
    return {med, med > 0.0 ? dev / med : dev};
}

/// The spatial triple on each e_perp eigenspace. D_s = e_perp[H, e_perp] with
/// H = -i iH maps one eigenspace to the other; the eigenspaces are identified
/// through the odd unitary e_perp*gamma, D_σ = Π_σ (e_perp gamma) D_s Π_σ.
inline AxiomReport check_spatial_triple(const SpectralQuadruple& q, int margin, double tol = 1e-8)
{
    if (q.spacetime_dim % 2 == 1) throw std::invalid_argument("check_spatial_triple: odd spacetime dimension");
    const TruncatedOperator h = (-I) * q.ih;
    const TruncatedOperator ds = q.e_perp * commutator(h, q.e_perp);
    const TruncatedOperator w = q.e_perp * q.gamma;
    auto [pp, pm] = e_perp_projectors(q);
    AxiomReport out;
    const TruncatedOperator uop = opposite(q, q.u);
    const char* names[2] = {"+", "-"};
    const TruncatedOperator* projs[2] = {&pp, &pm};
    for (int s = 0; s < 2; ++s) {
        const TruncatedOperator& pr = *projs[s];
        const TruncatedOperator dsig = pr * w * ds * pr;
        const std::string tag = names[s];
        const double scale = std::max(1.0, interior_residual(dsig, margin));
        std::string note = interior_residual(dsig, margin) <= 1e-12 ? "degenerate: D_s vanishes on this eigenspace" : "nondegenerate";
        out.push_back(make_check("spatial.selfadjoint" + tag, interior_residual(dsig - adjoint(dsig), margin) / scale, tol, margin, note));
        const TruncatedOperator cu = commutator(dsig, q.u);
        auto [med, dev] = level_uniformity(cu, 1, margin);
        out.push_back(make_check("spatial.bounded" + tag, dev, tol, margin, "median block norm " + std::to_string(med)));
        out.push_back(make_check("spatial.first_order" + tag, interior_residual(commutator(commutator(q.u, dsig), uop), margin) / scale, tol, margin));
    }
    return out;
}

inline AxiomReport check_symmetric_conditions(const SpectralQuadruple& q, int margin, double tol = 1e-10)
{
    AxiomReport out;
    auto add = [&](const std::string& id, const TruncatedOperator& a) {
        out.push_back(make_check(id, interior_residual(a, margin), tol, margin));
    };
    add("sym.t21_u", commutator(q.t21, q.u) - I * q.u);
    add("sym.t21_e_perp", commutator(q.t21, q.e_perp));
    add("sym.t21_gamma", commutator(q.t21, q.gamma));
    add("sl2.t21_tplus", commutator(q.t21, q.t_plus) - I * q.t_plus);
    add("sl2.t21_tminus", commutator(q.t21, q.t_minus) + I * q.t_minus);
    add("sl2.tplus_tminus", commutator(q.t_plus, q.t_minus) + 2.0 * I * q.t21);
    add("sl2.tplus_adjoint", adjoint(q.t_plus) + q.t_minus);
    add("sl2.tminus_adjoint", adjoint(q.t_minus) + q.t_plus);
    add("sl2.t21_antihermitian", adjoint(q.t21) + q.t21);
    return out;
}

/// ‖[e^{t iH} u e^{-t iH}, u]‖ on the interior.
inline double noncommutativity(const SpectralQuadruple& q, double t, int margin)
{
    const Mat e = expm(t * q.ih.matrix());
    const Mat einv = expm(-t * q.ih.matrix());
    TruncatedOperator ut(q.basis, e * q.u.matrix() * einv);
    return interior_residual(commutator(ut, q.u), margin);
}

/// Full axiom sweep used by the CLI and the acceptance suite.
/// `expect_noncommutative` is false for the massless family, whose evolved
/// algebras commute at all times.
inline AxiomReport verify_quadruple(const SpectralQuadruple& q, int margin, bool expect_noncommutative = true, double tol = 1e-10)
{
    AxiomReport out;
    append(out, check_time_vector(q));
    append(out, check_volume_element(q));
    append(out, check_symmetric_conditions(q, std::min(margin, 2), tol));
    append(out, check_charge_conjugation(q, std::min(margin, 2), tol));
    out.push_back(make_check("first_order.u_u", check_first_order(q, q.u, q.u, std::min(margin, 2)), tol, std::min(margin, 2)));
    TruncatedOperator u2 = q.u * q.u;
    out.push_back(make_check("first_order.u2_u", check_first_order(q, u2, q.u, std::min(margin, 3)), tol, std::min(margin, 3)));
    out.push_back(make_check("first_order.symmetry",
                             std::abs(check_first_order(q, u2, q.u, std::min(margin, 3)) - check_first_order(q, q.u, u2, std::min(margin, 3))),
                             tol, std::min(margin, 3), "f,g exchange"));
    const int om = std::max(margin, 4);
    if (om < q.basis.nmax()) {
        auto o = check_orientability(q, 2, om);
        out.push_back(make_check("orientability", o.residual, 1e-8, om, "degree window 2"));
    }
    if (q.spacetime_dim % 2 == 0) append(out, check_spatial_triple(q, margin, 1e-8));
    const double nc = noncommutativity(q, 1.0, std::min(margin, 2));
    if (expect_noncommutative)
        out.push_back(make_check("noncommutative", nc > 1e-4 ? 0.0 : 1e-4 - nc, 0.0, std::min(margin, 2),
                                 "||[u(1),u]|| = " + std::to_string(nc)));
    else
        out.push_back(make_check("commutative_family", nc, tol, std::min(margin, 2), "massless: evolved algebras commute"));
    return out;
}

} // namespace dsq
