#pragma once
// Finite spectral triples from (dims, intersection form), their validation,
// the Connes distance between characters, and the time-extended quadruple.

#include "dsq/opcore.hpp"
#include "dsq/quadruple.hpp"

#include <functional>
#include <limits>
#include <sstream>

namespace dsq::finite {

struct FiniteTripleSpec {
    std::vector<int> dims;
    std::vector<std::vector<int>> q;
};

/// H_ij = C^{n_i} ⊗ C^{|q_ij|} ⊗ C^{n_j}, stored at `offset`.
struct Block {
    int i = 0, j = 0;
    int mult = 0;
    int offset = 0;
    int size = 0;
    int sign = 0;
};

struct FiniteTriple {
    FiniteTripleSpec spec;
    int hilbert_dim = 0;
    std::vector<Block> blocks;
    Mat gamma;
    Mat j_matrix; // J v = j_matrix * conj(v)
    Mat d;

    int block_of(int i, int j) const
    {
        for (std::size_t b = 0; b < blocks.size(); ++b)
            if (blocks[b].i == i && blocks[b].j == j) return int(b);
        return -1;
    }
};

/// Element of ⊕ M_{n_i}, one square matrix per summand.
using AlgebraElement = std::vector<Mat>;

namespace detail {
inline double det_int(std::vector<std::vector<double>> a)
{
    const std::size_t n = a.size();
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}
} // namespace detail

inline void validate_spec(const FiniteTripleSpec& s)
{
    const std::size_t k = s.dims.size();
    if (k == 0) throw std::invalid_argument("finite: empty algebra");
    if (s.q.size() != k) throw std::invalid_argument("finite: intersection form must be k x k");
    for (int d : s.dims)
        if (d <= 0) throw std::invalid_argument("finite: summand dimensions must be positive");
    std::vector<std::vector<double>> a(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i) {
        if (s.q[i].size() != k) throw std::invalid_argument("finite: intersection form must be k x k");
        for (std::size_t j = 0; j < k; ++j) {
            if (s.q[i][j] != s.q[j][i]) throw std::invalid_argument("finite: intersection form is not symmetric");
            a[i][j] = s.q[i][j];
        }
    }
    if (std::abs(detail::det_int(a)) < 0.5) throw std::invalid_argument("finite: intersection form is not invertible");
}

/// Hilbert space layout, grading and real structure for a spec.
inline FiniteTriple layout(const FiniteTripleSpec& s)
{
    validate_spec(s);
    FiniteTriple t;
    t.spec = s;
    const int k = int(s.dims.size());
    int off = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const int m = std::abs(s.q[i][j]);
            if (m == 0) continue;
            Block b{i, j, m, off, s.dims[i] * m * s.dims[j], s.q[i][j] > 0 ? 1 : -1};
            t.blocks.push_back(b);
            off += b.size;
        }
    t.hilbert_dim = off;
    t.gamma = Mat::Zero(off, off);
    t.j_matrix = Mat::Zero(off, off);
    for (const Block& b : t.blocks) {
        for (int x = 0; x < b.size; ++x) t.gamma(b.offset + x, b.offset + x) = double(b.sign);
        const Block& bt = t.blocks[t.block_of(b.j, b.i)];
        const int ni = s.dims[b.i], nj = s.dims[b.j];
        for (int al = 0; al < ni; ++al)
            for (int mu = 0; mu < b.mult; ++mu)
                for (int be = 0; be < nj; ++be) {
                    const int src = b.offset + (al * b.mult + mu) * nj + be;
                    const int dst = bt.offset + (be * b.mult + mu) * ni + al;
                    t.j_matrix(dst, src) = 1.0;
                }
    }
    t.d = Mat::Zero(off, off);
    return t;
}

inline std::string block_name(const FiniteTriple& t, int r, int c)
{
    auto find = [&](int x) {
        for (const Block& b : t.blocks)
            if (x >= b.offset && x < b.offset + b.size) return b;
        return Block{};
    };
    const Block a = find(r), b = find(c);
    std::ostringstream os;
    os << "(H_" << a.i + 1 << a.j + 1 << ", H_" << b.i + 1 << b.j + 1 << ")";
    return os.str();
}

inline FiniteTriple build_finite_triple(const FiniteTripleSpec& s, const Mat& d, double tol = 1e-12)
{
    FiniteTriple t = layout(s);
    if (d.rows() != t.hilbert_dim || d.cols() != t.hilbert_dim)
        throw std::invalid_argument("build_finite_triple: D must be " + std::to_string(t.hilbert_dim) + "x" + std::to_string(t.hilbert_dim));
    const Mat herm = d - d.adjoint();
    const Mat jd = t.j_matrix * d.conjugate() - d * t.j_matrix;
    for (int r = 0; r < d.rows(); ++r)
        for (int c = 0; c < d.cols(); ++c) {
            if (std::abs(herm(r, c)) > tol) throw std::invalid_argument("build_finite_triple: D != D* in block " + block_name(t, r, c));
            if (std::abs(jd(r, c)) > tol) throw std::invalid_argument("build_finite_triple: JD != DJ in block " + block_name(t, r, c));
        }
    t.d = d;
    return t;
}

/// π(a) acts on H_ij as a_i ⊗ 1 ⊗ 1.
inline Mat pi(const FiniteTriple& t, const AlgebraElement& a)
{
    Mat m = Mat::Zero(t.hilbert_dim, t.hilbert_dim);
    for (const Block& b : t.blocks) {
        const int ni = t.spec.dims[b.i], inner = b.mult * t.spec.dims[b.j];
        for (int r = 0; r < ni; ++r)
            for (int c = 0; c < ni; ++c)
                for (int x = 0; x < inner; ++x) m(b.offset + r * inner + x, b.offset + c * inner + x) = a[b.i](r, c);
    }
    return m;
}

/// π_op(a) acts on H_ij as 1 ⊗ 1 ⊗ a_jᵀ, equal to J π(a*) J^{-1}.
inline Mat pi_op(const FiniteTriple& t, const AlgebraElement& a)
{
    Mat m = Mat::Zero(t.hilbert_dim, t.hilbert_dim);
    for (const Block& b : t.blocks) {
        const int nj = t.spec.dims[b.j], outer = t.spec.dims[b.i] * b.mult;
        const Mat at = a[b.j].transpose();
        for (int x = 0; x < outer; ++x)
            for (int r = 0; r < nj; ++r)
                for (int c = 0; c < nj; ++c) m(b.offset + x * nj + r, b.offset + x * nj + c) = at(r, c);
    }
    return m;
}

/// Matrix units of every summand.
inline std::vector<AlgebraElement> algebra_basis(const FiniteTripleSpec& s)
{
    std::vector<AlgebraElement> out;
    for (std::size_t k = 0; k < s.dims.size(); ++k)
        for (int r = 0; r < s.dims[k]; ++r)
            for (int c = 0; c < s.dims[k]; ++c) {
                AlgebraElement a;
                for (int n : s.dims) a.push_back(Mat::Zero(n, n));
                a[k](r, c) = 1.0;
                out.push_back(a);
            }
    return out;
}

inline AxiomReport validate_finite_triple(const FiniteTriple& t, double tol = 1e-12)
{
    AxiomReport out;
    out.push_back(make_check("finite.selfadjoint", op_norm(t.d - t.d.adjoint()), tol));
    out.push_back(make_check("finite.real_structure", op_norm(t.j_matrix * t.d.conjugate() - t.d * t.j_matrix), tol, 0, "JD = DJ"));
    out.push_back(make_check("finite.odd", op_norm(t.gamma * t.d + t.d * t.gamma), tol, 0, "gamma D = -D gamma"));
    double fo = 0.0;
    const auto basis = algebra_basis(t.spec);
    for (const auto& ei : basis) {
        const Mat da = t.d * pi(t, ei) - pi(t, ei) * t.d;
        for (const auto& ej : basis) {
            const Mat po = pi_op(t, ej);
            fo = std::max(fo, op_norm(da * po - po * da));
        }
    }
    out.push_back(make_check("finite.first_order", fo, tol));
    double op = 0.0;
    for (const auto& ei : basis) {
        AlgebraElement star;
        for (const Mat& m : ei) star.push_back(m.adjoint());
        op = std::max(op, op_norm(pi_op(t, ei) - t.j_matrix * pi(t, star).conjugate() * t.j_matrix.adjoint().conjugate()));
    }
    out.push_back(make_check("finite.opposite_action", op, tol, 0, "pi_op(a) = J pi(a*) J^-1"));
    out.push_back(make_check("finite.j_square", op_norm(t.j_matrix * t.j_matrix.conjugate() - Mat::Identity(t.hilbert_dim, t.hilbert_dim)), tol, 0, "J^2 = +1"));
    return out;
}

struct SignTable {
    int j_square = 1;
    int jd = 1;
    int jgamma = 0; // 0 for odd n
};

/// Signs of J², JD vs DJ, Jγ vs γJ from the direct exponents.
inline SignTable sign_table(int n)
{
    if (n < 0) throw std::invalid_argument("sign_table: n must be nonnegative");
    const std::int64_t N = n;
    SignTable s;
    s.j_square = parity_sign((N - 1) * N * (N + 1) * (N + 2) / 8);
    s.jd = parity_sign(N * (N + 1) * (N + 2) / 2);
    s.jgamma = n % 2 == 0 ? parity_sign(N / 2) : 0;
    return s;
}

struct Distance {
    double value = 0.0;
    bool unbounded = false;
};

namespace detail {

/// ‖[D, π(a)]‖ with a_i = 1, a_j = 0 and the remaining summands set from p.
struct DistanceProblem {
    const FiniteTriple& t;
    int i, j;
    std::vector<int> free; // summands carrying parameters
    Mat base;
    std::vector<Mat> dirs;

    DistanceProblem(const FiniteTriple& tr, int ci, int cj) : t(tr), i(ci), j(cj)
    {
        const int k = int(t.spec.dims.size());
        AlgebraElement a0;
        for (int n : t.spec.dims) a0.push_back(Mat::Zero(n, n));
        a0[i](0, 0) = 1.0;
        base = comm(a0);
        for (int s = 0; s < k; ++s) {
            if (s == i || s == j) continue;
            const int n = t.spec.dims[s];
            // hermitian basis of M_n: E_rr, E_rc + E_cr, i(E_rc − E_cr)
            for (int r = 0; r < n; ++r)
                for (int c = r; c < n; ++c) {
                    for (int kind = 0; kind < (r == c ? 1 : 2); ++kind) {
                        AlgebraElement e;
                        for (int m : t.spec.dims) e.push_back(Mat::Zero(m, m));
                        if (r == c) e[s](r, r) = 1.0;
                        else if (kind == 0) e[s](r, c) = e[s](c, r) = 1.0;
                        else {
                            e[s](r, c) = I;
                            e[s](c, r) = -I;
                        }
                        dirs.push_back(comm(e));
                    }
                }
        }
    }

    Mat comm(const AlgebraElement& a) const
    {
        const Mat p = pi(t, a);
        return t.d * p - p * t.d;
    }

    Mat at(const std::vector<double>& x) const
    {
        Mat m = base;
        for (std::size_t l = 0; l < x.size(); ++l) m += x[l] * dirs[l];
        return m;
    }

    double value(const std::vector<double>& x) const { return op_norm(at(x)); }

    std::vector<double> subgradient(const std::vector<double>& x) const
    {
        Eigen::JacobiSVD<Mat> svd(at(x), Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Vec uu = svd.matrixU().col(0), vv = svd.matrixV().col(0);
        std::vector<double> g(x.size());
        for (std::size_t l = 0; l < x.size(); ++l) g[l] = (uu.adjoint() * dirs[l] * vv)(0, 0).real();
        return g;
    }
};

} // namespace detail

/// sup{|x_i(a) − x_j(a)| : ‖[D,π(a)]‖ ≤ 1} between the characters of the
/// one-dimensional summands i and j. Solved as 1 / min ‖[D,π(a)]‖ over
/// self-adjoint a with a_i = 1, a_j = 0.
inline Distance connes_distance(const FiniteTriple& t, int i, int j)
{
    const int k = int(t.spec.dims.size());
    for (int s : {i, j}) {
        if (s < 0 || s >= k) throw std::invalid_argument("connes_distance: state index out of range");
        if (t.spec.dims[s] != 1) throw std::invalid_argument("connes_distance: summand " + std::to_string(s) + " has no character");
    }
    if (i == j) return {0.0, false};
    detail::DistanceProblem prob(t, i, j);
    const std::size_t np = prob.dirs.size();
    std::vector<double> x(np, 0.0), best = x;
    double fbest = prob.value(x);

    if (np > 0) {
        // subgradient descent on the convex objective
        double step = 0.5;
        for (int it = 0; it < 400; ++it) {
            const auto g = prob.subgradient(x);
            double gn = 0.0;
            for (double v : g) gn += v * v;
            gn = std::sqrt(gn);
            if (gn < 1e-15) break;
            const double a = step / std::sqrt(1.0 + it);
            for (std::size_t l = 0; l < np; ++l) x[l] -= a * g[l] / gn;
            const double f = prob.value(x);
            if (f < fbest) {
                fbest = f;
                best = x;
            }
        }
        // deterministic pattern refinement along coordinate and diagonal directions
        std::vector<std::vector<double>> pattern;
        for (std::size_t l = 0; l < np; ++l)
            for (double sgn : {1.0, -1.0}) {
                std::vector<double> d(np, 0.0);
                d[l] = sgn;
                pattern.push_back(d);
            }
        for (std::size_t l = 0; l < np; ++l)
            for (std::size_t m = l + 1; m < np; ++m)
                for (double s1 : {1.0, -1.0})
                    for (double s2 : {1.0, -1.0}) {
                        std::vector<double> d(np, 0.0);
                        d[l] = s1;
                        d[m] = s2;
                        pattern.push_back(d);
                    }
        double h = 0.25;
        while (h > 1e-13) {
            bool improved = false;
            for (const auto& d : pattern) {
                std::vector<double> y = best;
                for (std::size_t l = 0; l < np; ++l) y[l] += h * d[l];
                const double f = prob.value(y);
                if (f < fbest - 1e-16) {
                    fbest = f;
                    best = y;
                    improved = true;
                }
            }
            if (!improved) h *= 0.5;
        }
    }
    const double scale = std::max(1.0, op_norm(t.d));
    if (fbest <= 1e-12 * scale) return {std::numeric_limits<double>::infinity(), true};
    return {1.0 / fbest, false};
}

// ---- the two-point example -------------------------------------------------

inline FiniteTripleSpec two_point_spec() { return {{1, 1}, {{1, -1}, {-1, 0}}}; }

inline Mat two_point_dirac(cplx m)
{
    Mat d = Mat::Zero(3, 3);
    d(0, 1) = m;
    d(0, 2) = std::conj(m);
    d(1, 0) = std::conj(m);
    d(2, 0) = m;
    return d;
}

inline FiniteTriple two_point_triple(cplx m) { return build_finite_triple(two_point_spec(), two_point_dirac(m)); }

// ---- time extension ----------------------------------------------------------

struct FiniteQuadruple {
    double t = 0.0;
    cplx m{0.0};
    FiniteTriple triple;
    Mat e_perp; // iγ
    Mat h;      // e_perp D
    int spacetime_dim = 1;

    Mat ih() const { return I * h; }
};

using DiracFamily = std::function<Mat(cplx)>;
using Schedule = std::vector<std::pair<double, cplx>>;

inline std::vector<FiniteQuadruple> quadruple_from_triple(const FiniteTripleSpec& s, const DiracFamily& family, const Schedule& schedule)
{
    std::vector<FiniteQuadruple> out;
    for (const auto& [t, m] : schedule) {
        FiniteQuadruple fq{t, m, build_finite_triple(s, family(m)), {}, {}, 1};
        fq.e_perp = I * fq.triple.gamma;
        fq.h = fq.e_perp * fq.triple.d;
        out.push_back(std::move(fq));
    }
    return out;
}

inline AxiomReport check_finite_quadruple(const FiniteQuadruple& fq, double tol = 1e-12)
{
    AxiomReport out = time_vector_entries(fq.e_perp, tol);
    append(out, volume_element_entries(fq.e_perp, fq.triple.gamma, fq.spacetime_dim, tol));
    const Mat ih = fq.ih();
    out.push_back(make_check("finite.cc_generator", op_norm(fq.triple.j_matrix * ih.conjugate() - ih * fq.triple.j_matrix), tol, 0,
                             "J commutes with the evolution generator"));
    out.push_back(make_check("finite.h_selfadjoint", op_norm(fq.h - fq.h.adjoint()), tol));
    return out;
}

inline std::vector<Distance> distance_trajectory(const std::vector<FiniteQuadruple>& qs, int i = 0, int j = 1)
{
    std::vector<Distance> out;
    for (const auto& fq : qs) out.push_back(connes_distance(fq.triple, i, j));
    return out;
}

} // namespace dsq::finite
