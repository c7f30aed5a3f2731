#pragma once
// Dense complex operators on truncated level bases, antilinear maps,
// commutators, norms and interior projections.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsq {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr cplx I{0.0, 1.0};

enum class Lattice { Integer, HalfInteger };

/// Index set {|n,σ>}: levels n symmetric about 0 with unit spacing, a fiber
/// of dimension 1 or 2 at each level. The default is the half-integer lattice
/// with a two-dimensional fiber, dim = 4*nmax.
/// A "plain" basis has no level structure and is used for finite spaces.
class BasisDescriptor {
public:
    explicit BasisDescriptor(int nmax, int fiber = 2, Lattice lattice = Lattice::HalfInteger)
        : nmax_(nmax), fiber_(fiber), lattice_(lattice)
    {
        if (nmax <= 0) throw std::invalid_argument("BasisDescriptor: nmax must be positive");
        if (fiber != 1 && fiber != 2) throw std::invalid_argument("BasisDescriptor: fiber must be 1 or 2");
    }

    static BasisDescriptor plain(int dim)
    {
        if (dim <= 0) throw std::invalid_argument("BasisDescriptor: plain dimension must be positive");
        BasisDescriptor b(1, 1, Lattice::Integer);
        b.plain_dim_ = dim;
        return b;
    }

    bool is_plain() const { return plain_dim_ > 0; }
    int nmax() const { return nmax_; }
    int fiber() const { return fiber_; }
    Lattice lattice() const { return lattice_; }

    /// Half-integer lattice: 2*nmax levels -nmax+1/2 .. nmax-1/2.
    /// Integer lattice: 2*nmax+1 levels -nmax .. nmax.
    int num_levels() const
    {
        if (is_plain()) return plain_dim_;
        return lattice_ == Lattice::HalfInteger ? 2 * nmax_ : 2 * nmax_ + 1;
    }
    int dim() const { return is_plain() ? plain_dim_ : num_levels() * fiber_; }

    double level(int li) const
    {
        return lattice_ == Lattice::HalfInteger ? li - nmax_ + 0.5 : double(li - nmax_);
    }
    double max_level() const { return level(num_levels() - 1); }

    /// Level index of weight n, or -1 when n is outside the window.
    int level_index(double n) const
    {
        double x = lattice_ == Lattice::HalfInteger ? n + nmax_ - 0.5 : n + nmax_;
        long k = std::lround(x);
        if (std::abs(x - double(k)) > 1e-9 || k < 0 || k >= num_levels()) return -1;
        return int(k);
    }

    int index(int li, int sigma) const { return li * fiber_ + sigma; }

    std::vector<double> levels() const
    {
        std::vector<double> out;
        for (int li = 0; li < num_levels(); ++li) out.push_back(level(li));
        return out;
    }

    bool operator==(const BasisDescriptor& o) const
    {
        return nmax_ == o.nmax_ && fiber_ == o.fiber_ && lattice_ == o.lattice_ && plain_dim_ == o.plain_dim_;
    }
    bool operator!=(const BasisDescriptor& o) const { return !(*this == o); }

private:
    int nmax_;
    int fiber_;
    Lattice lattice_;
    int plain_dim_ = 0;
};

class TruncatedOperator {
public:
    TruncatedOperator(BasisDescriptor basis, Mat entries, std::optional<int> shift_degree = std::nullopt)
        : basis_(std::move(basis)), m_(std::move(entries)), shift_(shift_degree)
    {
        if (m_.rows() != basis_.dim() || m_.cols() != basis_.dim())
            throw std::invalid_argument("TruncatedOperator: matrix size does not match basis dimension");
        if (shift_) {
            if (basis_.is_plain()) throw std::invalid_argument("TruncatedOperator: shift degree needs a level basis");
            const int f = basis_.fiber();
            for (int r = 0; r < m_.rows(); ++r)
                for (int c = 0; c < m_.cols(); ++c)
                    if (r / f - c / f != *shift_ && m_(r, c) != cplx(0.0))
                        throw std::invalid_argument("TruncatedOperator: entry outside declared shift band");
        }
    }

    static TruncatedOperator zero(const BasisDescriptor& b) { return {b, Mat::Zero(b.dim(), b.dim()), 0}; }
    static TruncatedOperator identity(const BasisDescriptor& b) { return {b, Mat::Identity(b.dim(), b.dim()), 0}; }

    const BasisDescriptor& basis() const { return basis_; }
    const Mat& matrix() const { return m_; }
    std::optional<int> shift_degree() const { return shift_; }

    /// Fiber block mapping level index `from` to level index `to`.
    Mat block(int to, int from) const
    {
        const int f = basis_.fiber();
        return m_.block(to * f, from * f, f, f);
    }

private:
    BasisDescriptor basis_;
    Mat m_;
    std::optional<int> shift_;
};

inline void require_same_basis(const TruncatedOperator& a, const TruncatedOperator& b, const char* what)
{
    if (a.basis() != b.basis()) throw std::invalid_argument(std::string(what) + ": basis mismatch");
}

inline TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b)
{
    require_same_basis(a, b, "operator+");
    std::optional<int> s;
    if (a.shift_degree() && b.shift_degree() && *a.shift_degree() == *b.shift_degree()) s = a.shift_degree();
    return {a.basis(), a.matrix() + b.matrix(), s};
}

inline TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b)
{
    require_same_basis(a, b, "operator-");
    std::optional<int> s;
    if (a.shift_degree() && b.shift_degree() && *a.shift_degree() == *b.shift_degree()) s = a.shift_degree();
    return {a.basis(), a.matrix() - b.matrix(), s};
}

inline TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b)
{
    require_same_basis(a, b, "operator*");
    std::optional<int> s;
    if (a.shift_degree() && b.shift_degree()) s = *a.shift_degree() + *b.shift_degree();
    return {a.basis(), a.matrix() * b.matrix(), s};
}

inline TruncatedOperator operator*(cplx z, const TruncatedOperator& a)
{
    return {a.basis(), z * a.matrix(), a.shift_degree()};
}
inline TruncatedOperator operator*(const TruncatedOperator& a, cplx z) { return z * a; }
inline TruncatedOperator operator-(const TruncatedOperator& a) { return cplx(-1.0) * a; }

inline TruncatedOperator adjoint(const TruncatedOperator& a)
{
    std::optional<int> s;
    if (a.shift_degree()) s = -*a.shift_degree();
    return {a.basis(), a.matrix().adjoint(), s};
}

inline TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b)
{
    return a * b - b * a;
}

inline TruncatedOperator anticommutator(const TruncatedOperator& a, const TruncatedOperator& b)
{
    return a * b + b * a;
}

/// Largest singular value.
inline double op_norm(const Mat& m)
{
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}
inline double op_norm(const TruncatedOperator& a) { return op_norm(a.matrix()); }

inline double frobenius_norm(const TruncatedOperator& a) { return a.matrix().norm(); }

/// Projector onto levels with |n| <= max_level - margin.
class InteriorProjector {
public:
    InteriorProjector(BasisDescriptor basis, int margin) : basis_(std::move(basis)), margin_(margin)
    {
        if (margin < 0) throw std::invalid_argument("InteriorProjector: margin must be nonnegative");
        if (!basis_.is_plain() && margin >= basis_.nmax())
            throw std::invalid_argument("InteriorProjector: margin must be smaller than nmax");
    }

    bool contains_level(int li) const
    {
        if (basis_.is_plain()) return margin_ == 0;
        return std::abs(basis_.level(li)) <= basis_.max_level() - margin_ + 1e-12;
    }

    std::vector<int> interior_levels() const
    {
        std::vector<int> out;
        for (int li = 0; li < basis_.num_levels(); ++li)
            if (contains_level(li)) out.push_back(li);
        return out;
    }

    Mat diagonal_mask() const
    {
        Mat p = Mat::Zero(basis_.dim(), basis_.dim());
        if (basis_.is_plain()) {
            if (margin_ == 0) p.setIdentity();
            return p;
        }
        const int f = basis_.fiber();
        for (int li : interior_levels())
            for (int s = 0; s < f; ++s) p(li * f + s, li * f + s) = 1.0;
        return p;
    }

    TruncatedOperator matrix() const { return {basis_, diagonal_mask(), basis_.is_plain() ? std::nullopt : std::optional<int>(0)}; }

    /// P A P without forming the projector product.
    Mat compress(const Mat& a) const
    {
        Mat out = Mat::Zero(a.rows(), a.cols());
        if (basis_.is_plain()) {
            if (margin_ == 0) out = a;
            return out;
        }
        const int f = basis_.fiber();
        auto lv = interior_levels();
        for (int r : lv)
            for (int c : lv) out.block(r * f, c * f, f, f) = a.block(r * f, c * f, f, f);
        return out;
    }

    int margin() const { return margin_; }
    const BasisDescriptor& basis() const { return basis_; }

private:
    BasisDescriptor basis_;
    int margin_;
};

inline TruncatedOperator interior(const TruncatedOperator& a, int margin)
{
    InteriorProjector p(a.basis(), margin);
    return {a.basis(), p.compress(a.matrix()), a.shift_degree()};
}

inline double interior_residual(const TruncatedOperator& a, int margin)
{
    InteriorProjector p(a.basis(), margin);
    return op_norm(p.compress(a.matrix()));
}

/// [f, [iH,f], [iH,[iH,f]]/2!, ...] up to kmax. `ih` is the antihermitian generator.
inline std::vector<TruncatedOperator> bch_terms(const TruncatedOperator& ih, const TruncatedOperator& f, int kmax)
{
    if (kmax < 0) throw std::invalid_argument("bch_terms: kmax must be nonnegative");
    require_same_basis(ih, f, "bch_terms");
    std::vector<TruncatedOperator> out{f};
    TruncatedOperator cur = f;
    for (int k = 1; k <= kmax; ++k) {
        cur = (1.0 / double(k)) * commutator(ih, cur);
        out.push_back(cur);
    }
    return out;
}

/// v -> matrix * conj(v).
class AntilinearOperator {
public:
    AntilinearOperator(BasisDescriptor basis, Mat matrix) : basis_(std::move(basis)), m_(std::move(matrix))
    {
        if (m_.rows() != basis_.dim() || m_.cols() != basis_.dim())
            throw std::invalid_argument("AntilinearOperator: matrix size does not match basis dimension");
    }

    const BasisDescriptor& basis() const { return basis_; }
    const Mat& matrix() const { return m_; }

    Vec apply(const Vec& v) const { return m_ * v.conjugate(); }

    /// this ∘ other, a linear operator with matrix M1 conj(M2).
    TruncatedOperator compose(const AntilinearOperator& other) const
    {
        if (basis_ != other.basis_) throw std::invalid_argument("AntilinearOperator::compose: basis mismatch");
        return {basis_, m_ * other.m_.conjugate()};
    }

    /// this ∘ A (antilinear).
    AntilinearOperator after(const TruncatedOperator& a) const
    {
        if (basis_ != a.basis()) throw std::invalid_argument("AntilinearOperator::after: basis mismatch");
        return {basis_, m_ * a.matrix().conjugate()};
    }

    /// A ∘ this (antilinear).
    AntilinearOperator before(const TruncatedOperator& a) const
    {
        if (basis_ != a.basis()) throw std::invalid_argument("AntilinearOperator::before: basis mismatch");
        return {basis_, a.matrix() * m_};
    }

private:
    BasisDescriptor basis_;
    Mat m_;
};

/// Matrix of the antilinear difference C∘A − B∘C (both sides antilinear).
inline Mat antilinear_intertwining(const AntilinearOperator& c, const TruncatedOperator& a, const TruncatedOperator& b)
{
    return c.after(a).matrix() - c.before(b).matrix();
}

/// g^op = C ∘ A† ∘ C, a linear operator.
inline TruncatedOperator antilinear_conjugate(const AntilinearOperator& c, const TruncatedOperator& a)
{
    if (c.basis() != a.basis()) throw std::invalid_argument("antilinear_conjugate: basis mismatch");
    Mat m = c.matrix() * a.matrix().adjoint().conjugate() * c.matrix().conjugate();
    return {c.basis(), m};
}

// ---- builders on level bases --------------------------------------------

/// Level-diagonal operator with fiber blocks blk(n).
template <class F>
TruncatedOperator level_diagonal(const BasisDescriptor& b, F&& blk)
{
    const int f = b.fiber();
    Mat m = Mat::Zero(b.dim(), b.dim());
    for (int li = 0; li < b.num_levels(); ++li) m.block(li * f, li * f, f, f) = blk(b.level(li));
    return {b, m, 0};
}

/// Operator with blocks blk(n) mapping level n to level n+k; dropped at the cutoff.
template <class F>
TruncatedOperator level_shift(const BasisDescriptor& b, int k, F&& blk)
{
    const int f = b.fiber();
    Mat m = Mat::Zero(b.dim(), b.dim());
    for (int li = 0; li < b.num_levels(); ++li) {
        int lj = li + k;
        if (lj < 0 || lj >= b.num_levels()) continue;
        m.block(lj * f, li * f, f, f) = blk(b.level(li));
    }
    return {b, m, k};
}

/// u|n,σ> = |n+1,σ>.
inline TruncatedOperator shift_operator(const BasisDescriptor& b)
{
    const int f = b.fiber();
    return level_shift(b, 1, [f](double) { return Mat::Identity(f, f); });
}

/// Integer power of the shift (negative powers use the adjoint).
inline TruncatedOperator shift_power(const TruncatedOperator& u, int p)
{
    TruncatedOperator out = TruncatedOperator::identity(u.basis());
    TruncatedOperator base = p >= 0 ? u : adjoint(u);
    for (int i = 0; i < std::abs(p); ++i) out = out * base;
    return out;
}

/// Fiberwise operator with the same block at every level.
inline TruncatedOperator fiberwise(const BasisDescriptor& b, const Mat& blk)
{
    return level_diagonal(b, [&](double) { return blk; });
}

inline Mat expm(const Mat& a) { return a.exp(); }

} // namespace dsq
