#pragma once

///
/// \file operators.hpp
///
/// Finite sections of Hankel and Toeplitz operators on H^2, the Hilbert
/// matrix, and the dense linear algebra used by the verification modules:
/// operator norm, numerical null space with a singular-value gap rule.
///

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "blaschke.hpp"
#include "core.hpp"
#include "fourier.hpp"

namespace hlift
{

enum class SpaceKind
{
    AnalyticSection, ///< span{1, z, ..., z^N}
    ModelSpace,      ///< Q_u in a Takenaka-Malmquist basis
};

struct SpaceTag
{
    SpaceKind kind = SpaceKind::AnalyticSection;
    int order      = 0;
    std::optional<BlaschkeProduct> inner;

    static SpaceTag analytic(int N)
    {
        return {SpaceKind::AnalyticSection, N, std::nullopt};
    }

    static SpaceTag model(const BlaschkeProduct& u, int N)
    {
        return {SpaceKind::ModelSpace, N, u};
    }

    int dimension() const
    {
        return kind == SpaceKind::AnalyticSection ? order + 1 : inner->degree();
    }
};

enum class Structure
{
    General,
    Hankel,
    Toeplitz,
};

struct OperatorMatrix
{
    CMatrix entries;
    SpaceTag domain;
    SpaceTag codomain;
    int build_order      = 0;
    Structure structure  = Structure::General;

    Eigen::Index rows() const
    {
        return entries.rows();
    }
    Eigen::Index cols() const
    {
        return entries.cols();
    }
};

//------------------------------------------------------------------------------
// Assembly
//------------------------------------------------------------------------------

/// (N+1)x(N+1) section of H_phi: entry(m, n) = phi_hat(m + n).
inline OperatorMatrix hankel_matrix(const Symbol& phi, int N)
{
    require(N >= 0, ErrorKind::InvalidArgument, "negative order");
    require(phi.covers(0, 2 * N), ErrorKind::InsufficientCoefficients,
            "Hankel section of order " + std::to_string(N) +
                " needs coefficients 0.." + std::to_string(2 * N));
    std::vector<cplx> c(2 * N + 1);
    for (int k = 0; k <= 2 * N; ++k)
    {
        c[k] = phi.coefficient(k);
    }
    CMatrix h(N + 1, N + 1);
    for (int n = 0; n <= N; ++n)
    {
        for (int m = 0; m <= N; ++m)
        {
            h(m, n) = c[m + n];
        }
    }
    return {std::move(h), SpaceTag::analytic(N), SpaceTag::analytic(N), N,
            Structure::Hankel};
}

/// (N+1)x(N+1) section of T_phi: entry(m, n) = phi_hat(m - n).
inline OperatorMatrix toeplitz_matrix(const Symbol& phi, int N)
{
    require(N >= 0, ErrorKind::InvalidArgument, "negative order");
    require(phi.covers(-N, N), ErrorKind::InsufficientCoefficients,
            "Toeplitz section of order " + std::to_string(N) +
                " needs coefficients -N..N");
    CMatrix t(N + 1, N + 1);
    for (int n = 0; n <= N; ++n)
    {
        for (int m = 0; m <= N; ++m)
        {
            t(m, n) = phi.coefficient(m - n);
        }
    }
    return {std::move(t), SpaceTag::analytic(N), SpaceTag::analytic(N), N,
            Structure::Toeplitz};
}

/// Section of T_z.
inline OperatorMatrix shift_matrix(int N)
{
    return toeplitz_matrix(Symbol::monomial(1), N);
}

/// Hilbert's matrix 1/(m+n+1), m, n = 0..N.
inline OperatorMatrix hilbert_hankel(int N)
{
    require(N >= 0, ErrorKind::InvalidArgument, "negative order");
    CMatrix h(N + 1, N + 1);
    for (int n = 0; n <= N; ++n)
    {
        for (int m = 0; m <= N; ++m)
        {
            h(m, n) = 1.0 / (m + n + 1.0);
        }
    }
    return {std::move(h), SpaceTag::analytic(N), SpaceTag::analytic(N), N,
            Structure::Hankel};
}

///
/// log of the LDL^T pivots of the Hilbert section.  As a Cauchy matrix
/// 1/(x_i + y_j) with x_i = i, y_j = j + 1, its pivots are
///
///   d_k = 1/(x_k + y_k) * prod_{j<k} (x_k - x_j)(y_k - y_j)
///                                   / ((x_k + y_j)(x_j + y_k)),
///
/// a product of positive factors; evaluating it in logs certifies positive
/// definiteness far below double precision.
///
inline std::vector<double> hilbert_log_pivots(int N)
{
    std::vector<double> out(N + 1);
    for (int k = 0; k <= N; ++k)
    {
        double acc = -std::log(2.0 * k + 1.0);
        for (int j = 0; j < k; ++j)
        {
            const double xk = k, xj = j, yk = k + 1.0, yj = j + 1.0;
            acc += std::log(xk - xj) + std::log(yk - yj) - std::log(xk + yj) -
                   std::log(xj + yk);
        }
        out[k] = acc;
    }
    return out;
}

//------------------------------------------------------------------------------
// Singular values
//------------------------------------------------------------------------------

/// Dense SVD is used up to this many rows/columns; power iteration above.
inline constexpr Eigen::Index kDenseSvdLimit = 512;

inline std::vector<double> singular_values(const CMatrix& m)
{
    if (m.size() == 0)
    {
        return {};
    }
    Eigen::BDCSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

namespace detail
{

// Largest singular value by power iteration on A^*A, stopped on the
// eigen-residual ||A^*A v - lambda v|| <= 1e-12 lambda.
inline double power_norm(const CMatrix& a, int max_iter = 20000)
{
    const Eigen::Index n = a.cols();
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        v[i] = cplx(1.0 + 1e-3 * std::sin(1.0 + i), 1e-3 * std::cos(2.0 + i));
    }
    v.normalize();
    for (int it = 0; it < max_iter; ++it)
    {
        const CVector w      = a.adjoint() * (a * v);
        const double lambda  = std::real(v.dot(w));
        const double wnorm   = w.norm();
        if (wnorm == 0.0)
        {
            return 0.0;
        }
        const double resid = (w - lambda * v).norm();
        if (resid <= 1e-12 * lambda)
        {
            return std::sqrt(lambda);
        }
        v = w / wnorm;
    }
    fail(ErrorKind::NoConvergence,
         "power iteration hit its cap of " + std::to_string(max_iter));
}

} // namespace detail

/// Largest singular value.
inline double operator_norm(const CMatrix& m)
{
    if (m.size() == 0)
    {
        return 0.0;
    }
    if (std::max(m.rows(), m.cols()) > kDenseSvdLimit)
    {
        return detail::power_norm(m);
    }
    return singular_values(m).front();
}

inline double operator_norm(const OperatorMatrix& m)
{
    return operator_norm(m.entries);
}

///
/// log of the smallest singular value of the Hilbert section, from the norm
/// of its exact inverse (n = N + 1, i, j = 0..N):
///
///   (Gamma^-1)_ij = (-1)^(i+j) (i+j+1) C(n+i, n-j-1) C(n+j, n-i-1) C(i+j, i)^2.
///
/// The inverse is rescaled by its largest entry before the norm is taken,
/// so the result stays accurate where the SVD of Gamma only sees rounding.
///
inline double hilbert_log_min_singular_value(int N)
{
    require(N >= 0, ErrorKind::InvalidArgument, "negative order");
    const int n       = N + 1;
    const auto lbinom = [](double a, double b)
    { return std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1); };
    Eigen::MatrixXd logs(n, n);
    for (int j = 0; j < n; ++j)
    {
        for (int i = 0; i < n; ++i)
        {
            logs(i, j) = std::log(i + j + 1.0) + lbinom(n + i, n - j - 1) +
                         lbinom(n + j, n - i - 1) + 2 * lbinom(i + j, i);
        }
    }
    const double top = logs.maxCoeff();
    CMatrix scaled(n, n);
    for (int j = 0; j < n; ++j)
    {
        for (int i = 0; i < n; ++i)
        {
            scaled(i, j) = ((i + j) % 2 ? -1.0 : 1.0) * std::exp(logs(i, j) - top);
        }
    }
    return -top - std::log(operator_norm(scaled));
}

//------------------------------------------------------------------------------
// Null space with gap rule
//------------------------------------------------------------------------------

/// Singular values within a factor 10 of the cut on either side make the rank
/// ambiguous.
inline constexpr double kGapFactor = 10.0;

struct NullSpace
{
    CMatrix basis;                       ///< orthonormal kernel columns
    std::vector<double> singular_values; ///< descending, padded with zeros
    double cut = 0.0;
    std::optional<double> sv_below;      ///< largest value <= cut
    std::optional<double> sv_above;      ///< smallest value > cut
    bool ambiguous = false;

    int dimension() const
    {
        return static_cast<int>(basis.cols());
    }

    /// sv_above / sv_below (infinite when either side is empty or zero).
    double gap() const
    {
        if (!sv_below || !sv_above || *sv_below == 0.0)
        {
            return kInf;
        }
        return *sv_above / *sv_below;
    }
};

///
/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular value is <= rank_tol (default 1e-8 * largest singular value).
/// Throws AmbiguousRank when a singular value falls in
/// (rank_tol / 10, 10 * rank_tol) and `enforce_gap` is set.
///
inline NullSpace null_space(const CMatrix& m,
                            std::optional<double> rank_tol = std::nullopt,
                            bool enforce_gap              = true)
{
    NullSpace out;
    const Eigen::Index n = m.cols();
    if (n == 0)
    {
        out.basis = CMatrix(m.rows(), 0);
        return out;
    }
    Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    out.singular_values.assign(s.data(), s.data() + s.size());
    out.singular_values.resize(n, 0.0); // wide matrices: implicit zeros

    const double smax = out.singular_values.front();
    out.cut           = rank_tol ? *rank_tol : 1e-8 * smax;
    require(out.cut >= 0.0, ErrorKind::InvalidArgument, "negative rank_tol");

    int rank = 0;
    for (double v : out.singular_values)
    {
        if (v > out.cut)
        {
            ++rank;
            out.sv_above = v;
        }
        else if (!out.sv_below)
        {
            out.sv_below = v;
        }
        if (v > out.cut / kGapFactor && v < out.cut * kGapFactor)
        {
            out.ambiguous = true;
        }
    }
    if (out.ambiguous && enforce_gap)
    {
        fail(ErrorKind::AmbiguousRank,
             "singular value within a factor " +
                 detail::format_double(kGapFactor) + " of cut " +
                 detail::format_double(out.cut));
    }
    out.basis = svd.matrixV().rightCols(n - rank);
    return out;
}

//------------------------------------------------------------------------------
// Structural residuals
//------------------------------------------------------------------------------

/// Norm of the top-left (N+1)-section of T_z^* H_phi - H_phi T_z built from an
/// order-(N+1) section.
inline double hankel_intertwine_residual(const Symbol& phi, int N)
{
    require(phi.covers(0, 2 * N + 2), ErrorKind::InsufficientCoefficients,
            "needs coefficients 0..2N+2");
    const CMatrix h = hankel_matrix(phi, N + 1).entries;
    const CMatrix s = shift_matrix(N + 1).entries;
    const CMatrix d = s.adjoint() * h - h * s;
    return operator_norm(CMatrix(d.topLeftCorner(N + 1, N + 1)));
}

/// max |T_z^* T_phi T_z - T_phi| over the order-N section, with the left side
/// built from the order-(N+1) section.  Every entry is a single product with
/// 1, so equality is exact in floating point.
inline double brown_halmos_residual(const Symbol& phi, int N)
{
    const CMatrix t = toeplitz_matrix(phi, N + 1).entries;
    const CMatrix s = shift_matrix(N + 1).entries;
    const CMatrix lhs = (s.adjoint() * t * s).topLeftCorner(N + 1, N + 1);
    return (lhs - toeplitz_matrix(phi, N).entries).cwiseAbs().maxCoeff();
}

/// max |H_phi^* - H_{conj(J phi)}| entrywise on the order-N section.
inline double hankel_adjoint_residual(const Symbol& phi, int N)
{
    const CMatrix a = hankel_matrix(phi, N).entries.adjoint();
    const CMatrix b = hankel_matrix(conj_flip_symbol(phi), N).entries;
    return (a - b).cwiseAbs().maxCoeff();
}

/// Largest deviation of a square matrix from Hankel structure, i.e. the
/// spread of the entries along each anti-diagonal m + n = const.
inline double hankel_structure_residual(const CMatrix& m)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i + 1 < m.rows(); ++i)
    {
        for (Eigen::Index j = 1; j < m.cols(); ++j)
        {
            worst = std::max(worst, std::abs(m(i, j) - m(i + 1, j - 1)));
        }
    }
    return worst;
}

/// Largest deviation from Toeplitz structure (constant diagonals).
inline double toeplitz_structure_residual(const CMatrix& m)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i + 1 < m.rows(); ++i)
    {
        for (Eigen::Index j = 0; j + 1 < m.cols(); ++j)
        {
            worst = std::max(worst, std::abs(m(i, j) - m(i + 1, j + 1)));
        }
    }
    return worst;
}

} // namespace hlift
