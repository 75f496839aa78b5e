#pragma once

///
/// \file intertwine.hpp
///
/// Operators X on a model space Q_u with S_z^* X = X S_z.
///
/// Such X exist (nonzero) exactly when theta = gcd{u, conj(J u)} is
/// nonconstant, and then X = H_phi |Q_u with phi = T_z^* theta is one of
/// them.  This header builds that construction, solves the intertwining
/// equation directly as a linear system for comparison, and checks that the
/// Hankel lift has the block form [X 0; 0 0] with equal norms.
///
/// Vectorization is column-major: vec(X)[i + j d] = X(i, j), so
/// vec(A X B) = (B^T kron A) vec(X).
///

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "blaschke.hpp"
#include "core.hpp"
#include "fourier.hpp"
#include "model_space.hpp"
#include "operators.hpp"

namespace hlift
{

inline constexpr double kDefaultRankTol = 1e-8;

/// theta = gcd{u, conj(J u)}.
inline BlaschkeProduct gcd_symbol_theta(const BlaschkeProduct& u,
                                        double tol = kDefaultMatchTol)
{
    return gcd_inner(u, conj_reflect(u), tol);
}

struct LiftingSymbol
{
    Symbol symbol;          ///< (T_z^*)^power theta, analytic, indices 0..N
    BlaschkeProduct theta;
    int power        = 1;
    double sup_bound = 0.0; ///< 1 + sum_{i<power} |theta_i| bounds |phi| on T
};

///
/// phi = (T_z^*)^power theta with coefficients 0..N, or nullopt when theta is
/// the constant 1 (no nonzero intertwiner exists).
///
inline std::optional<LiftingSymbol> lifting_symbol(const BlaschkeProduct& u,
                                                   int N, int power = 1,
                                                   double eps = kInf)
{
    require(power >= 1, ErrorKind::InvalidArgument, "power must be >= 1");
    require(N >= 0, ErrorKind::InvalidArgument, "negative order");
    const BlaschkeProduct theta = gcd_symbol_theta(u);
    if (theta.degree() == 0)
    {
        return std::nullopt;
    }
    const auto taylor = taylor_coefficients(theta, N + power, eps);
    double sup        = 1.0;
    for (int i = 0; i < power; ++i)
    {
        sup += std::abs(taylor.coefficients[i]);
    }
    CVector coeffs = taylor.coefficients.tail(N + 1);
    return LiftingSymbol{Symbol::analytic(std::move(coeffs), taylor.tail_bound),
                         theta, power, sup};
}

/// X = B^* H_phi B with B the TM basis of u (order raised from N as needed).
inline OperatorMatrix intertwiner_from_symbol(const BlaschkeProduct& u,
                                              const Symbol& phi, int N,
                                              const BasisOptions& opts = {})
{
    const auto basis = tm_basis(u, N, opts);
    return compress(hankel_matrix(phi, basis.order), basis);
}

/// The intertwiner induced by (T_z^*)^power theta, built consistently with
/// the basis order; nullopt when theta = 1.
inline std::optional<OperatorMatrix>
gcd_intertwiner(const BlaschkeProduct& u, int N, int power = 1,
                const BasisOptions& opts = {})
{
    const auto basis = tm_basis(u, N, opts);
    const auto phi   = lifting_symbol(u, 2 * basis.order, power);
    if (!phi)
    {
        return std::nullopt;
    }
    return compress(hankel_matrix(phi->symbol, basis.order), basis);
}

namespace detail
{

inline CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < a.cols(); ++j)
        {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

inline CVector vec(const CMatrix& x)
{
    return Eigen::Map<const CVector>(x.data(), x.size());
}

inline CMatrix unvec(const CVector& v, Eigen::Index d)
{
    return Eigen::Map<const CMatrix>(v.data(), d, d);
}

} // namespace detail

/// Matrix of X -> S^* X - X S acting on vec(X).
inline CMatrix intertwining_map(const CMatrix& s)
{
    const Eigen::Index d = s.rows();
    const CMatrix id     = CMatrix::Identity(d, d);
    return detail::kron(id, s.adjoint()) - detail::kron(s.transpose(), id);
}

/// Matrix of X -> S^* X S - X acting on vec(X).
inline CMatrix toeplitz_fixed_map(const CMatrix& s)
{
    const Eigen::Index d = s.rows();
    return detail::kron(s.transpose(), s.adjoint()) -
           CMatrix::Identity(d * d, d * d);
}

//------------------------------------------------------------------------------
// Block lift
//------------------------------------------------------------------------------

struct BlockLiftRecord
{
    int order         = 0;
    double tail_bound = 0.0;
    double top_left_residual = 0.0; ///< ||B^* H B - X||
    double upper_right = 0.0;       ///< ||B^* H C||
    double lower_left  = 0.0;       ///< ||C^* H B||
    double lower_right = 0.0;       ///< ||C^* H C||
    double norm_H = 0.0;
    double norm_X = 0.0;

    double off_diagonal_max() const
    {
        return std::max(upper_right, lower_left);
    }

    double norm_gap() const
    {
        return std::abs(norm_H - norm_X);
    }

    bool passes(double tol) const
    {
        return top_left_residual <= tol && upper_right <= tol &&
               lower_left <= tol && lower_right <= tol && norm_gap() <= tol;
    }
};

/// Starting order max(64, 8 deg u) (or N when given), doubled until the TM
/// tail bound drops below `target`.
inline int block_lift_order(const BlaschkeProduct& u, int N = 0,
                            double target = 1e-9, int cap = 4096)
{
    int order = N > 0 ? N : std::max(64, 8 * u.degree());
    while (tm_tail_bound(u, order) >= target)
    {
        order *= 2;
        require(order <= cap, ErrorKind::TailBoundExceeded,
                "block verification needs order beyond " + std::to_string(cap));
    }
    return order;
}

///
/// Assembles H_phi at the block-lift order, changes basis to
/// [TM basis of Q_u | complement from u H^2] and measures the four blocks
/// against [X 0; 0 0].
///
inline BlockLiftRecord verify_block_lift(const CMatrix& x, const Symbol& phi,
                                         const BlaschkeProduct& u, int N = 0)
{
    require(x.rows() == u.degree() && x.cols() == u.degree(),
            ErrorKind::OrderMismatch, "X is not a degree(u)-square matrix");
    const int order   = block_lift_order(u, N);
    const auto basis  = tm_basis_at(u, order);
    const auto comp   = beurling_basis(basis);
    const CMatrix h   = hankel_matrix(phi, order).entries;
    const CMatrix& b  = basis.columns;
    const CMatrix& c  = comp.columns;
    const CMatrix hb  = h * b;
    const CMatrix hc  = h * c;

    BlockLiftRecord rec;
    rec.order      = order;
    rec.tail_bound = comp.tail_bound + phi.tail_bound();
    rec.top_left_residual = operator_norm(CMatrix(b.adjoint() * hb - x));
    rec.upper_right       = operator_norm(CMatrix(b.adjoint() * hc));
    rec.lower_left        = operator_norm(CMatrix(c.adjoint() * hb));
    rec.lower_right       = operator_norm(CMatrix(c.adjoint() * hc));
    rec.norm_H            = operator_norm(h);
    rec.norm_X            = operator_norm(x);
    return rec;
}

//------------------------------------------------------------------------------
// Solution spaces
//------------------------------------------------------------------------------

struct IntertwinerReport
{
    BlaschkeProduct u;
    BlaschkeProduct theta;
    int order         = 0;
    double tail_bound = 0.0;
    int solution_dim  = 0;
    std::vector<CMatrix> basis;            ///< Frobenius-normalized solutions
    std::vector<double> residuals;         ///< ||S^* X - X S|| per solution
    std::vector<double> hankel_residuals;  ///< anti-diagonal spread of B X B^*
    NullSpace kernel;
    std::optional<double> gcd_member_residual; ///< X_gcd distance from the span
    std::optional<double> norm_X;              ///< ||X_gcd||
    std::optional<BlockLiftRecord> lift_check;

    double residual_max() const
    {
        double r = 0.0;
        for (double v : residuals)
        {
            r = std::max(r, v);
        }
        return r;
    }
};

///
/// Numerical kernel of X -> S^* X - X S on Q_u, cross-checked against the
/// gcd construction.  `rank_tol` is an absolute singular-value cut (the map
/// has norm <= 2).
///
inline IntertwinerReport
solve_intertwiner_space(const BlaschkeProduct& u, int N,
                        double rank_tol = kDefaultRankTol,
                        bool with_lift_check = false,
                        const BasisOptions& opts = {})
{
    require(u.degree() >= 1, ErrorKind::InvalidArgument,
            "intertwiners need a nonconstant u");
    const int d      = u.degree();
    const auto basis = tm_basis(u, N, opts);
    const CMatrix s  = compressed_shift(basis).entries;

    IntertwinerReport rep;
    rep.u          = u;
    rep.theta      = gcd_symbol_theta(u);
    rep.order      = basis.order;
    rep.tail_bound = basis.tail_bound;
    rep.kernel     = null_space(intertwining_map(s), rank_tol);
    rep.solution_dim = rep.kernel.dimension();

    for (int j = 0; j < rep.solution_dim; ++j)
    {
        const CMatrix x = detail::unvec(rep.kernel.basis.col(j), d);
        rep.residuals.push_back(
            operator_norm(CMatrix(s.adjoint() * x - x * s)));
        const CMatrix lifted =
            basis.columns * x * basis.columns.adjoint();
        rep.hankel_residuals.push_back(hankel_structure_residual(lifted));
        rep.basis.push_back(x);
    }

    if (rep.theta.degree() > 0)
    {
        const auto phi = lifting_symbol(u, 2 * basis.order);
        const CMatrix x =
            compress(hankel_matrix(phi->symbol, basis.order), basis).entries;
        rep.norm_X       = operator_norm(x);
        const CVector v  = detail::vec(x) / x.norm();
        const CMatrix& k = rep.kernel.basis;
        rep.gcd_member_residual = (v - k * (k.adjoint() * v)).norm();
        if (with_lift_check)
        {
            const int order = block_lift_order(u, N);
            const auto lift = lifting_symbol(u, 2 * order);
            rep.lift_check  = verify_block_lift(x, lift->symbol, u, order);
        }
    }
    return rep;
}

struct ToeplitzFixedReport
{
    BlaschkeProduct u;
    int order      = 0;
    int dimension  = 0;
    NullSpace kernel;
};

/// Numerical kernel of X -> S^* X S - X on Q_u (expected trivial).
inline ToeplitzFixedReport
solve_toeplitz_fixed_space(const BlaschkeProduct& u, int N,
                           double rank_tol = kDefaultRankTol,
                           const BasisOptions& opts = {})
{
    require(u.degree() >= 1, ErrorKind::InvalidArgument,
            "needs a nonconstant u");
    const auto basis = tm_basis(u, N, opts);
    const CMatrix s  = compressed_shift(basis).entries;
    ToeplitzFixedReport rep;
    rep.u         = u;
    rep.order     = basis.order;
    rep.kernel    = null_space(toeplitz_fixed_map(s), rank_tol);
    rep.dimension = rep.kernel.dimension();
    return rep;
}

} // namespace hlift
