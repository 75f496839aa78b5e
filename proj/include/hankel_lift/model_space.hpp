#pragma once

///
/// \file model_space.hpp
///
/// Model spaces Q_u = H^2 (-) u H^2 of finite Blaschke products at a finite
/// analytic order, realized by the Takenaka-Malmquist orthonormal basis
///
///   e_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} -b_{a_j}(z),
///
/// with the zeros a_k taken in the canonical sorted order.  The sign on each
/// factor, (z - a)/(1 - conj(a) z), makes zeros at the origin give plain
/// monomials; it changes each column by a unimodular constant only.  Columns are
/// coefficient vectors c_0..c_order; `tail_bound` is an l1 bound on the
/// coefficients beyond `order` for every column.
///

#include <algorithm>
#include <string>

#include <Eigen/QR>

#include "blaschke.hpp"
#include "core.hpp"
#include "operators.hpp"

namespace hlift
{

struct BasisOptions
{
    double tail_target = 1e-12; ///< auto-raise order until the bound is below
    int max_order      = 8192;
};

struct ModelSpaceBasis
{
    CMatrix columns;
    BlaschkeProduct u;
    int order         = 0;
    double tail_bound = 0.0;

    int dimension() const
    {
        return static_cast<int>(columns.cols());
    }
};

/// Tail bound shared by all TM columns of u at the given order.
inline double tm_tail_bound(const BlaschkeProduct& u, int order)
{
    if (u.degree() == 0)
    {
        return 0.0;
    }
    return series_tail_bound(u.max_modulus(), u.degree() - 1, 1, order);
}

/// TM basis at exactly the given order (no auto-raise, no tail check).
inline ModelSpaceBasis tm_basis_at(const BlaschkeProduct& u, int order)
{
    require(order >= 0, ErrorKind::InvalidArgument, "negative order");
    ModelSpaceBasis out{CMatrix::Zero(order + 1, u.degree()), u, order,
                        tm_tail_bound(u, order)};
    CVector prefix = CVector::Zero(order + 1);
    prefix[0]      = 1.0;
    for (int k = 0; k < u.degree(); ++k)
    {
        const cplx a = u.zeros()[k];
        CVector col  = prefix;
        detail::multiply_by_szego(col, a);
        out.columns.col(k) = col;
        detail::multiply_by_factor(prefix, a);
        prefix = -prefix;
    }
    return out;
}

/// Smallest order >= N at which the TM tail bound is below the target.
inline int tm_required_order(const BlaschkeProduct& u, int N,
                             const BasisOptions& opts = {})
{
    if (u.degree() == 0)
    {
        return N;
    }
    const int order = order_for_tail(u.max_modulus(), u.degree() - 1, 1, N,
                                     opts.tail_target, opts.max_order);
    if (order < 0)
    {
        fail(ErrorKind::TailBoundExceeded,
             "model space of " + to_text(u) + " needs order beyond cap " +
                 std::to_string(opts.max_order));
    }
    return order;
}

/// TM basis with the order raised from N until the tail bound is met.
inline ModelSpaceBasis tm_basis(const BlaschkeProduct& u, int N,
                                const BasisOptions& opts = {})
{
    return tm_basis_at(u, tm_required_order(u, N, opts));
}

///
/// Orthonormal basis of the orthogonal complement of the model space inside
/// the analytic section, as seen from u H^2.  Column j starts as the truncated
/// expansion of u z^j (j = 0..order-degree(u)) and is orthonormalized against
/// the TM columns and the preceding columns.  For small j the column equals
/// u z^j up to the tail bound; the last few columns absorb the section
/// truncation.
///
struct BeurlingBasis
{
    CMatrix columns;
    int order         = 0;
    double tail_bound = 0.0;
};

inline BeurlingBasis beurling_basis(const ModelSpaceBasis& model)
{
    const int order = model.order;
    const int d     = model.dimension();
    const int count = order - d + 1;
    require(count >= 0, ErrorKind::InvalidArgument,
            "order below the model-space dimension");

    CMatrix stacked(order + 1, order + 1);
    stacked.leftCols(d) = model.columns;
    if (count > 0)
    {
        CVector u_coeffs = CVector::Zero(order + 1);
        if (order >= 1)
        {
            u_coeffs = taylor_coefficients(model.u, order).coefficients;
        }
        else
        {
            u_coeffs[0] = model.u.constant();
        }
        for (int j = 0; j < count; ++j)
        {
            CVector col = CVector::Zero(order + 1);
            col.tail(order + 1 - j) = u_coeffs.head(order + 1 - j);
            stacked.col(d + j) = col;
        }
    }

    Eigen::HouseholderQR<CMatrix> qr(stacked);
    const CMatrix q = qr.householderQ() * CMatrix::Identity(order + 1, order + 1);
    const auto& r   = qr.matrixQR();

    BeurlingBasis out;
    out.order      = order;
    out.tail_bound = std::max(model.tail_bound,
                              series_tail_bound(model.u.max_modulus(),
                                                model.u.degree(), 0, order));
    out.columns = CMatrix(order + 1, count);
    for (int j = 0; j < count; ++j)
    {
        const cplx rjj    = r(d + j, d + j);
        const cplx phase  = std::abs(rjj) > 0.0 ? rjj / std::abs(rjj) : 1.0;
        out.columns.col(j) = q.col(d + j) * phase;
    }
    return out;
}

inline BeurlingBasis beurling_basis(const BlaschkeProduct& u, int N,
                                    const BasisOptions& opts = {})
{
    return beurling_basis(tm_basis(u, N, opts));
}

/// Orthogonal projector B B^* onto the model space within the section.
inline CMatrix projector(const ModelSpaceBasis& basis)
{
    return basis.columns * basis.columns.adjoint();
}

namespace detail
{

// T_z B: coefficients move up one index, the top one leaves the section.
inline CMatrix shift_columns(const CMatrix& b)
{
    CMatrix out = CMatrix::Zero(b.rows(), b.cols());
    if (b.rows() > 1)
    {
        out.bottomRows(b.rows() - 1) = b.topRows(b.rows() - 1);
    }
    return out;
}

// T_z^* B: coefficients move down one index, c_0 drops.
inline CMatrix backshift_columns(const CMatrix& b)
{
    CMatrix out = CMatrix::Zero(b.rows(), b.cols());
    if (b.rows() > 1)
    {
        out.topRows(b.rows() - 1) = b.bottomRows(b.rows() - 1);
    }
    return out;
}

} // namespace detail

/// S_z = P_Q T_z |_Q in the TM basis.
inline OperatorMatrix compressed_shift(const ModelSpaceBasis& basis)
{
    const CMatrix s =
        basis.columns.adjoint() * detail::shift_columns(basis.columns);
    const auto tag = SpaceTag::model(basis.u, basis.order);
    return {s, tag, tag, basis.order, Structure::General};
}

/// B^* M B for an analytic-section operator built at the basis order.
inline OperatorMatrix compress(const OperatorMatrix& m,
                               const ModelSpaceBasis& basis)
{
    require(m.domain.kind == SpaceKind::AnalyticSection &&
                m.codomain.kind == SpaceKind::AnalyticSection,
            ErrorKind::OrderMismatch, "compress expects an analytic section");
    require(m.build_order == basis.order && m.rows() == basis.columns.rows() &&
                m.cols() == basis.columns.rows(),
            ErrorKind::OrderMismatch,
            "operator order " + std::to_string(m.build_order) +
                " vs basis order " + std::to_string(basis.order));
    const auto tag = SpaceTag::model(basis.u, basis.order);
    return {basis.columns.adjoint() * m.entries * basis.columns, tag, tag,
            basis.order, Structure::General};
}

/// dim(span A  intersect  span B) = dim ker [A | B], via the gap rule.
inline int intersection_dimension(const ModelSpaceBasis& a,
                                  const ModelSpaceBasis& b,
                                  std::optional<double> rank_tol = std::nullopt)
{
    require(a.order == b.order, ErrorKind::OrderMismatch,
            "bases built at different orders");
    CMatrix stacked(a.columns.rows(), a.dimension() + b.dimension());
    stacked << a.columns, b.columns;
    return null_space(stacked, rank_tol).dimension();
}

} // namespace hlift
