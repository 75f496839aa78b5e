#pragma once

///
/// \file subspaces.hpp
///
/// Beurling-type subspaces u H^2 against Hankel operators: the three
/// equivalent invariance conditions
///
///   (1) u H^2 is invariant under H_phi
///   (2) u H^2 is contained in ker H_phi
///   (3) P_+ phi lies in Q_{conj(J u)}
///
/// evaluated independently on finite sections, the reducing variant, the
/// kernel identity ker H_{zbar conj(Ju)} = u H^2, and seeded generators for
/// property trials.
///

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "blaschke.hpp"
#include "core.hpp"
#include "fourier.hpp"
#include "model_space.hpp"
#include "operators.hpp"

namespace hlift
{

inline constexpr double kDefaultResidualTol = 1e-8;

struct ConditionResult
{
    bool holds      = false;
    double residual = 0.0;
    bool decisive   = false;
};

///
/// A residual r with truncation error bound t decides "holds" when
/// r + t < tol / 10 and "fails" when r - t > 10 tol.  An infinite t (a
/// generator without an l1 tail) only uses the band; such reports carry the
/// finite_section flag.
///
inline ConditionResult classify(double residual, double tol, double tail)
{
    const double t = std::isfinite(tail) ? tail : 0.0;
    ConditionResult out;
    out.residual = residual;
    out.holds    = residual <= tol;
    out.decisive = residual + t < 0.1 * tol || residual - t > 10.0 * tol;
    return out;
}

struct InvarianceReport
{
    BlaschkeProduct u;
    int symbol_lo = 0;
    int symbol_hi = 0;
    int order     = 0; ///< requested N
    int basis_order = 0;
    int shift_max = 0; ///< shifts u z^k tested for k = 0..shift_max
    double tol        = kDefaultResidualTol;
    double tail_bound = 0.0;
    bool finite_section = false;
    ConditionResult cond_invariant; ///< (1)
    ConditionResult cond_kernel;    ///< (2)
    ConditionResult cond_symbol;    ///< (3)

    bool decisive() const
    {
        return cond_invariant.decisive && cond_kernel.decisive &&
               cond_symbol.decisive;
    }

    bool agree() const
    {
        return cond_invariant.holds == cond_kernel.holds &&
               cond_kernel.holds == cond_symbol.holds;
    }
};

namespace detail
{

// The window of a Laurent symbol with its tail dropped: the section is built
// from exactly these coefficients and the tail is accounted separately.
inline Symbol window_only(const Symbol& phi)
{
    return Symbol::laurent(phi.lo(), phi.values(), 0.0);
}

inline CVector analytic_window(const Symbol& phi, int order)
{
    CVector p = CVector::Zero(order + 1);
    for (int k = std::max(0, phi.lo()); k <= std::min(order, phi.hi()); ++k)
    {
        p[k] = phi.coefficient(k);
    }
    return p;
}

inline CVector shifted(const CVector& c, int k)
{
    CVector out = CVector::Zero(c.size());
    if (k < c.size())
    {
        out.tail(c.size() - k) = c.head(c.size() - k);
    }
    return out;
}

inline double membership_residual(const CVector& p, const CMatrix& basis)
{
    if (basis.cols() == 0)
    {
        return p.norm();
    }
    return (p - basis * (basis.adjoint() * p)).norm();
}

} // namespace detail

///
/// Evaluates conditions (1), (2), (3) for u H^2 and H_phi.  Only the
/// nonnegative coefficients of phi enter H_phi; with W = hi(phi) every
/// H_phi (u z^k) with k > W vanishes, so k = 0..W covers all shifts.
///
inline InvarianceReport check_invariance(const BlaschkeProduct& u,
                                         const Symbol& phi, int N,
                                         double tol = kDefaultResidualTol,
                                         const BasisOptions& opts = {})
{
    require(u.degree() >= 1, ErrorKind::InvalidArgument,
            "u must be nonconstant");
    require(phi.is_laurent(), ErrorKind::GeneratorNotMaterialized,
            "materialize the symbol before checking invariance");
    const int d = u.degree();
    require(N >= 4 * d + phi.window(), ErrorKind::WindowTooSmall,
            "order " + std::to_string(N) + " < 4 deg(u) + window = " +
                std::to_string(4 * d + phi.window()));

    const int M       = tm_required_order(u, N, opts);
    const auto bu     = tm_basis_at(u, M);
    const auto bj     = tm_basis_at(conj_reflect(u), M);
    const CMatrix h   = hankel_matrix(detail::window_only(phi), M).entries;
    const CVector uc  = taylor_coefficients(u, M).coefficients;
    const int w       = std::max(0, phi.hi());

    InvarianceReport rep;
    rep.u           = u;
    rep.symbol_lo   = phi.lo();
    rep.symbol_hi   = phi.hi();
    rep.order       = N;
    rep.basis_order = M;
    rep.shift_max   = w;
    rep.tol         = tol;
    rep.tail_bound  = phi.tail_bound() + bu.tail_bound + bj.tail_bound;
    rep.finite_section = phi.tail_bound() > 0.0;

    double r_inv = 0.0, r_ker = 0.0;
    for (int k = 0; k <= w; ++k)
    {
        const CVector image = h * detail::shifted(uc, k);
        r_ker = std::max(r_ker, image.norm());
        const CVector coeffs = bu.columns.adjoint() * image;
        r_inv = std::max(r_inv, (bu.columns * coeffs).norm());
    }
    const double r_sym = detail::membership_residual(
        detail::analytic_window(phi, M), bj.columns);

    rep.cond_invariant = classify(r_inv, tol, rep.tail_bound);
    rep.cond_kernel    = classify(r_ker, tol, rep.tail_bound);
    rep.cond_symbol    = classify(r_sym, tol, rep.tail_bound);
    return rep;
}

struct ReducingReport
{
    InvarianceReport direct;  ///< H_phi
    InvarianceReport adjoint; ///< H_phi^* = H_{conj(J phi)}
    BlaschkeProduct theta;
    ConditionResult gcd_orthogonal; ///< P_+ phi perpendicular to theta H^2

    bool both_invariant() const
    {
        return direct.cond_invariant.holds && adjoint.cond_invariant.holds;
    }

    bool both_kernel() const
    {
        return direct.cond_kernel.holds && adjoint.cond_kernel.holds;
    }

    bool decisive() const
    {
        return direct.cond_invariant.decisive &&
               adjoint.cond_invariant.decisive && direct.cond_kernel.decisive &&
               adjoint.cond_kernel.decisive && gcd_orthogonal.decisive;
    }

    bool agree() const
    {
        return both_invariant() == both_kernel() &&
               both_kernel() == gcd_orthogonal.holds;
    }
};

inline ReducingReport check_reducing(const BlaschkeProduct& u, const Symbol& phi,
                                     int N, double tol = kDefaultResidualTol,
                                     const BasisOptions& opts = {})
{
    ReducingReport rep;
    rep.direct  = check_invariance(u, phi, N, tol, opts);
    rep.adjoint = check_invariance(u, conj_flip_symbol(phi), N, tol, opts);
    rep.theta   = gcd_inner(u, conj_reflect(u));

    const int M = rep.direct.basis_order;
    const CVector p = detail::analytic_window(phi, M);
    double tail     = phi.tail_bound();
    double r        = p.norm();
    if (rep.theta.degree() > 0)
    {
        const auto bt = tm_basis_at(rep.theta, M);
        tail += bt.tail_bound;
        r = detail::membership_residual(p, bt.columns);
    }
    rep.gcd_orthogonal = classify(r, tol, tail);
    return rep;
}

//------------------------------------------------------------------------------
// Kernel identity
//------------------------------------------------------------------------------

/// zbar conj(J u): coefficient conj(a_{k+1}) at index k = -1..N-1, where a_n
/// are the Taylor coefficients of u.
inline Symbol kernel_symbol(const BlaschkeProduct& u, int N, double eps = kInf)
{
    const auto t = taylor_coefficients(u, N, eps);
    return Symbol::laurent(-1, t.coefficients.conjugate(), t.tail_bound);
}

struct KernelIdentityReport
{
    BlaschkeProduct u;
    int order     = 0; ///< section order used
    int shift_max = 0;
    double inclusion_residual = 0.0; ///< max_k ||H_phi (u z^k)||
    double tail_bound         = 0.0;
    double min_singular_value = 0.0; ///< of H_phi on the TM columns
};

///
/// Checks both halves of ker H_phi = u H^2 for phi = kernel_symbol(u):
/// H_phi (u z^k) = 0 for k = 0..N-deg(u), and H_phi is bounded below on Q_u.
/// The section is taken at M >= N + L where u's expansion beyond L is below
/// 1e-14, so the truncated shifts u z^k lose nothing visible.
///
inline KernelIdentityReport verify_kernel_identity(const BlaschkeProduct& u,
                                                   int N,
                                                   const BasisOptions& opts = {})
{
    require(u.degree() >= 1, ErrorKind::InvalidArgument,
            "u must be nonconstant");
    require(N >= u.degree(), ErrorKind::WindowTooSmall,
            "order below deg(u)");
    const int d = u.degree();
    const int L = order_for_tail(u.max_modulus(), d, 0, 1, 1e-14, opts.max_order);
    require(L >= 0, ErrorKind::TailBoundExceeded,
            "expansion of u does not converge within the order cap");
    const int M      = std::max(N + L, tm_required_order(u, N, opts));
    const auto basis = tm_basis_at(u, M);
    const Symbol phi = kernel_symbol(u, 2 * M + 1);
    const CMatrix h  = hankel_matrix(detail::window_only(phi), M).entries;
    const auto ut    = taylor_coefficients(u, M);

    KernelIdentityReport rep;
    rep.u         = u;
    rep.order     = M;
    rep.shift_max = N - d;
    for (int k = 0; k <= rep.shift_max; ++k)
    {
        const CVector image = h * detail::shifted(ut.coefficients, k);
        rep.inclusion_residual = std::max(rep.inclusion_residual, image.norm());
    }
    rep.tail_bound = ut.tail_bound + phi.tail_bound() + basis.tail_bound;
    const auto sv  = singular_values(CMatrix(h * basis.columns));
    rep.min_singular_value = sv.back();
    return rep;
}

struct DivisorVerdict
{
    BlaschkeProduct w;
    bool w_inferred   = false;
    int kernel_dim    = 0;
    double alignment_residual = 0.0; ///< ||B_w^* K||
    bool invariant    = false;       ///< divide(u, w) succeeded
    double direct_residual = 0.0;    ///< ||H_phi u|| on the section
    bool consistent   = false;       ///< direct residual agrees with verdict
};

namespace detail
{

// Zeros of w from the compression of T_z^* to the orthogonal complement of
// the kernel: there it acts as S_z^* on Q_w, whose eigenvalues are the
// conjugated zeros.  Nearby eigenvalues (a split multiple zero) are merged.
inline std::vector<cplx> infer_kernel_zeros(const CMatrix& complement)
{
    const Eigen::Index n = complement.rows();
    CMatrix back = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i)
    {
        back(i, i + 1) = 1.0;
    }
    const CMatrix r = complement.adjoint() * back * complement;
    Eigen::ComplexEigenSolver<CMatrix> es(r, false);
    std::vector<cplx> mu(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(mu.begin(), mu.end(), zero_less);

    std::vector<cplx> zeros;
    std::size_t i = 0;
    while (i < mu.size())
    {
        std::size_t j = i + 1;
        cplx sum      = mu[i];
        while (j < mu.size() && std::abs(mu[j] - mu[i]) < 1e-4)
        {
            sum += mu[j];
            ++j;
        }
        const cplx mean = sum / static_cast<double>(j - i);
        for (std::size_t k = i; k < j; ++k)
        {
            zeros.push_back(std::conj(mean));
        }
        i = j;
    }
    return zeros;
}

} // namespace detail

///
/// u H^2 is invariant under H_phi iff u is an inner multiple of w, where
/// ker H_phi = w H^2.  The kernel of the order-N section must align with
/// w H^2: dimension N + 1 - deg(w) and orthogonal to Q_w up to 1e-6.
///
inline DivisorVerdict kernel_divisor_check(const Symbol& phi,
                                           const BlaschkeProduct& u, int N,
                                           std::optional<BlaschkeProduct> w = {},
                                           double tol = kDefaultResidualTol)
{
    require(phi.is_laurent(), ErrorKind::GeneratorNotMaterialized,
            "materialize the symbol first");
    require(N >= 1, ErrorKind::InvalidArgument, "order must be >= 1");
    const CMatrix h  = hankel_matrix(detail::window_only(phi), N).entries;
    const auto ker   = null_space(h);

    DivisorVerdict out;
    out.kernel_dim = ker.dimension();
    if (w)
    {
        out.w = *w;
    }
    else
    {
        // orthonormal complement of the kernel from the same SVD
        const Eigen::Index rank = h.cols() - ker.dimension();
        Eigen::BDCSVD<CMatrix> svd(h, Eigen::ComputeFullV);
        const CMatrix comp = svd.matrixV().leftCols(rank);
        out.w = BlaschkeProduct(detail::infer_kernel_zeros(comp), 1.0, 0.0);
        out.w_inferred = true;
    }

    require(out.kernel_dim == N + 1 - out.w.degree(),
            ErrorKind::KernelNotBeurling,
            "kernel dimension " + std::to_string(out.kernel_dim) +
                " does not match w H^2 with deg(w) = " +
                std::to_string(out.w.degree()));
    if (out.w.degree() > 0 && out.kernel_dim > 0)
    {
        const auto bw = tm_basis_at(out.w, N);
        out.alignment_residual =
            operator_norm(CMatrix(bw.columns.adjoint() * ker.basis));
    }
    require(out.alignment_residual <= 1e-6, ErrorKind::KernelNotBeurling,
            "numerical kernel is not aligned with w H^2 (residual " +
                detail::format_double(out.alignment_residual) + ")");

    const double match_tol = out.w_inferred ? 1e-6 : kDefaultMatchTol;
    out.invariant = divide(u, out.w, match_tol).has_value();

    const CVector uc    = taylor_coefficients(u, N).coefficients;
    out.direct_residual = (h * uc).norm();
    out.consistent      = (out.direct_residual <= tol) == out.invariant;
    return out;
}

//------------------------------------------------------------------------------
// Seeded generators
//------------------------------------------------------------------------------

namespace detail
{

inline cplx normal_complex(std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    const double re = g(rng);
    const double im = g(rng);
    return {re, im};
}

inline CVector trim_trailing_zeros(const CVector& v)
{
    Eigen::Index n = v.size();
    while (n > 1 && v[n - 1] == cplx(0.0))
    {
        --n;
    }
    return v.head(n);
}

} // namespace detail

/// Unit-norm random combination of the TM basis of v, as an analytic symbol.
inline Symbol random_symbol_in_model(const BlaschkeProduct& v,
                                     std::uint64_t seed, int N,
                                     const BasisOptions& opts = {})
{
    require(v.degree() >= 1, ErrorKind::InvalidArgument,
            "v must be nonconstant");
    std::mt19937_64 rng(seed);
    const auto basis = tm_basis(v, N, opts);
    CVector g(v.degree());
    for (int i = 0; i < v.degree(); ++i)
    {
        g[i] = detail::normal_complex(rng);
    }
    CVector c         = basis.columns * g;
    const double norm = c.norm();
    c /= norm;
    const double tail = basis.tail_bound * g.cwiseAbs().sum() / norm;
    return Symbol::analytic(detail::trim_trailing_zeros(c), tail);
}

/// Unit-norm polynomial with Gaussian coefficients of degree exactly `degree`.
inline Symbol random_polynomial_symbol(std::uint64_t seed, int degree)
{
    require(degree >= 0, ErrorKind::InvalidArgument, "negative degree");
    std::mt19937_64 rng(seed);
    CVector c(degree + 1);
    for (int k = 0; k <= degree; ++k)
    {
        c[k] = detail::normal_complex(rng);
    }
    c /= c.norm();
    return Symbol::analytic(c);
}

/// Gaussian Laurent polynomial on lo..hi.
inline Symbol random_laurent_symbol(std::uint64_t seed, int lo, int hi)
{
    require(lo <= hi, ErrorKind::InvalidArgument, "empty window");
    std::mt19937_64 rng(seed);
    CVector c(hi - lo + 1);
    for (Eigen::Index k = 0; k < c.size(); ++k)
    {
        c[k] = detail::normal_complex(rng);
    }
    return Symbol::laurent(lo, c);
}

enum class ZeroMix
{
    Generic,    ///< no zero near the conjugate of any zero: theta = 1
    Structured, ///< planted real zeros, origin zeros and conjugate pairs
    Either,     ///< fair coin between the two
};

struct RandomBlaschkeOptions
{
    int min_degree    = 1;
    int max_degree    = 5;
    double max_radius = 0.8;
    double separation = 0.1; ///< between zeros and from conjugated zeros
    ZeroMix mix       = ZeroMix::Either;
};

///
/// Seeded finite Blaschke product.  Apart from deliberate coincidences (a
/// conjugate pair, a real zero, a repeated origin) every zero keeps
/// `separation` from every other zero and every conjugated zero, so the gcd
/// is unambiguous and the intertwining map has a clean singular-value gap.
///
inline BlaschkeProduct random_blaschke(std::uint64_t seed,
                                       const RandomBlaschkeOptions& opts = {})
{
    require(opts.min_degree >= 0 && opts.min_degree <= opts.max_degree,
            ErrorKind::InvalidArgument, "bad degree range");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int degree = std::uniform_int_distribution<int>(
        opts.min_degree, opts.max_degree)(rng);
    bool structured = opts.mix == ZeroMix::Structured;
    if (opts.mix == ZeroMix::Either)
    {
        structured = unit(rng) < 0.5;
    }

    const double sep = opts.separation;
    std::vector<cplx> zeros;
    int origin_count = 0;
    auto clear_of = [&](const cplx& a) {
        for (const auto& b : zeros)
        {
            if (std::abs(a - b) < sep || std::abs(a - std::conj(b)) < sep)
            {
                return false;
            }
        }
        return true;
    };
    auto draw_generic = [&]() {
        for (;;)
        {
            const double r  = opts.max_radius * std::sqrt(unit(rng));
            const double t  = 2.0 * std::numbers::pi * unit(rng);
            const cplx a    = std::polar(r, t);
            if (std::abs(a.imag()) >= sep && clear_of(a))
            {
                return a;
            }
        }
    };

    while (static_cast<int>(zeros.size()) < degree)
    {
        const int left = degree - static_cast<int>(zeros.size());
        const double pick = structured ? unit(rng) : 1.0;
        if (pick < 0.4 && left >= 2)
        {
            const cplx a = draw_generic();
            zeros.push_back(a);
            zeros.push_back(std::conj(a));
        }
        else if (pick < 0.7)
        {
            for (;;)
            {
                const double x = opts.max_radius * (2.0 * unit(rng) - 1.0);
                if (std::abs(x) >= sep && clear_of(cplx(x, 0.0)))
                {
                    zeros.emplace_back(x, 0.0);
                    break;
                }
            }
        }
        else if (pick < 0.8 && origin_count < 2 &&
                 (origin_count > 0 || clear_of(0.0)))
        {
            zeros.emplace_back(0.0, 0.0);
            ++origin_count;
        }
        else
        {
            zeros.push_back(draw_generic());
        }
    }
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    return BlaschkeProduct(std::move(zeros), std::polar(1.0, angle));
}

} // namespace hlift
