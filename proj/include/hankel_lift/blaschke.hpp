#pragma once

///
/// \file blaschke.hpp
///
/// Finite Blaschke products
///
///   u(z) = c * prod_i (alpha_i - z) / (1 - conj(alpha_i) z),   |c| = 1,
///
/// stored as a unimodular constant and a canonically sorted zero multiset.
/// Zeros are kept a fixed margin away from the unit circle so that Taylor
/// coefficients decay at a controlled geometric rate.
///

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "core.hpp"

namespace hlift
{

inline constexpr double kDefaultZeroMargin   = 0.05;
inline constexpr double kDefaultMatchTol     = 1e-9;
inline constexpr double kUnimodularTolerance = 1e-12;

namespace detail
{

inline bool zero_less(const cplx& a, const cplx& b)
{
    if (a.real() != b.real())
    {
        return a.real() < b.real();
    }
    return a.imag() < b.imag();
}

inline std::string format_double(double x)
{
    if (x == 0.0)
    {
        return "0"; // folds -0
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string format_complex(const cplx& z)
{
    return "(" + format_double(z.real()) + "," + format_double(z.imag()) + ")";
}

} // namespace detail

class BlaschkeProduct
{
public:
    /// The inner function 1.
    BlaschkeProduct() = default;

    BlaschkeProduct(std::vector<cplx> zeros, cplx constant,
                    double min_margin = kDefaultZeroMargin)
        : m_zeros(std::move(zeros)), m_constant(constant)
    {
        require(std::abs(std::abs(constant) - 1.0) <= kUnimodularTolerance,
                ErrorKind::NonUnimodularConstant,
                "|constant| = " + detail::format_double(std::abs(constant)));
        for (const auto& a : m_zeros)
        {
            require(std::isfinite(a.real()) && std::isfinite(a.imag()) &&
                        std::abs(a) < 1.0 - min_margin,
                    ErrorKind::ZeroOutsideDisk,
                    "zero " + detail::format_complex(a) +
                        " violates |alpha| < " +
                        detail::format_double(1.0 - min_margin));
        }
        std::sort(m_zeros.begin(), m_zeros.end(), detail::zero_less);
    }

    const std::vector<cplx>& zeros() const noexcept
    {
        return m_zeros;
    }

    cplx constant() const noexcept
    {
        return m_constant;
    }

    int degree() const noexcept
    {
        return static_cast<int>(m_zeros.size());
    }

    /// Largest zero modulus; governs the decay rate of the expansion.
    double max_modulus() const
    {
        double rho = 0.0;
        for (const auto& a : m_zeros)
        {
            rho = std::max(rho, std::abs(a));
        }
        return rho;
    }

    cplx operator()(const cplx& z) const
    {
        cplx value = m_constant;
        for (const auto& a : m_zeros)
        {
            value *= (a - z) / (1.0 - std::conj(a) * z);
        }
        return value;
    }

    friend bool operator==(const BlaschkeProduct& a, const BlaschkeProduct& b)
    {
        return a.m_constant == b.m_constant && a.m_zeros == b.m_zeros;
    }

private:
    std::vector<cplx> m_zeros;
    cplx m_constant{1.0, 0.0};
};

inline BlaschkeProduct make_blaschke(std::vector<cplx> zeros,
                                     cplx constant     = 1.0,
                                     double min_margin = kDefaultZeroMargin)
{
    return BlaschkeProduct(std::move(zeros), constant, min_margin);
}

/// Evaluates b on the closed unit disk.
inline cplx evaluate(const BlaschkeProduct& b, const cplx& z)
{
    require(std::abs(z) <= 1.0 + 1e-12, ErrorKind::InvalidArgument,
            "evaluation point outside the closed disk");
    return b(z);
}

/// The inner function whose Taylor coefficients are the conjugates of b's:
/// zeros and constant are conjugated.
inline BlaschkeProduct conj_reflect(const BlaschkeProduct& b)
{
    std::vector<cplx> zeros;
    zeros.reserve(b.zeros().size());
    for (const auto& a : b.zeros())
    {
        zeros.push_back(std::conj(a));
    }
    return BlaschkeProduct(std::move(zeros), std::conj(b.constant()), 0.0);
}

namespace detail
{

// Distinct values of a sorted multiset with multiplicities.
inline std::vector<std::pair<cplx, int>> group_zeros(const std::vector<cplx>& z)
{
    std::vector<std::pair<cplx, int>> out;
    for (const auto& a : z)
    {
        if (!out.empty() && out.back().first == a)
        {
            ++out.back().second;
        }
        else
        {
            out.emplace_back(a, 1);
        }
    }
    return out;
}

inline void check_unambiguous(const std::vector<cplx>& a,
                              const std::vector<cplx>& b, double tol)
{
    const auto ga = group_zeros(a);
    const auto gb = group_zeros(b);
    for (const auto& [x, mult] : ga)
    {
        int candidates = 0;
        int available  = 0;
        for (const auto& [y, mult_y] : gb)
        {
            if (std::abs(x - y) < tol)
            {
                ++candidates;
                available += mult_y;
            }
        }
        if (candidates >= 2 && mult < available)
        {
            fail(ErrorKind::AmbiguousMatching,
                 "zero " + format_complex(x) + " has " +
                     std::to_string(candidates) +
                     " distinct partners within tolerance " +
                     format_double(tol));
        }
    }
}

/// Greedy minimum-distance matching of individual zeros.  Returns pairs
/// (index into a, index into b).
inline std::vector<std::pair<std::size_t, std::size_t>>
match_zeros(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol)
{
    require(tol >= 0.0, ErrorKind::InvalidArgument, "negative tolerance");
    check_unambiguous(a, b, tol);
    check_unambiguous(b, a, tol);

    struct Candidate
    {
        double dist;
        std::size_t i;
        std::size_t j;
    };
    std::vector<Candidate> pairs;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        for (std::size_t j = 0; j < b.size(); ++j)
        {
            const double d = std::abs(a[i] - b[j]);
            if (d < tol || (tol == 0.0 && d == 0.0))
            {
                pairs.push_back({d, i, j});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& p, const auto& q) {
        return std::tie(p.dist, p.i, p.j) < std::tie(q.dist, q.i, q.j);
    });

    std::vector<bool> used_a(a.size(), false);
    std::vector<bool> used_b(b.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> matched;
    for (const auto& p : pairs)
    {
        if (!used_a[p.i] && !used_b[p.j])
        {
            used_a[p.i] = true;
            used_b[p.j] = true;
            matched.emplace_back(p.i, p.j);
        }
    }
    return matched;
}

} // namespace detail

/// Greatest common inner divisor: multiset intersection of the zeros under
/// tolerance matching.  The constant is normalized to 1.
inline BlaschkeProduct gcd_inner(const BlaschkeProduct& b1,
                                 const BlaschkeProduct& b2,
                                 double tol = kDefaultMatchTol)
{
    const auto matched = detail::match_zeros(b1.zeros(), b2.zeros(), tol);
    std::vector<cplx> common;
    common.reserve(matched.size());
    for (const auto& [i, j] : matched)
    {
        common.push_back(b1.zeros()[i]);
    }
    return BlaschkeProduct(std::move(common), 1.0, 0.0);
}

/// Returns w with v = w u (constant normalized to 1), or nullopt when u does
/// not divide v.
inline std::optional<BlaschkeProduct> divide(const BlaschkeProduct& v,
                                             const BlaschkeProduct& u,
                                             double tol = kDefaultMatchTol)
{
    const auto matched = detail::match_zeros(u.zeros(), v.zeros(), tol);
    if (static_cast<int>(matched.size()) != u.degree())
    {
        return std::nullopt;
    }
    std::vector<bool> used(v.zeros().size(), false);
    for (const auto& [i, j] : matched)
    {
        used[j] = true;
    }
    std::vector<cplx> rest;
    for (std::size_t j = 0; j < v.zeros().size(); ++j)
    {
        if (!used[j])
        {
            rest.push_back(v.zeros()[j]);
        }
    }
    return BlaschkeProduct(std::move(rest), 1.0, 0.0);
}

//------------------------------------------------------------------------------
// Taylor expansion
//------------------------------------------------------------------------------

///
/// Bound on sum_{k > order} |c_k| for a product of `blaschke_factors`
/// Blaschke factors and `extra_poles` Szego-type factors
/// sqrt(1-|a|^2)/(1 - conj(a) z), all zeros/poles of modulus <= rho.
///
/// Each Blaschke factor is coefficientwise dominated by
/// (1 + (1-rho) z)/(1 - rho z) and each Szego factor by 1/(1 - rho z), so with
/// p = blaschke_factors + extra_poles,
///
///   |c_k| <= rho^(-blaschke_factors) * binom(k+p-1, p-1) * rho^k.
///
/// The terms on the right have a decreasing ratio, which sums the tail
/// geometrically.
///
inline double series_tail_bound(double rho, int blaschke_factors,
                                int extra_poles, int order)
{
    const int p = blaschke_factors + extra_poles;
    if (p == 0)
    {
        return 0.0;
    }
    if (rho == 0.0)
    {
        // +-z^blaschke_factors exactly
        return order >= blaschke_factors ? 0.0 : 1.0;
    }
    const double k0    = static_cast<double>(order) + 1.0;
    const double ratio = rho * (k0 + p) / (k0 + 1.0);
    if (ratio >= 1.0)
    {
        return kInf;
    }
    const double log_term = (k0 - blaschke_factors) * std::log(rho) +
                            std::lgamma(k0 + p) - std::lgamma(double(p)) -
                            std::lgamma(k0 + 1.0);
    return std::exp(log_term) / (1.0 - ratio);
}

/// Smallest order >= start whose tail bound is below eps (or -1 past cap).
inline int order_for_tail(double rho, int blaschke_factors, int extra_poles,
                          int start, double eps, int cap)
{
    for (int n = std::max(start, 0); n <= cap; ++n)
    {
        if (series_tail_bound(rho, blaschke_factors, extra_poles, n) < eps)
        {
            return n;
        }
    }
    return -1;
}

namespace detail
{

/// In-place multiplication of a truncated power series by b_alpha.  This is
/// the convolution with alpha + (|alpha|^2-1) sum_{k>=1} conj(alpha)^(k-1) z^k,
/// evaluated through the equivalent recurrence h_k = g_k + conj(alpha) h_{k-1}
/// with g = (alpha - z) f.
inline void multiply_by_factor(CVector& series, const cplx& alpha)
{
    const cplx ac = std::conj(alpha);
    cplx prev_f   = 0.0; // f_{k-1}
    cplx prev_h   = 0.0; // h_{k-1}
    for (Eigen::Index k = 0; k < series.size(); ++k)
    {
        const cplx f = series[k];
        const cplx g = alpha * f - prev_f;
        const cplx h = g + ac * prev_h;
        prev_f       = f;
        prev_h       = h;
        series[k]    = h;
    }
}

/// In-place multiplication by sqrt(1-|alpha|^2)/(1 - conj(alpha) z).
inline void multiply_by_szego(CVector& series, const cplx& alpha)
{
    const cplx ac    = std::conj(alpha);
    const double nrm = std::sqrt(1.0 - std::norm(alpha));
    cplx prev        = 0.0;
    for (Eigen::Index k = 0; k < series.size(); ++k)
    {
        prev      = series[k] + ac * prev;
        series[k] = prev;
    }
    series *= nrm;
}

} // namespace detail

struct TaylorExpansion
{
    CVector coefficients; ///< c_0 .. c_N
    double tail_bound = 0.0;
};

/// Coefficients c_0..c_N of b at the origin with a certified l1 tail bound.
/// Throws TailBoundExceeded when the bound exceeds eps.
inline TaylorExpansion taylor_coefficients(const BlaschkeProduct& b, int N,
                                           double eps = kInf)
{
    require(N >= 1, ErrorKind::InvalidArgument, "expansion order must be >= 1");
    TaylorExpansion out;
    out.coefficients = CVector::Zero(N + 1);
    out.coefficients[0] = b.constant();
    for (const auto& a : b.zeros())
    {
        detail::multiply_by_factor(out.coefficients, a);
    }
    out.tail_bound = series_tail_bound(b.max_modulus(), b.degree(), 0, N);
    if (out.tail_bound > eps)
    {
        fail(ErrorKind::TailBoundExceeded,
             "tail bound " + detail::format_double(out.tail_bound) +
                 " exceeds " + detail::format_double(eps) + " at order " +
                 std::to_string(N));
    }
    return out;
}

//------------------------------------------------------------------------------
// Text forms
//------------------------------------------------------------------------------

/// Canonical report form "B[c; (re,im) x mult, ...]".
inline std::string to_text(const BlaschkeProduct& b)
{
    std::string out = "B[" + detail::format_complex(b.constant()) + ";";
    bool first      = true;
    for (const auto& [z, mult] : detail::group_zeros(b.zeros()))
    {
        out += first ? " " : ", ";
        out += detail::format_complex(z) + " x " + std::to_string(mult);
        first = false;
    }
    return out + "]";
}

namespace detail
{

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    {
        s.remove_suffix(1);
    }
    return s;
}

inline double parse_double(std::string_view s)
{
    s = trim(s);
    double value = 0.0;
    auto res     = std::from_chars(s.data(), s.data() + s.size(), value);
    require(res.ec == std::errc() && res.ptr == s.data() + s.size(),
            ErrorKind::ConfigInvalid,
            "cannot parse number '" + std::string(s) + "'");
    return value;
}

} // namespace detail

/// Parses "re,im".
inline cplx parse_complex_pair(std::string_view text)
{
    const auto comma = text.find(',');
    require(comma != std::string_view::npos, ErrorKind::ConfigInvalid,
            "expected 're,im', got '" + std::string(text) + "'");
    return {detail::parse_double(text.substr(0, comma)),
            detail::parse_double(text.substr(comma + 1))};
}

/// Parses "re,im;re,im;..." (empty string gives no zeros).
inline std::vector<cplx> parse_zero_list(std::string_view text)
{
    std::vector<cplx> zeros;
    text = detail::trim(text);
    while (!text.empty())
    {
        const auto semi = text.find(';');
        const auto item = detail::trim(text.substr(0, semi));
        if (!item.empty())
        {
            zeros.push_back(parse_complex_pair(item));
        }
        if (semi == std::string_view::npos)
        {
            break;
        }
        text.remove_prefix(semi + 1);
    }
    return zeros;
}

} // namespace hlift
