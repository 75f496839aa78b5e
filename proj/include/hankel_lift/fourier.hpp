#pragma once

///
/// \file fourier.hpp
///
/// Truncated bilateral Fourier series on the circle.  A FourierVector of
/// order N holds the coefficients with indices -N..N; a Symbol is either a
/// finite Laurent window or a coefficient generator rule.  All norms are the
/// l2 coefficient norms (Parseval); nothing here samples the circle.
///

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace hlift
{

class FourierVector
{
public:
    FourierVector() : FourierVector(0) {}

    explicit FourierVector(int order)
        : m_order(order), m_coeffs(CVector::Zero(2 * std::max(order, 0) + 1))
    {
        require(order >= 0, ErrorKind::InvalidArgument, "negative order");
    }

    /// Analytic vector from Taylor coefficients c_0..c_N.
    static FourierVector analytic(const CVector& taylor)
    {
        const int n = static_cast<int>(taylor.size()) - 1;
        FourierVector f(std::max(n, 0));
        for (int k = 0; k <= n; ++k)
        {
            f[k] = taylor[k];
        }
        return f;
    }

    int order() const noexcept
    {
        return m_order;
    }

    cplx& operator[](int k)
    {
        return m_coeffs[k + m_order];
    }

    const cplx& operator[](int k) const
    {
        return m_coeffs[k + m_order];
    }

    /// Coefficient at k, zero outside the window.
    cplx coeff(int k) const
    {
        return (k < -m_order || k > m_order) ? cplx(0.0) : (*this)[k];
    }

    const CVector& raw() const noexcept
    {
        return m_coeffs;
    }

    double norm() const
    {
        return m_coeffs.norm();
    }

    bool is_analytic() const
    {
        for (int k = -m_order; k < 0; ++k)
        {
            if ((*this)[k] != cplx(0.0))
            {
                return false;
            }
        }
        return true;
    }

    /// Nonnegative-index coefficients c_0..c_N.
    CVector analytic_part() const
    {
        return m_coeffs.tail(m_order + 1);
    }

private:
    int m_order;
    CVector m_coeffs;
};

/// <f, g> = sum_k f_k conj(g_k), over the union of both windows.
inline cplx inner(const FourierVector& f, const FourierVector& g)
{
    const int n = std::min(f.order(), g.order());
    cplx acc    = 0.0;
    for (int k = -n; k <= n; ++k)
    {
        acc += f[k] * std::conj(g[k]);
    }
    return acc;
}

//------------------------------------------------------------------------------
// Symbol
//------------------------------------------------------------------------------

class Symbol
{
public:
    using Rule = std::function<cplx(int)>;

    Symbol() : m_vals(CVector::Zero(1)), m_name("laurent") {}

    /// Laurent window lo..lo+values.size()-1.  `tail_bound` is an l1 bound on
    /// the coefficients outside the window; 0 means the window is exact.
    static Symbol laurent(int lo, CVector values, double tail_bound = 0.0)
    {
        Symbol s;
        s.m_lo    = lo;
        s.m_vals  = std::move(values);
        s.m_tail  = tail_bound;
        s.m_name  = "laurent";
        s.m_rule  = nullptr;
        if (s.m_vals.size() == 0)
        {
            s.m_vals = CVector::Zero(1);
            s.m_lo   = 0;
        }
        return s;
    }

    static Symbol zero()
    {
        return laurent(0, CVector::Zero(1));
    }

    static Symbol analytic(CVector taylor, double tail_bound = 0.0)
    {
        return laurent(0, std::move(taylor), tail_bound);
    }

    /// Polynomial sum_k coeffs[k] z^k, trailing exact zeros trimmed.
    static Symbol polynomial(std::vector<cplx> coeffs)
    {
        while (coeffs.size() > 1 && coeffs.back() == cplx(0.0))
        {
            coeffs.pop_back();
        }
        CVector v = Eigen::Map<CVector>(coeffs.data(), coeffs.size());
        return analytic(v);
    }

    static Symbol monomial(int k, cplx c = 1.0)
    {
        CVector v(1);
        v[0] = c;
        return laurent(k, v);
    }

    ///
    /// Coefficient generator: k -> rule(k) for k >= k_min, zero below.
    /// `coefficient_bound` bounds |rule(k)| for all k; `tail_l1`, when set,
    /// bounds sum_{k > n} |rule(k)| (used when materializing).
    ///
    static Symbol generator(std::string name, int k_min, Rule rule,
                            double coefficient_bound,
                            std::function<double(int)> tail_l1 = {})
    {
        Symbol s;
        s.m_name      = std::move(name);
        s.m_lo        = k_min;
        s.m_rule      = std::make_shared<Rule>(std::move(rule));
        s.m_coef_bnd  = coefficient_bound;
        s.m_tail_func = std::move(tail_l1);
        s.m_vals      = CVector();
        s.m_tail      = 0.0;
        return s;
    }

    /// Hilbert's Hankel generator k -> 1/(k+1), k >= 0.
    static Symbol hilbert()
    {
        return generator(
            "hilbert", 0, [](int k) { return cplx(1.0 / (k + 1.0), 0.0); }, 1.0,
            {});
    }

    bool is_laurent() const noexcept
    {
        return m_rule == nullptr;
    }

    const std::string& name() const noexcept
    {
        return m_name;
    }

    cplx coefficient(int k) const
    {
        if (!is_laurent())
        {
            return k >= m_lo ? (*m_rule)(k) : cplx(0.0);
        }
        if (k < m_lo || k > hi())
        {
            return 0.0;
        }
        return m_vals[k - m_lo];
    }

    int lo() const
    {
        require_laurent();
        return m_lo;
    }

    int hi() const
    {
        require_laurent();
        return m_lo + static_cast<int>(m_vals.size()) - 1;
    }

    /// max(|lo|, |hi|) of the Laurent window.
    int window() const
    {
        return std::max(std::abs(lo()), std::abs(hi()));
    }

    const CVector& values() const
    {
        require_laurent();
        return m_vals;
    }

    double tail_bound() const noexcept
    {
        return m_tail;
    }

    /// Whether coefficients at every index in [a, b] are known (exact window
    /// or generator).
    bool covers(int a, int b) const
    {
        if (!is_laurent() || m_tail == 0.0)
        {
            return true;
        }
        return a >= m_lo && b <= hi();
    }

    double coefficient_bound() const
    {
        if (!is_laurent())
        {
            return m_coef_bnd;
        }
        return m_vals.cwiseAbs().maxCoeff();
    }

    /// Laurent form on [a, b].
    Symbol materialize(int a, int b) const
    {
        require(a <= b, ErrorKind::InvalidArgument, "empty window");
        CVector v(b - a + 1);
        for (int k = a; k <= b; ++k)
        {
            v[k - a] = coefficient(k);
        }
        double tail = 0.0;
        if (!is_laurent())
        {
            if (m_tail_func)
            {
                tail = m_tail_func(b);
            }
            else
            {
                // no l1 tail available (e.g. 1/(k+1) is not summable)
                tail = kInf;
            }
        }
        else
        {
            tail = m_tail;
            for (int k = m_lo; k <= hi(); ++k)
            {
                if (k < a || k > b)
                {
                    tail += std::abs(coefficient(k));
                }
            }
        }
        Symbol s = laurent(a, std::move(v), tail);
        s.m_name = m_name;
        return s;
    }

    /// Nonnegative part c_0..c_n as a vector (zero-padded).
    CVector analytic_coefficients(int n) const
    {
        CVector v(n + 1);
        for (int k = 0; k <= n; ++k)
        {
            v[k] = coefficient(k);
        }
        return v;
    }

private:
    void require_laurent() const
    {
        require(is_laurent(), ErrorKind::GeneratorNotMaterialized,
                "symbol '" + m_name + "' is a generator; materialize it first");
    }

    int m_lo = 0;
    CVector m_vals;
    double m_tail = 0.0;
    std::string m_name;
    std::shared_ptr<Rule> m_rule;
    double m_coef_bnd = 0.0;
    std::function<double(int)> m_tail_func;
};

//------------------------------------------------------------------------------
// Operations
//------------------------------------------------------------------------------

/// P_+: negative-index coefficients set to zero.
inline FourierVector project_analytic(const FourierVector& f)
{
    FourierVector out = f;
    for (int k = -f.order(); k < 0; ++k)
    {
        out[k] = 0.0;
    }
    return out;
}

/// J: index k moves to -k.
inline FourierVector flip(const FourierVector& f)
{
    FourierVector out(f.order());
    for (int k = -f.order(); k <= f.order(); ++k)
    {
        out[-k] = f[k];
    }
    return out;
}

/// conj(J phi): conjugation at the same index.  Generators must be
/// materialized first.
inline Symbol conj_flip_symbol(const Symbol& phi)
{
    return Symbol::laurent(phi.lo(), phi.values().conjugate(), phi.tail_bound());
}

/// T_z^*: c_{k+1} -> index k on an analytic vector; c_0 is dropped.
inline FourierVector backshift_analytic(const FourierVector& f)
{
    require(f.is_analytic(), ErrorKind::NotAnalytic,
            "backshift requires vanishing negative coefficients");
    FourierVector out(f.order());
    for (int k = 0; k < f.order(); ++k)
    {
        out[k] = f[k + 1];
    }
    return out;
}

/// Multiplication by z on an analytic vector, keeping the order (the top
/// coefficient leaves the window).
inline FourierVector shift_analytic(const FourierVector& f)
{
    FourierVector out(f.order());
    for (int k = f.order(); k >= 1; --k)
    {
        out[k] = f[k - 1];
    }
    out[0] = 0.0;
    for (int k = -f.order(); k < 0; ++k)
    {
        out[k] = (k - 1 >= -f.order()) ? f[k - 1] : cplx(0.0);
    }
    return out;
}

struct TruncatedProduct
{
    FourierVector value;
    /// l2 mass of the product outside the output window plus the symbol's
    /// own truncation contribution.
    double leakage = 0.0;
};

/// L_phi f restricted to -N_out..N_out.  Requires N_in >= N_out + window(phi)
/// so that every output coefficient is exact.
inline TruncatedProduct multiply_truncate(const Symbol& phi,
                                          const FourierVector& f, int N_out)
{
    const int lo = phi.lo();
    const int hi = phi.hi();
    const int M  = phi.window();
    require(N_out >= 0, ErrorKind::InvalidArgument, "negative output order");
    require(f.order() >= N_out + M, ErrorKind::WindowTooSmall,
            "input order " + std::to_string(f.order()) + " < " +
                std::to_string(N_out) + " + " + std::to_string(M));

    const int full_lo = -f.order() + lo;
    const int full_hi = f.order() + hi;
    std::vector<cplx> full(full_hi - full_lo + 1, cplx(0.0));
    for (int j = lo; j <= hi; ++j)
    {
        const cplx c = phi.coefficient(j);
        if (c == cplx(0.0))
        {
            continue;
        }
        for (int n = -f.order(); n <= f.order(); ++n)
        {
            full[j + n - full_lo] += c * f[n];
        }
    }

    TruncatedProduct out{FourierVector(N_out), 0.0};
    double discarded = 0.0;
    for (int k = full_lo; k <= full_hi; ++k)
    {
        const cplx v = full[k - full_lo];
        if (k >= -N_out && k <= N_out)
        {
            out.value[k] = v;
        }
        else
        {
            discarded += std::norm(v);
        }
    }
    out.leakage = std::sqrt(discarded) + phi.tail_bound() * f.norm();
    return out;
}

} // namespace hlift
