#pragma once

// Reference computations that share no code path with the library: circle
// sampling instead of series recurrences, operator definitions applied to
// monomials instead of entry formulas, cofactor determinants instead of SVD.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

namespace oracle
{

using cplx = std::complex<double>;

/// Taylor coefficients 0..n of f from M equispaced samples on |z| = 1
/// (plain DFT; aliasing error is the coefficient mass beyond M - n).
inline std::vector<cplx> sampled_taylor(const std::function<cplx(cplx)>& f,
                                        int n, int M = 2048)
{
    std::vector<cplx> samples(M);
    for (int j = 0; j < M; ++j)
    {
        samples[j] = f(std::polar(1.0, 2.0 * std::numbers::pi * j / M));
    }
    std::vector<cplx> c(n + 1);
    for (int k = 0; k <= n; ++k)
    {
        cplx acc = 0.0;
        for (int j = 0; j < M; ++j)
        {
            acc += samples[j] *
                   std::polar(1.0, -2.0 * std::numbers::pi * double(j) * k / M);
        }
        c[k] = acc / double(M);
    }
    return c;
}

/// Direct product of Blaschke factors (alpha - z)/(1 - conj(alpha) z).
inline cplx blaschke_value(const std::vector<cplx>& zeros, cplx constant, cplx z)
{
    cplx v = constant;
    for (const auto& a : zeros)
    {
        v *= (a - z) / (1.0 - std::conj(a) * z);
    }
    return v;
}

/// Sparse Laurent coefficients index -> value.
using Laurent = std::map<int, cplx>;

/// Full product of two Laurent series by double loop.
inline Laurent convolve(const Laurent& a, const Laurent& b)
{
    Laurent out;
    for (const auto& [i, x] : a)
    {
        for (const auto& [j, y] : b)
        {
            out[i + j] += x * y;
        }
    }
    return out;
}

using Dense = std::vector<std::vector<cplx>>;

/// H_phi = P_+ L_phi J on monomials: J z^n = z^-n, multiply, keep k >= 0.
inline Dense hankel_by_definition(const Laurent& phi, int N)
{
    Dense h(N + 1, std::vector<cplx>(N + 1, 0.0));
    for (int n = 0; n <= N; ++n)
    {
        const Laurent image = convolve(phi, Laurent{{-n, 1.0}});
        for (const auto& [k, v] : image)
        {
            if (k >= 0 && k <= N)
            {
                h[k][n] += v;
            }
        }
    }
    return h;
}

/// T_phi = P_+ L_phi on monomials.
inline Dense toeplitz_by_definition(const Laurent& phi, int N)
{
    Dense t(N + 1, std::vector<cplx>(N + 1, 0.0));
    for (int n = 0; n <= N; ++n)
    {
        const Laurent image = convolve(phi, Laurent{{n, 1.0}});
        for (const auto& [k, v] : image)
        {
            if (k >= 0 && k <= N)
            {
                t[k][n] += v;
            }
        }
    }
    return t;
}

/// Determinant by cofactor expansion along the first row.
inline cplx cofactor_det(const Dense& m)
{
    const std::size_t n = m.size();
    if (n == 1)
    {
        return m[0][0];
    }
    cplx det    = 0.0;
    double sign = 1.0;
    for (std::size_t c = 0; c < n; ++c)
    {
        Dense minor;
        for (std::size_t r = 1; r < n; ++r)
        {
            std::vector<cplx> row;
            for (std::size_t k = 0; k < n; ++k)
            {
                if (k != c)
                {
                    row.push_back(m[r][k]);
                }
            }
            minor.push_back(row);
        }
        det += sign * m[0][c] * cofactor_det(minor);
        sign = -sign;
    }
    return det;
}

/// Pivots of symmetric Gaussian elimination without pivoting, in long double.
inline std::vector<long double> elimination_pivots(
    const std::vector<std::vector<long double>>& a0)
{
    auto a              = a0;
    const std::size_t n = a.size();
    std::vector<long double> piv;
    for (std::size_t k = 0; k < n; ++k)
    {
        piv.push_back(a[k][k]);
        for (std::size_t i = k + 1; i < n; ++i)
        {
            const long double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j)
            {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    return piv;
}

/// Matrix of a linear map on d x d matrices, column-major vectorized, built
/// by applying the map to each matrix unit.
inline Dense vectorized_map(const std::function<Dense(const Dense&)>& f, int d)
{
    const int n = d * d;
    Dense out(n, std::vector<cplx>(n, 0.0));
    for (int j = 0; j < d; ++j)
    {
        for (int i = 0; i < d; ++i)
        {
            Dense unit(d, std::vector<cplx>(d, 0.0));
            unit[i][j]    = 1.0;
            const Dense y = f(unit);
            for (int c = 0; c < d; ++c)
            {
                for (int r = 0; r < d; ++r)
                {
                    out[r + c * d][i + j * d] = y[r][c];
                }
            }
        }
    }
    return out;
}

inline Dense multiply(const Dense& a, const Dense& b)
{
    const std::size_t n = a.size(), m = b[0].size(), k = b.size();
    Dense out(n, std::vector<cplx>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < m; ++j)
        {
            for (std::size_t l = 0; l < k; ++l)
            {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    return out;
}

inline Dense adjoint(const Dense& a)
{
    Dense out(a[0].size(), std::vector<cplx>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        for (std::size_t j = 0; j < a[0].size(); ++j)
        {
            out[j][i] = std::conj(a[i][j]);
        }
    }
    return out;
}

} // namespace oracle
