#pragma once

///
/// \file acceptance.hpp
///
/// The nine end-to-end checks of the library, each returning one
/// CriterionResult.  Shared by the `suite` command and the acceptance test.
///

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hankel_lift.hpp"

namespace hlift
{

struct CriterionResult
{
    int id = 0;
    std::string name;
    bool passed       = false;
    double measured   = 0.0; ///< worst value of the governing metric
    double tolerance  = 0.0;
    std::string detail;
    double seconds = 0.0;    ///< wall time, kept out of deterministic output
};

struct AcceptanceOptions
{
    std::uint64_t seed = 1;
    int order          = 64;
};

namespace detail
{

// Ratio across the rank cut: smallest kept value over largest dropped one
// (the cut itself when nothing is dropped).
inline double gap_ratio(const NullSpace& ns)
{
    const double above = ns.sv_above.value_or(kInf);
    if (!ns.sv_below)
    {
        return above / ns.cut;
    }
    return *ns.sv_below > 0.0 ? above / *ns.sv_below : kInf;
}

inline std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

template <class F>
CriterionResult timed(int id, std::string name, F&& body)
{
    const auto t0      = std::chrono::steady_clock::now();
    CriterionResult r  = body();
    r.id               = id;
    r.name             = std::move(name);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
    return r;
}

inline bool run_decisive(const std::function<bool(int, bool&)>& trial, int N,
                         bool& agree)
{
    // trial(N, agree) returns decisiveness; at most two doublings of N
    for (int attempt = 0; attempt < 3; ++attempt, N *= 2)
    {
        if (trial(N, agree))
        {
            return true;
        }
    }
    return false;
}

} // namespace detail

/// 1. Nonzero intertwiners exist exactly when theta != 1.
inline CriterionResult criterion_existence(const AcceptanceOptions& opt = {})
{
    return detail::timed(1, "existence dichotomy", [&] {
        CriterionResult r;
        r.tolerance   = 100.0;
        r.measured    = kInf;
        int mismatches = 0, with_theta = 0, equal_dim = 0;
        const auto t0  = std::chrono::steady_clock::now();
        for (int s = 0; s < 50; ++s)
        {
            const auto u   = random_blaschke(opt.seed + s, {1, 5});
            const auto rep = solve_intertwiner_space(u, opt.order);
            const bool has = rep.theta.degree() > 0;
            with_theta += has;
            equal_dim += rep.solution_dim == rep.theta.degree();
            if ((rep.solution_dim > 0) != has)
            {
                ++mismatches;
            }
            r.measured = std::min(r.measured, detail::gap_ratio(rep.kernel));
        }
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        r.passed = mismatches == 0 && r.measured >= r.tolerance && secs < 30.0;
        r.detail = "50 trials, " + std::to_string(with_theta) +
                   " with theta != 1, " + std::to_string(mismatches) +
                   " mismatches, min gap " + detail::fmt(r.measured) +
                   ", dim == deg(theta) in " + std::to_string(equal_dim);
        if (secs >= 30.0)
        {
            r.detail += ", over the 30 s budget";
        }
        return r;
    });
}

/// 2. b_{i/2} admits none; zeros {i/2, -i/2} admit X_1, X_2 independent.
inline CriterionResult criterion_conjugate_pair(const AcceptanceOptions& opt = {})
{
    return detail::timed(2, "conjugate-pair criterion", [&] {
        CriterionResult r;
        const cplx i(0.0, 1.0);
        const auto single = make_blaschke({0.5 * i});
        const auto pair   = make_blaschke({0.5 * i, -0.5 * i});
        const int d_single = solve_intertwiner_space(single, opt.order).solution_dim;
        const auto rep     = solve_intertwiner_space(pair, opt.order);

        const auto x1 = gcd_intertwiner(pair, opt.order, 1);
        const auto x2 = gcd_intertwiner(pair, opt.order, 2);
        const CMatrix& k = rep.kernel.basis;
        CMatrix both(4, 2);
        both.col(0) = detail::vec(x1->entries) / x1->entries.norm();
        both.col(1) = detail::vec(x2->entries) / x2->entries.norm();
        const double member =
            (both - k * (k.adjoint() * both)).colwise().norm().maxCoeff();
        const int dependent = null_space(both).dimension();

        r.measured  = member;
        r.tolerance = 1e-8;
        r.passed    = d_single == 0 && rep.solution_dim >= 2 &&
                   member <= r.tolerance && dependent == 0;
        r.detail = "dim(b_{i/2}) = " + std::to_string(d_single) +
                   ", dim(pair) = " + std::to_string(rep.solution_dim) +
                   ", X_1, X_2 in span up to " + detail::fmt(member) +
                   ", independent: " + (dependent == 0 ? "yes" : "no");
        return r;
    });
}

/// 3. H_phi = [X 0; 0 0] with ||H_phi|| = ||X||.
inline CriterionResult criterion_block_lift(const AcceptanceOptions& opt = {})
{
    return detail::timed(3, "block lifting", [&] {
        CriterionResult r;
        r.tolerance = 1e-8;
        const cplx i(0.0, 1.0);
        auto one = [&](const BlaschkeProduct& u, const Symbol& phi) {
            const int order  = block_lift_order(u, opt.order);
            const auto basis = tm_basis_at(u, order);
            const CMatrix x  = compress(hankel_matrix(phi, order), basis).entries;
            const auto rec   = verify_block_lift(x, phi, u, order);
            return std::max({rec.off_diagonal_max(), rec.lower_right,
                             rec.norm_gap(), rec.top_left_residual});
        };
        const auto z2   = make_blaschke({0.0, 0.0});
        const auto pair = make_blaschke({0.5 * i, -0.5 * i});
        const int order = block_lift_order(pair, opt.order);
        const double a  = one(z2, Symbol::monomial(1));
        const double b  = one(pair, lifting_symbol(pair, 2 * order)->symbol);
        r.measured = std::max(a, b);
        r.passed   = r.measured <= r.tolerance;
        r.detail   = "worst block/norm residual: u = z^2, phi = z: " +
                   detail::fmt(a) + "; zeros {i/2, -i/2}: " + detail::fmt(b);
        return r;
    });
}

namespace detail
{

inline int invariance_order(const BlaschkeProduct& u, const Symbol& phi, int N)
{
    return std::max(N, 4 * u.degree() + phi.window());
}

} // namespace detail

/// 4. Conditions (1), (2), (3) agree on random trials.
inline CriterionResult criterion_invariance(const AcceptanceOptions& opt = {})
{
    return detail::timed(4, "invariance equivalence", [&] {
        CriterionResult r;
        int decisive = 0, agree = 0, unresolved = 0, holds = 0;
        for (int s = 0; s < 100; ++s)
        {
            const std::uint64_t seed = opt.seed + 1000 + s;
            const auto u = random_blaschke(seed, {1, 4});
            const Symbol phi =
                s % 2 == 0
                    ? random_symbol_in_model(conj_reflect(u), seed, opt.order)
                    : random_polynomial_symbol(seed, 1 + s % 7);
            bool ok     = false;
            bool held   = false;
            auto trial  = [&](int N, bool& a) {
                const auto rep = check_invariance(u, phi, N);
                a    = rep.agree();
                held = rep.cond_kernel.holds;
                return rep.decisive();
            };
            if (detail::run_decisive(trial, detail::invariance_order(u, phi, opt.order),
                                     ok))
            {
                ++decisive;
                agree += ok;
                holds += held;
            }
            else
            {
                ++unresolved;
            }
        }
        r.measured  = decisive > 0 ? double(agree) / decisive : 0.0;
        r.tolerance = 1.0;
        r.passed    = unresolved == 0 && agree == decisive;
        r.detail    = std::to_string(decisive) + " decisive of 100, " +
                   std::to_string(agree) + " agree, " + std::to_string(holds) +
                   " invariant, " + std::to_string(unresolved) + " unresolved";
        return r;
    });
}

/// 5. Reducing verdicts agree, including the adjoint symbol path.
inline CriterionResult criterion_reducing(const AcceptanceOptions& opt = {})
{
    return detail::timed(5, "reducing equivalence", [&] {
        CriterionResult r;
        int decisive = 0, agree = 0, unresolved = 0, reducing = 0;
        for (int s = 0; s < 50; ++s)
        {
            const std::uint64_t seed = opt.seed + 2000 + s;
            RandomBlaschkeOptions ro{1, 5};
            ro.mix           = s % 3 == 2 ? ZeroMix::Generic : ZeroMix::Structured;
            const auto u     = random_blaschke(seed, ro);
            const auto theta = gcd_symbol_theta(u);
            Symbol phi;
            if (s % 2 == 0 && theta.degree() > 0)
            {
                phi = random_symbol_in_model(theta, seed, opt.order);
            }
            else if (s % 2 == 0)
            {
                // theta = 1: only phi with P_+ phi = 0 reduces
                phi = random_laurent_symbol(seed, -3, -1);
            }
            else
            {
                phi = random_polynomial_symbol(seed, 1 + s % 5);
            }
            bool ok    = false;
            bool red   = false;
            auto trial = [&](int N, bool& a) {
                const auto rep = check_reducing(u, phi, N);
                a   = rep.agree();
                red = rep.gcd_orthogonal.holds;
                return rep.decisive();
            };
            if (detail::run_decisive(trial, detail::invariance_order(u, phi, opt.order),
                                     ok))
            {
                ++decisive;
                agree += ok;
                reducing += red;
            }
            else
            {
                ++unresolved;
            }
        }
        r.measured  = decisive > 0 ? double(agree) / decisive : 0.0;
        r.tolerance = 1.0;
        r.passed    = unresolved == 0 && agree == decisive;
        r.detail    = std::to_string(decisive) + " decisive of 50, " +
                   std::to_string(agree) + " agree, " + std::to_string(reducing) +
                   " reducing, " + std::to_string(unresolved) + " unresolved";
        return r;
    });
}

/// 6. ker H_{zbar conj(Ju)} = u H^2.
inline CriterionResult criterion_kernel_identity(const AcceptanceOptions& opt = {})
{
    return detail::timed(6, "kernel identity", [&] {
        CriterionResult r;
        r.tolerance = 1e-9;
        const cplx i(0.0, 1.0);
        const std::vector<BlaschkeProduct> us{make_blaschke({0.0, 0.0}),
                                              make_blaschke({0.5}),
                                              make_blaschke({0.5 * i, -0.5 * i})};
        double worst_res = 0.0, worst_sv = kInf;
        for (const auto& u : us)
        {
            const auto rep = verify_kernel_identity(u, opt.order);
            worst_res = std::max(worst_res, rep.inclusion_residual);
            worst_sv  = std::min(worst_sv, rep.min_singular_value);
        }
        r.measured = worst_res;
        r.passed   = worst_res < r.tolerance && worst_sv > 0.05;
        r.detail   = "max inclusion residual " + detail::fmt(worst_res) +
                   ", min singular value on Q_u " + detail::fmt(worst_sv);
        return r;
    });
}

/// 7. S_z^* X S_z = X has only X = 0.
inline CriterionResult criterion_toeplitz(const AcceptanceOptions& opt = {})
{
    return detail::timed(7, "Toeplitz triviality", [&] {
        CriterionResult r;
        int nonzero = 0;
        r.measured  = kInf;
        r.tolerance = 100.0;
        for (int s = 0; s < 20; ++s)
        {
            const auto u   = random_blaschke(opt.seed + 3000 + s, {1, 6});
            const auto rep = solve_toeplitz_fixed_space(u, opt.order);
            nonzero += rep.dimension != 0;
            r.measured = std::min(r.measured, detail::gap_ratio(rep.kernel));
        }
        r.passed = nonzero == 0 && r.measured >= r.tolerance;
        r.detail = "20 trials, " + std::to_string(nonzero) +
                   " with a nonzero solution, min gap " + detail::fmt(r.measured);
        return r;
    });
}

/// 8. Hilbert matrix: norms below pi, ||Gamma_1||, no Beurling-type
/// invariant subspace, no block form.
inline CriterionResult criterion_hilbert(const AcceptanceOptions& = {})
{
    return detail::timed(8, "Hilbert matrix", [&] {
        CriterionResult r;
        r.tolerance = 1e-12;
        const auto t0 = std::chrono::steady_clock::now();
        bool monotone = true, below_pi = true;
        double prev = 0.0;
        std::string norms;
        for (int N : {8, 32, 128, 512})
        {
            const double n = operator_norm(hilbert_hankel(N));
            monotone = monotone && n >= prev;
            below_pi = below_pi && n < std::numbers::pi;
            prev     = n;
            norms += (norms.empty() ? "" : ", ") + detail::fmt(n);
        }
        const double g1 = std::abs(operator_norm(hilbert_hankel(1)) -
                                   (4.0 + std::sqrt(13.0)) / 6.0);

        bool all_false = true;
        double min_off = kInf;
        const Symbol gamma = Symbol::hilbert();
        for (const auto& u : {make_blaschke({0.0, 0.0}), make_blaschke({0.5})})
        {
            const Symbol window = gamma.materialize(0, 64);
            const auto rep = check_invariance(u, window, 64 + 4 * u.degree());
            all_false = all_false && !rep.cond_invariant.holds &&
                        !rep.cond_kernel.holds && !rep.cond_symbol.holds;
            const int order  = block_lift_order(u);
            const auto basis = tm_basis_at(u, order);
            const CMatrix x  = compress(hilbert_hankel(order), basis).entries;
            min_off = std::min(min_off,
                               verify_block_lift(x, gamma, u, order).off_diagonal_max());
        }
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        r.measured = g1;
        r.passed   = monotone && below_pi && g1 <= r.tolerance && all_false &&
                   min_off > 0.1 && secs < 60.0;
        r.detail = "norms " + norms + (monotone ? " nondecreasing" : " NOT monotone") +
                   (below_pi ? ", all < pi" : ", NOT all < pi") +
                   "; |G_1| error " + detail::fmt(g1) + "; invariance " +
                   (all_false ? "all false" : "NOT all false") +
                   " (finite-section); min off-diagonal block " +
                   detail::fmt(min_off);
        return r;
    });
}

/// 9. Exact structural identities of Hankel/Toeplitz sections.
inline CriterionResult criterion_structure(const AcceptanceOptions& opt = {})
{
    return detail::timed(9, "structural identities", [&] {
        CriterionResult r;
        r.tolerance = 1e-13;
        double intertwine = 0.0, brown_halmos = 0.0, adjoint = 0.0;
        for (int s = 0; s < 20; ++s)
        {
            const Symbol phi = random_laurent_symbol(opt.seed + 4000 + s, -6, 24);
            intertwine   = std::max(intertwine, hankel_intertwine_residual(phi, 16));
            brown_halmos = std::max(brown_halmos, brown_halmos_residual(phi, 16));
            adjoint      = std::max(adjoint, hankel_adjoint_residual(phi, 16));
        }
        r.measured = intertwine;
        r.passed   = intertwine <= r.tolerance && brown_halmos == 0.0 &&
                   adjoint == 0.0;
        r.detail = "T_z^* H - H T_z: " + detail::fmt(intertwine) +
                   ", Brown-Halmos: " + detail::fmt(brown_halmos) +
                   ", adjoint symbol: " + detail::fmt(adjoint);
        return r;
    });
}

using Criterion = std::function<CriterionResult(const AcceptanceOptions&)>;

inline std::vector<Criterion> acceptance_criteria()
{
    return {criterion_existence,   criterion_conjugate_pair,
            criterion_block_lift,  criterion_invariance,
            criterion_reducing,    criterion_kernel_identity,
            criterion_toeplitz,    criterion_hilbert,
            criterion_structure};
}

} // namespace hlift
