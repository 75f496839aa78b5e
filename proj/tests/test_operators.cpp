#include <random>

#include <hankel_lift/operators.hpp>

#include "test_util.hpp"

using namespace hlift;

namespace
{

const cplx I(0.0, 1.0);

struct RandomLaurent
{
    Symbol symbol;
    oracle::Laurent coeffs;
};

RandomLaurent random_laurent(std::mt19937_64& rng, int lo, int hi)
{
    std::normal_distribution<double> g;
    CVector v(hi - lo + 1);
    oracle::Laurent c;
    for (int k = lo; k <= hi; ++k)
    {
        v[k - lo] = cplx(g(rng), g(rng));
        c[k]      = v[k - lo];
    }
    return {Symbol::laurent(lo, v), c};
}

CMatrix stack(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() + b.rows(), a.cols());
    out << a, b;
    return out;
}

} // namespace

TEST(HankelMatrix, MatchesDefinitionOnMonomials)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 5; ++t)
    {
        const auto phi = random_laurent(rng, -4, 12);
        const CMatrix h = hankel_matrix(phi.symbol, 6).entries;
        EXPECT_LT((h - testutil::from_dense(oracle::hankel_by_definition(phi.coeffs, 6)))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-13);
    }
}

TEST(HankelMatrix, SmallExamples)
{
    const CMatrix hz = hankel_matrix(Symbol::monomial(1), 1).entries;
    EXPECT_EQ(hz, (CMatrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished());

    // only the analytic half of the symbol enters
    EXPECT_EQ(hankel_matrix(Symbol::monomial(-1), 3).entries.norm(), 0.0);

    const CMatrix h = hankel_matrix(Symbol::polynomial({1.0, 2.0, 3.0}), 1).entries;
    EXPECT_EQ(h, (CMatrix(2, 2) << 1.0, 2.0, 2.0, 3.0).finished());
}

TEST(HankelMatrix, InsufficientCoefficients)
{
    const Symbol s = Symbol::analytic(CVector::Ones(5), 1e-6);
    EXPECT_NO_THROW(hankel_matrix(s, 2));
    EXPECT_HLIFT_ERROR(hankel_matrix(s, 3), ErrorKind::InsufficientCoefficients);
    EXPECT_HLIFT_ERROR(hankel_matrix(Symbol::zero(), -1), ErrorKind::InvalidArgument);
}

TEST(ToeplitzMatrix, MatchesDefinitionOnMonomials)
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 5; ++t)
    {
        const auto phi = random_laurent(rng, -5, 3);
        const CMatrix m = toeplitz_matrix(phi.symbol, 7).entries;
        EXPECT_LT((m - testutil::from_dense(oracle::toeplitz_by_definition(phi.coeffs, 7)))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-13);
    }
}

TEST(ShiftMatrix, IsSubdiagonal)
{
    const CMatrix s = shift_matrix(2).entries;
    EXPECT_EQ(s, (CMatrix(3, 3) << 0, 0, 0, 1, 0, 0, 0, 1, 0).finished());
}

TEST(StructuralIdentities, ExactOnLaurentSymbols)
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 10; ++t)
    {
        const auto phi = random_laurent(rng, -6, 24);
        EXPECT_EQ(hankel_intertwine_residual(phi.symbol, 8), 0.0);
        EXPECT_EQ(brown_halmos_residual(phi.symbol, 8), 0.0);
        EXPECT_EQ(hankel_adjoint_residual(phi.symbol, 8), 0.0);
        EXPECT_EQ(hankel_structure_residual(hankel_matrix(phi.symbol, 8).entries), 0.0);
        EXPECT_EQ(toeplitz_structure_residual(toeplitz_matrix(phi.symbol, 8).entries), 0.0);
    }
}

TEST(StructuralIdentities, ResidualsDetectBrokenStructure)
{
    CMatrix m = hankel_matrix(Symbol::polynomial({1.0, 2.0, 3.0, 4.0, 5.0}), 2).entries;
    m(0, 2) += 0.5;
    EXPECT_NEAR(hankel_structure_residual(m), 0.5, 1e-15);
    CMatrix t = toeplitz_matrix(Symbol::polynomial({1.0, 2.0}), 2).entries;
    t(2, 2) = 4.0;
    EXPECT_NEAR(toeplitz_structure_residual(t), 3.0, 1e-15);
}

TEST(HankelAdjoint, UsesConjugatedCoefficients)
{
    const Symbol phi = Symbol::polynomial({1.0, I, 2.0 - I});
    const CMatrix a  = hankel_matrix(phi, 1).entries.adjoint();
    EXPECT_EQ(a(0, 1), -I);
    EXPECT_EQ(a(1, 1), 2.0 + I);
    EXPECT_EQ(hankel_adjoint_residual(phi, 1), 0.0);
}

TEST(OperatorNorm, HankelBoundedBySymbolL1)
{
    std::mt19937_64 rng(14);
    for (int t = 0; t < 10; ++t)
    {
        const auto phi = random_laurent(rng, -3, 9);
        const double l1 = phi.symbol.values().cwiseAbs().sum();
        EXPECT_LE(operator_norm(hankel_matrix(phi.symbol, 10)), l1 * (1 + 1e-12));
        EXPECT_LE(operator_norm(toeplitz_matrix(phi.symbol, 10)), l1 * (1 + 1e-12));
    }
}

TEST(OperatorNorm, PowerIterationAgreesWithSvdAboveDenseLimit)
{
    const CMatrix h = hilbert_hankel(600).entries;
    const double dense = singular_values(h).front();
    EXPECT_NEAR(operator_norm(h), dense, 1e-10);

    CMatrix d = CMatrix::Zero(kDenseSvdLimit + 1, kDenseSvdLimit + 1);
    d.diagonal().setConstant(0.5);
    d(3, 3) = 2.0 - I;
    EXPECT_NEAR(operator_norm(d), std::sqrt(5.0), 1e-12);
}

TEST(OperatorNorm, PowerIterationCapRaises)
{
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0)   = 1.0;
    d(1, 1)   = 0.999;
    EXPECT_HLIFT_ERROR(detail::power_norm(d, 2), ErrorKind::NoConvergence);
    EXPECT_NEAR(detail::power_norm(d), 1.0, 1e-10);
    EXPECT_EQ(detail::power_norm(CMatrix::Zero(3, 3)), 0.0);
}

TEST(HilbertHankel, MatchesMaterializedGenerator)
{
    const Symbol m = Symbol::hilbert().materialize(0, 20);
    EXPECT_EQ(hilbert_hankel(10).entries, hankel_matrix(m, 10).entries);
    EXPECT_HLIFT_ERROR(hankel_matrix(m, 11), ErrorKind::InsufficientCoefficients);
}

TEST(HilbertHankel, TwoByTwoNorm)
{
    // [[1, 1/2], [1/2, 1/3]]: largest eigenvalue (4 + sqrt 13)/6
    EXPECT_NEAR(operator_norm(hilbert_hankel(1)), (4.0 + std::sqrt(13.0)) / 6.0, 1e-12);
}

TEST(HilbertHankel, NormsIncreaseBelowPi)
{
    double prev = 0.0;
    for (int N : {1, 4, 16, 64, 256})
    {
        const double n = operator_norm(hilbert_hankel(N));
        EXPECT_GE(n, prev);
        EXPECT_LT(n, M_PI);
        prev = n;
    }
}

TEST(HilbertHankel, LogPivotsMatchEliminationInExtendedPrecision)
{
    const int N = 9;
    std::vector<std::vector<long double>> a(N + 1, std::vector<long double>(N + 1));
    for (int i = 0; i <= N; ++i)
    {
        for (int j = 0; j <= N; ++j)
        {
            a[i][j] = 1.0L / (i + j + 1.0L);
        }
    }
    const auto piv  = oracle::elimination_pivots(a);
    const auto logs = hilbert_log_pivots(N);
    for (int k = 0; k <= N; ++k)
    {
        EXPECT_GT(piv[k], 0.0L);
        EXPECT_NEAR(logs[k], std::log(static_cast<double>(piv[k])), 1e-6) << k;
    }
    EXPECT_EQ(logs[0], 0.0);
}

TEST(HilbertHankel, PivotsStayPositiveAtLargeOrder)
{
    for (double p : hilbert_log_pivots(512))
    {
        EXPECT_TRUE(std::isfinite(p));
    }
}

TEST(HilbertHankel, SmallestSingularValueFromExactInverse)
{
    // log lambda_min from a 400-digit symmetric eigensolve
    const std::vector<std::pair<int, double>> ref{{1, -2.7220255921994557675},
                                                  {8, -26.378350608018530337},
                                                  {32, -110.29358687088860955},
                                                  {128, -448.04676226589518913}};
    for (const auto& [N, v] : ref)
    {
        EXPECT_NEAR(hilbert_log_min_singular_value(N), v, 1e-9 * std::abs(v)) << N;
    }
    EXPECT_NEAR(std::exp(hilbert_log_min_singular_value(1)), (4.0 - std::sqrt(13.0)) / 6.0,
                1e-14);
    EXPECT_TRUE(std::isfinite(hilbert_log_min_singular_value(512)));
}

TEST(NullSpace, DiagonalCases)
{
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0)   = 1.0;
    d(1, 1)   = 1e-12;
    const auto ns = null_space(d);
    EXPECT_EQ(ns.dimension(), 2);
    EXPECT_NEAR(ns.gap(), 1e12, 1.0);
    EXPECT_LT((d * ns.basis).norm(), 1e-11);
    EXPECT_NEAR((ns.basis.adjoint() * ns.basis - CMatrix::Identity(2, 2)).norm(), 0.0,
                1e-14);

    EXPECT_EQ(null_space(CMatrix::Identity(4, 4)).dimension(), 0);
    EXPECT_TRUE(std::isinf(null_space(CMatrix::Identity(4, 4)).gap()));
}

TEST(NullSpace, WideMatrixPadsSingularValues)
{
    const CMatrix w = CMatrix::Ones(1, 3);
    const auto ns   = null_space(w);
    EXPECT_EQ(ns.dimension(), 2);
    EXPECT_EQ(ns.singular_values.size(), 3u);
    EXPECT_LT((w * ns.basis).norm(), 1e-14);
}

TEST(NullSpace, AmbiguousRank)
{
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0)   = 1.0;
    d(1, 1)   = 1e-8;
    EXPECT_HLIFT_ERROR(null_space(d), ErrorKind::AmbiguousRank);
    EXPECT_HLIFT_ERROR(null_space(d, 5e-9), ErrorKind::AmbiguousRank);
    EXPECT_TRUE(null_space(d, std::nullopt, false).ambiguous);
    EXPECT_EQ(null_space(d, 1e-6).dimension(), 1);
    EXPECT_EQ(null_space(d, 1e-10).dimension(), 0);
    EXPECT_HLIFT_ERROR(null_space(d, -1.0), ErrorKind::InvalidArgument);
}

TEST(Toeplitz, StackedWithAdjointHasTrivialKernel)
{
    // a nonzero Toeplitz operator and its adjoint cannot both annihilate
    // the same nonzero vector
    std::mt19937_64 rng(15);
    for (int t = 0; t < 20; ++t)
    {
        const auto phi = random_laurent(rng, -3, 5);
        const CMatrix m = toeplitz_matrix(phi.symbol, 64).entries;
        const auto ns   = null_space(stack(m, CMatrix(m.adjoint())));
        EXPECT_EQ(ns.dimension(), 0) << "trial " << t;
    }
}
