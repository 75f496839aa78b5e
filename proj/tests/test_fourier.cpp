#include <random>

#include <hankel_lift/fourier.hpp>

#include "test_util.hpp"

using namespace hlift;

namespace
{

const cplx I(0.0, 1.0);

FourierVector random_vector(std::mt19937_64& rng, int order)
{
    std::normal_distribution<double> g;
    FourierVector f(order);
    for (int k = -order; k <= order; ++k)
    {
        f[k] = cplx(g(rng), g(rng));
    }
    return f;
}

} // namespace

TEST(FourierVector, IndexingAndNorm)
{
    FourierVector f(3);
    f[-1] = 1.0;
    f[2]  = 3.0;
    EXPECT_EQ(f.order(), 3);
    EXPECT_EQ(f.coeff(-1), cplx(1.0));
    EXPECT_EQ(f.coeff(7), cplx(0.0));
    EXPECT_NEAR(f.norm(), std::sqrt(10.0), 1e-15);
    EXPECT_FALSE(f.is_analytic());
    EXPECT_HLIFT_ERROR(FourierVector(-1), ErrorKind::InvalidArgument);
}

TEST(ProjectAnalytic, KillsNegativeIndices)
{
    FourierVector f(2);
    f[-1] = 1.0;
    EXPECT_EQ(project_analytic(f).norm(), 0.0);

    f[2] = 3.0;
    const auto p = project_analytic(f);
    EXPECT_EQ(p[2], cplx(3.0));
    EXPECT_EQ(p[-1], cplx(0.0));
    EXPECT_NEAR(f.norm(), std::sqrt(10.0), 1e-15);
    EXPECT_NEAR(p.norm(), 3.0, 1e-15);

    const auto a = FourierVector::analytic((CVector(3) << 1.0, 2.0, I).finished());
    EXPECT_EQ(project_analytic(a).raw(), a.raw());
}

TEST(Flip, NegatesIndicesAndIsUnitary)
{
    FourierVector f(2);
    f[1] = 1.0;
    EXPECT_EQ(flip(f)[-1], cplx(1.0));
    EXPECT_EQ(flip(f)[1], cplx(0.0));

    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t)
    {
        const auto g = random_vector(rng, 6);
        EXPECT_EQ(flip(flip(g)).raw(), g.raw());
        EXPECT_NEAR(flip(g).norm(), g.norm(), 1e-14);
        EXPECT_NEAR(std::abs(inner(flip(g), flip(g)) - inner(g, g)), 0.0, 1e-12);
    }
}

TEST(ConjFlipSymbol, ConjugatesAtTheSameIndex)
{
    const auto s = conj_flip_symbol(Symbol::monomial(1, I));
    EXPECT_EQ(s.coefficient(1), -I);
    EXPECT_EQ(s.coefficient(-1), cplx(0.0));

    // two-step route: flip indices, then conjugate pointwise on the circle,
    // which sends index -k back to k
    const Symbol phi = Symbol::laurent(-2, (CVector(4) << 1.0 + I, 2.0, -I, 0.5).finished());
    const auto direct = conj_flip_symbol(phi);
    for (int k = -2; k <= 1; ++k)
    {
        const cplx flipped   = phi.coefficient(k); // at index -k after J
        const cplx conjugate = std::conj(flipped); // conj moves -k to k
        EXPECT_EQ(direct.coefficient(k), conjugate);
    }

    const Symbol real = Symbol::polynomial({1.0, -2.0, 0.5});
    EXPECT_EQ(conj_flip_symbol(real).values(), real.values());
    EXPECT_EQ(conj_flip_symbol(conj_flip_symbol(phi)).values(), phi.values());
    EXPECT_HLIFT_ERROR(conj_flip_symbol(Symbol::hilbert()),
                       ErrorKind::GeneratorNotMaterialized);
}

TEST(BackshiftAnalytic, ShiftsDown)
{
    auto f = FourierVector::analytic((CVector(3) << 0.0, 0.0, 1.0).finished());
    auto b = backshift_analytic(f);
    EXPECT_EQ(b[1], cplx(1.0));
    EXPECT_EQ(b[2], cplx(0.0));

    EXPECT_EQ(backshift_analytic(FourierVector::analytic(CVector::Ones(1))).norm(), 0.0);

    f = FourierVector::analytic((CVector(3) << 1.0, 2.0, 3.0).finished());
    b = backshift_analytic(f);
    EXPECT_EQ(b[0], cplx(2.0));
    EXPECT_EQ(b[1], cplx(3.0));
    EXPECT_EQ(b[2], cplx(0.0));

    FourierVector g(2);
    g[-1] = 1.0;
    EXPECT_HLIFT_ERROR(backshift_analytic(g), ErrorKind::NotAnalytic);
}

TEST(ShiftAnalytic, IsAdjointOfBackshiftOnAnalyticVectors)
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t)
    {
        const auto f = project_analytic(random_vector(rng, 8));
        auto g       = project_analytic(random_vector(rng, 8));
        g[8]         = 0.0; // keep z g inside the window
        EXPECT_NEAR(std::abs(inner(shift_analytic(g), f) -
                             inner(g, backshift_analytic(f))),
                    0.0, 1e-12);
    }
}

TEST(MultiplyTruncate, SmallCases)
{
    FourierVector f(3);
    f[0] = 1.0;
    f[1] = 2.0;
    auto r = multiply_truncate(Symbol::monomial(0), f, 3);
    EXPECT_EQ(r.value.raw(), f.raw());
    EXPECT_EQ(r.leakage, 0.0);

    r = multiply_truncate(Symbol::monomial(1), f, 2);
    EXPECT_EQ(r.value[1], cplx(1.0));
    EXPECT_EQ(r.value[2], cplx(2.0));

    FourierVector z(3);
    z[1] = 1.0;
    const Symbol zz = Symbol::laurent(-1, (CVector(3) << 1.0, 0.0, 1.0).finished());
    r               = multiply_truncate(zz, z, 2);
    EXPECT_EQ(r.value[2], cplx(1.0));
    EXPECT_EQ(r.value[0], cplx(1.0));
    EXPECT_NEAR(r.value.norm(), std::sqrt(2.0), 1e-15);
    EXPECT_EQ(r.leakage, 0.0);
}

TEST(MultiplyTruncate, MatchesBruteForceConvolution)
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (int t = 0; t < 10; ++t)
    {
        CVector v(5);
        oracle::Laurent phi;
        for (int k = 0; k < 5; ++k)
        {
            v[k]        = cplx(g(rng), g(rng));
            phi[k - 2] = v[k];
        }
        const Symbol s = Symbol::laurent(-2, v);
        const auto f   = random_vector(rng, 10);
        oracle::Laurent fl;
        for (int k = -10; k <= 10; ++k)
        {
            fl[k] = f[k];
        }
        const auto full = oracle::convolve(phi, fl);
        const auto r    = multiply_truncate(s, f, 8);
        double outside  = 0.0;
        for (const auto& [k, c] : full)
        {
            if (std::abs(k) <= 8)
            {
                EXPECT_NEAR(std::abs(r.value[k] - c), 0.0, 1e-12);
            }
            else
            {
                outside += std::norm(c);
            }
        }
        EXPECT_NEAR(r.leakage, std::sqrt(outside), 1e-12);
    }
}

TEST(MultiplyTruncate, WindowTooSmall)
{
    const Symbol s = Symbol::laurent(-3, CVector::Ones(7));
    EXPECT_HLIFT_ERROR(multiply_truncate(s, FourierVector(5), 3), ErrorKind::WindowTooSmall);
    EXPECT_NO_THROW(multiply_truncate(s, FourierVector(6), 3));
}

TEST(MultiplyTruncate, SymbolTailEntersLeakage)
{
    const Symbol s = Symbol::analytic(CVector::Ones(2), 1e-3);
    const auto f   = FourierVector::analytic(CVector::Ones(5));
    const auto r   = multiply_truncate(s, f, 2);
    EXPECT_GE(r.leakage, 1e-3 * f.norm());
}

TEST(Symbol, LaurentWindowAndCoverage)
{
    const Symbol s = Symbol::laurent(-1, (CVector(3) << 1.0, 2.0, 3.0).finished());
    EXPECT_EQ(s.lo(), -1);
    EXPECT_EQ(s.hi(), 1);
    EXPECT_EQ(s.window(), 1);
    EXPECT_EQ(s.coefficient(5), cplx(0.0));
    EXPECT_TRUE(s.covers(-100, 100)); // exact window: zeros beyond are known

    const Symbol t = Symbol::analytic(CVector::Ones(4), 1e-9);
    EXPECT_TRUE(t.covers(0, 3));
    EXPECT_FALSE(t.covers(0, 4));
    EXPECT_FALSE(t.covers(-1, 3));
}

TEST(Symbol, PolynomialTrimsTrailingZeros)
{
    const Symbol p = Symbol::polynomial({1.0, 2.0, 0.0, 0.0});
    EXPECT_EQ(p.hi(), 1);
    EXPECT_EQ(Symbol::polynomial({}).hi(), 0);
    EXPECT_EQ(Symbol().coefficient(0), cplx(0.0));
    EXPECT_EQ(Symbol::zero().values().size(), 1);
}

TEST(Symbol, HilbertGenerator)
{
    const Symbol h = Symbol::hilbert();
    EXPECT_FALSE(h.is_laurent());
    EXPECT_EQ(h.coefficient(0), cplx(1.0));
    EXPECT_EQ(h.coefficient(3), cplx(0.25));
    EXPECT_EQ(h.coefficient(-2), cplx(0.0));
    EXPECT_TRUE(h.covers(0, 1000));
    EXPECT_EQ(h.coefficient_bound(), 1.0);
    EXPECT_HLIFT_ERROR(h.lo(), ErrorKind::GeneratorNotMaterialized);
    EXPECT_HLIFT_ERROR(h.values(), ErrorKind::GeneratorNotMaterialized);

    const Symbol m = h.materialize(0, 10);
    EXPECT_TRUE(m.is_laurent());
    EXPECT_EQ(m.name(), "hilbert");
    EXPECT_EQ(m.coefficient(10), cplx(1.0 / 11.0));
    EXPECT_TRUE(std::isinf(m.tail_bound())); // 1/(k+1) is not summable
}

TEST(Symbol, GeneratorWithTailFunction)
{
    const Symbol g = Symbol::generator(
        "geometric", 0, [](int k) { return cplx(std::pow(0.5, k)); }, 1.0,
        [](int n) { return std::pow(0.5, n); });
    const Symbol m = g.materialize(0, 20);
    EXPECT_NEAR(m.tail_bound(), std::pow(0.5, 20), 1e-20);
    EXPECT_EQ(m.coefficient(3), cplx(0.125));
}

TEST(Symbol, MaterializeMovesDroppedMassIntoTail)
{
    const Symbol s = Symbol::laurent(-2, (CVector(5) << 1.0, 2.0, 3.0, 4.0, 5.0).finished());
    const Symbol m = s.materialize(-1, 1);
    EXPECT_EQ(m.tail_bound(), 1.0 + 5.0);
    EXPECT_EQ(m.coefficient(0), cplx(3.0));
    EXPECT_HLIFT_ERROR(s.materialize(2, 1), ErrorKind::InvalidArgument);
}
