#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "padicmv/errors.hpp"
#include "padicmv/meanvalue.hpp"

using namespace padicmv;

namespace {

LocalizationVector sig(const char* text) { return LocalizationVector{parse_rational_list(text)}; }

std::vector<Complex> values_of(const CoefficientVector& a) { return {a.values().begin(), a.values().end()}; }

bool close(long double x, long double y, long double rel) { return std::fabs(x - y) <= rel * std::max(1.0L, std::fabs(y)); }

ExecConfig with_path(KernelPath path, unsigned threads = 1) {
    ExecConfig e;
    e.path = path;
    e.threads = threads;
    return e;
}

}  // namespace

TEST_CASE("Parseval at sigma = 0, r = 2") {
    const auto phase = PhaseSystem::parabola();
    for (auto [p, K] : {std::pair{3u, 1u}, {3u, 2u}, {5u, 1u}, {5u, 2u}}) {
        const ScaleSpec scale(p, K);
        const auto omega = IndexDomain::box(1, scale.N());
        const auto a = random_complex_coefficients(omega, 42);
        for (auto path : {KernelPath::Fourier, KernelPath::Correlation}) {
            const auto rep = padic_short_mv(phase, omega, a, 2, scale, LocalizationVector::zeros(2), with_path(path));
            CHECK(close(rep.value, a.norm_power(2), 1e-9L));
            CHECK(rep.quadrature_error_bound == 0);
            CHECK(rep.method == MeanValueMethod::PadicExact);
        }
    }
}

TEST_CASE("p-adic value at N = 3, r = 4, a = 1") {
    const ScaleSpec scale(3, 1);
    const auto omega = IndexDomain::box(1, scale.N());
    const auto a = CoefficientVector::ones(omega);
    for (auto path : {KernelPath::Fourier, KernelPath::Correlation}) {
        const auto rep = padic_short_mv(PhaseSystem::parabola(), omega, a, 4, scale, LocalizationVector::zeros(2),
                                        with_path(path));
        CHECK(close(rep.value, 15, 1e-15L));
    }
}

TEST_CASE("p-adic values count congruences, not integer solutions") {
    // The finite sum is a character sum over (Z/N)^x(Z/N^2); at N = 9 it picks
    // up 8 congruence solutions that are not integer solutions.
    const auto phase = PhaseSystem::parabola();
    const ScaleSpec scale(3, 2);
    const auto omega = IndexDomain::box(1, scale.N());
    const auto a = CoefficientVector::ones(omega);
    const auto dom = build_domain(scale, LocalizationVector::zeros(2), phase.degrees());
    const long double padic = padic_short_mv(phase, omega, a, 4, scale, LocalizationVector::zeros(2)).value;
    CHECK(oracle::congruence_sum(phase, omega, values_of(a), 2, dom) == 161);
    CHECK(oracle::integer_count(phase, omega, 2) == 153);
    CHECK(close(padic, 161, 1e-15L));
}

TEST_CASE("p-adic values match the congruence oracle") {
    struct Case {
        PhaseSystem phase;
        std::uint64_t p;
        unsigned K;
        const char* sigma;
    };
    const std::vector<Case> cases{
        {PhaseSystem::parabola(), 3, 2, "0,0"},
        {PhaseSystem::parabola(), 3, 2, "0,1"},
        {PhaseSystem::parabola(), 2, 3, "1/3,2/3"},
        {PhaseSystem::parabola(), 5, 1, "0,1"},
        {PhaseSystem::moment_curve(3), 3, 1, "0,0,1"},
        {PhaseSystem::moment_curve(3), 2, 2, "0,1/2,1"},
        {expand_trace_phase(MinimalPolynomial::parse("1,0"), 2), 3, 1, "0,0,1,1"},
    };
    for (const auto& c : cases) {
        const ScaleSpec scale(c.p, c.K);
        const auto omega = IndexDomain::box(c.phase.dim(), scale.N());
        const auto dom = build_domain(scale, sig(c.sigma), c.phase.degrees());
        for (std::uint64_t seed : {1u, 2u}) {
            const auto a = random_complex_coefficients(omega, seed);
            const long double ref = oracle::congruence_sum(c.phase, omega, values_of(a), 2, dom);
            for (auto path : {KernelPath::Fourier, KernelPath::Correlation}) {
                const auto v = padic_short_mv(c.phase, omega, a, 4, scale, sig(c.sigma), with_path(path)).value;
                CHECK(close(v, ref, 1e-12L));
            }
        }
    }
}

TEST_CASE("r = 6 and non-even r against direct evaluation") {
    const auto phase = PhaseSystem::parabola();
    const ScaleSpec scale(3, 1);
    const auto omega = IndexDomain::box(1, scale.N());
    const auto a = random_complex_coefficients(omega, 3);
    const auto dom = build_domain(scale, sig("0,1"), phase.degrees());
    const long double r6 = oracle::congruence_sum(phase, omega, values_of(a), 3, dom);
    CHECK(close(padic_short_mv(phase, omega, a, 6, scale, sig("0,1"), with_path(KernelPath::Fourier)).value, r6, 1e-12L));
    CHECK(close(padic_short_mv(phase, omega, a, 6, scale, sig("0,1"), with_path(KernelPath::Correlation)).value, r6,
                1e-12L));
    const auto moment = PhaseSystem::moment_curve(3);
    const ScaleSpec s2(2, 2);
    const auto omega2 = IndexDomain::box(1, s2.N());
    const auto b = random_complex_coefficients(omega2, 4);
    const auto dom2 = build_domain(s2, sig("0,1/2,1"), moment.degrees());
    for (long double r : {2.5L, 3.0L, 7.25L}) {
        const long double ref = oracle::naive_padic(moment, omega2, values_of(b), r, dom2);
        CHECK(close(padic_short_mv(moment, omega2, b, r, s2, sig("0,1/2,1")).value, ref, 1e-12L));
    }
    CHECK_THROWS_AS(padic_short_mv(phase, omega, a, 3, scale, sig("0,1"), with_path(KernelPath::Correlation)),
                    InvalidInput);
    CHECK_THROWS_AS(padic_short_mv(phase, omega, a, 1.5L, scale, sig("0,1")), InvalidInput);
}

TEST_CASE("single-point Omega gives 1 for every sigma and r") {
    const auto phase = PhaseSystem::parabola();
    const ScaleSpec scale(3, 2);
    const auto omega = IndexDomain::from_points({{4}}, scale.N());
    const auto a = CoefficientVector::ones(omega);
    for (const char* s : {"0,0", "1/2,1", "1,2"}) {
        for (long double r : {2.0L, 3.0L, 4.0L}) {
            CHECK(close(padic_short_mv(phase, omega, a, r, scale, sig(s)).value, 1, 1e-15L));
            const auto real = real_sparse_mv(phase, omega, a, r, scale, sig(s));
            CHECK(close(real.value, 1, 1e-12L));
            CHECK(real.method == MeanValueMethod::RealQuadrature);
        }
    }
}

TEST_CASE("zero coefficients") {
    const ScaleSpec scale(3, 1);
    const auto omega = IndexDomain::box(1, scale.N());
    const CoefficientVector zero(omega, std::vector<Complex>(3, Complex(0, 0)));
    CHECK(padic_short_mv(PhaseSystem::parabola(), omega, zero, 4, scale, sig("0,1")).value == 0);
    CHECK(real_sparse_mv(PhaseSystem::parabola(), omega, zero, 4, scale, sig("0,1")).value == 0);
    CHECK(real_sparse_mv(PhaseSystem::parabola(), omega, zero, 3, scale, sig("0,1")).value == 0);
}

TEST_CASE("real mean values match the closed-form sinc oracle") {
    struct Case {
        PhaseSystem phase;
        std::uint64_t p;
        unsigned K;
        const char* sigma;
    };
    const std::vector<Case> cases{
        {PhaseSystem::parabola(), 3, 1, "0,0"},
        {PhaseSystem::parabola(), 3, 2, "0,0"},
        {PhaseSystem::parabola(), 3, 2, "0,1"},
        {PhaseSystem::parabola(), 3, 2, "1/2,3/2"},
        {PhaseSystem::moment_curve(3), 3, 1, "0,0,1"},
        {PhaseSystem::moment_curve(3), 3, 2, "0,0,0"},
        {PhaseSystem::paraboloid(), 3, 1, "0,0,1"},
    };
    for (const auto& c : cases) {
        const ScaleSpec scale(c.p, c.K);
        const auto omega = IndexDomain::box(c.phase.dim(), scale.N());
        const auto dom = build_domain(scale, sig(c.sigma), c.phase.degrees());
        const auto a = random_complex_coefficients(omega, 9);
        const long double ref = oracle::sinc_real(c.phase, omega, values_of(a), 2, dom);
        const auto rep = real_sparse_mv(c.phase, omega, a, 4, scale, sig(c.sigma));
        CHECK(close(rep.value, ref, 1e-9L));
        // The two-level estimate is not smaller than the actual error (up to rounding).
        CHECK(std::fabs(rep.value - ref) <= rep.quadrature_error_bound + 1e-12L * std::fabs(ref));
    }
}

TEST_CASE("real equals p-adic at sigma = 0 where congruences are integer solutions") {
    for (const auto& phase : {PhaseSystem::parabola(), PhaseSystem::moment_curve(3)}) {
        const ScaleSpec scale(3, 1);
        const auto omega = IndexDomain::box(1, scale.N());
        const auto a = random_complex_coefficients(omega, 5);
        for (long double r : {2.0L, 4.0L}) {
            const auto sigma = LocalizationVector::zeros(phase.size());
            const long double padic = padic_short_mv(phase, omega, a, r, scale, sigma).value;
            const long double real = real_sparse_mv(phase, omega, a, r, scale, sigma).value;
            CHECK(close(real, padic, 1e-9L));
        }
    }
}

TEST_CASE("modulation") {
    const auto phase = PhaseSystem::parabola();
    const ScaleSpec scale(3, 1);
    const auto omega = IndexDomain::box(1, scale.N());
    const auto a = random_complex_coefficients(omega, 8);
    const auto same = modulate_coefficients(a, {Rational(0), Rational(0)}, phase);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same[i] == a[i]);
    const auto ones = CoefficientVector::ones(omega);
    const auto half = modulate_coefficients(ones, {Rational::parse("1/2"), Rational(0)}, phase);
    CHECK(half[1] == Complex(-1, 0));
    const auto mod = modulate_coefficients(a, {Rational::parse("3/7"), Rational::parse("-5/11")}, phase);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(std::abs(mod[i]) - std::abs(a[i])) <= 1e-18L);
    for (long double r : {2.0L, 3.0L, 4.0L}) CHECK(close(mod.norm_power(r), a.norm_power(r), 1e-15L));
    CHECK_THROWS_AS(modulate_coefficients(a, {Rational(0)}, phase), InvalidInput);
}

TEST_CASE("scaling covariance") {
    const auto phase = PhaseSystem::moment_curve(3);
    const ScaleSpec scale(2, 2);
    const auto omega = IndexDomain::box(1, scale.N());
    const auto a = random_complex_coefficients(omega, 10);
    const Complex c(0.6L, -1.3L);
    const auto ca = a.scaled(c);
    for (long double r : {2.0L, 3.0L, 4.0L}) {
        const long double f = std::pow(std::abs(c), r);
        const auto s = sig("0,1/2,1");
        CHECK(close(padic_short_mv(phase, omega, ca, r, scale, s).value,
                    f * padic_short_mv(phase, omega, a, r, scale, s).value, 1e-9L));
        CHECK(close(real_sparse_mv(phase, omega, ca, r, scale, s).value,
                    f * real_sparse_mv(phase, omega, a, r, scale, s).value, 1e-9L));
    }
}

TEST_CASE("results do not depend on the thread count") {
    const auto phase = PhaseSystem::moment_curve(3);
    const ScaleSpec scale(3, 1);
    const auto omega = IndexDomain::box(1, scale.N());
    const auto a = random_complex_coefficients(omega, 11);
    for (auto path : {KernelPath::Fourier, KernelPath::Correlation}) {
        const long double one = padic_short_mv(phase, omega, a, 4, scale, sig("0,0,0"), with_path(path, 1)).value;
        for (unsigned t : {2u, 4u}) {
            CHECK(padic_short_mv(phase, omega, a, 4, scale, sig("0,0,0"), with_path(path, t)).value == one);
        }
    }
    const long double r1 = real_sparse_mv(phase, omega, a, 3, scale, sig("0,0,1"), {}, with_path(KernelPath::Auto, 1)).value;
    CHECK(real_sparse_mv(phase, omega, a, 3, scale, sig("0,0,1"), {}, with_path(KernelPath::Auto, 3)).value == r1);
}

TEST_CASE("double precision agrees with the extended default") {
    const auto phase = PhaseSystem::parabola();
    const ScaleSpec scale(5, 2);
    const auto omega = IndexDomain::box(1, scale.N());
    const auto a = random_complex_coefficients(omega, 12);
    ExecConfig dbl;
    dbl.precision = Precision::Double;
    for (long double r : {3.0L, 4.0L}) {
        CHECK(close(padic_short_mv(phase, omega, a, r, scale, sig("0,1"), dbl).value,
                    padic_short_mv(phase, omega, a, r, scale, sig("0,1")).value, 1e-12L));
    }
}

TEST_CASE("budgets") {
    const auto phase = PhaseSystem::moment_curve(3);
    const ScaleSpec scale(3, 2);
    const auto omega = IndexDomain::box(1, scale.N());
    ExecConfig small;
    small.cell_budget = 1000;
    CHECK_THROWS_AS(ShortSumKernel(phase, omega, scale, LocalizationVector::zeros(3), small), ResourceError);
    ExecConfig tiny_work;
    tiny_work.work_budget = 10;
    CHECK_THROWS_AS(real_sparse_mv(phase, omega, CoefficientVector::ones(omega), 4, scale,
                                   LocalizationVector::zeros(3), {}, tiny_work),
                    ResourceError);
}

TEST_CASE("transfer check") {
    const auto phase = PhaseSystem::parabola();
    const ScaleSpec scale(3, 2);
    const auto point = IndexDomain::from_points({{2}}, scale.N());
    const auto rep1 = transfer_check(phase, point, CoefficientVector::ones(point), 4, scale, sig("0,1"));
    CHECK(rep1.pass);
    CHECK(close(rep1.real_value, 1, 1e-12L));
    CHECK(close(rep1.padic_sup, 1, 1e-12L));

    const auto omega = IndexDomain::box(1, scale.N());
    const auto zero = transfer_check(phase, omega, random_complex_coefficients(omega, 1), 4, scale, sig("0,0"));
    CHECK(zero.pass);

    for (std::uint64_t t = 0; t < 5; ++t) {
        const auto a = sample_coefficients(omega, SamplerKind::RandomPhases, 1, t);
        const auto rep = transfer_check(phase, omega, a, 4, scale, sig("0,1"));
        CHECK(rep.pass);
        CHECK(rep.real_value <= rep.padic_sup * (1 + 1e-6L) + rep.error_bound);
        CHECK(rep.argmax.size() == 2);
        TransferGrid uniform{TransferGrid::Kind::Uniform, 5};
        const auto urep = transfer_check(phase, omega, a, 4, scale, sig("0,1"), uniform);
        CHECK(urep.grid_points == 25);
        CHECK(close(urep.real_value, rep.real_value, 1e-15L));
    }
}

TEST_CASE("samplers") {
    const auto omega = IndexDomain::box(2, BigInt(5));
    const auto r1 = sample_coefficients(omega, SamplerKind::RandomPhases, 7, 3);
    const auto r2 = sample_coefficients(omega, SamplerKind::RandomPhases, 7, 3);
    const auto r3 = sample_coefficients(omega, SamplerKind::RandomPhases, 7, 4);
    bool differs = false;
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i] == r2[i]);
        CHECK(std::fabs(std::abs(r1[i]) - 1) < 1e-18L);
        differs = differs || r1[i] != r3[i];
    }
    CHECK(differs);
    const auto pt = sample_coefficients(omega, SamplerKind::SinglePoint, 7, 0);
    CHECK(pt.norm_power(2) == 1);
    const auto sp = sample_coefficients(omega, SamplerKind::RandomSparse, 7, 0);
    CHECK(sp.norm_power(2) >= 1);
    CHECK(parse_sampler("all-ones") == SamplerKind::AllOnes);
    CHECK_THROWS_AS(parse_sampler("gaussian"), InvalidInput);
}

TEST_CASE("restriction constant estimates") {
    const auto phase = PhaseSystem::parabola();
    const ScaleSpec scale(3, 2);
    const auto omega = IndexDomain::box(1, scale.N());
    const auto sigma0 = LocalizationVector::zeros(2);

    const auto r2 = estimate_restriction_constant(phase, omega, 2, scale, sigma0, Side::Padic);
    for (const auto& s : r2.samples) CHECK(close(s.ratio, 1, 1e-12L));
    CHECK(r2.samples.size() == 2 + 2 * 4);

    SamplerPlan ones{{SamplerKind::AllOnes}, 1, 1};
    const auto padic = estimate_restriction_constant(phase, omega, 4, scale, sigma0, Side::Padic, ones);
    CHECK(close(padic.estimate, 161.0L / 9, 1e-12L));
    const auto real = estimate_restriction_constant(phase, omega, 4, scale, sigma0, Side::Real, ones);
    CHECK(close(real.estimate, 17, 1e-9L));

    SamplerPlan point{{SamplerKind::SinglePoint}, 1, 1};
    const auto est = estimate_restriction_constant(phase, omega, 4, scale, sig("0,1"), Side::Real, point);
    CHECK(close(est.estimate, 1, 1e-12L));
    CHECK(est.best_sampler == SamplerKind::SinglePoint);
}

TEST_CASE("upper transference row") {
    const auto phase = PhaseSystem::parabola();
    const auto omega = IndexDomain::box(1, BigInt(9));
    const auto row = upper_transfer_row(phase, omega, 4, 20, 17);
    CHECK(row.eps == std::vector<long double>{1, 1});
    CHECK(row.factor == std::pow(2.0L, 10));
    CHECK(row.rhs == row.factor * 17);
    // x^3 - 2 components carry scale 3; eps uses the unnormalized values.
    const auto trace = expand_trace_phase(MinimalPolynomial::parse("-2,0,0"), 1);
    const auto box = IndexDomain::box(3, BigInt(3));
    const auto trow = upper_transfer_row(trace, box, 4, 1, 1);
    // (1,0) raw = 3 n0, max |3 n0 / 3| = 2; (1,1) raw = 6 n2 -> 4; (1,2) raw = 6 n1 -> 4.
    CHECK(trow.eps == std::vector<long double>{0.5L, 0.25L, 0.25L});
}

TEST_CASE("corollary ratio rows") {
    SamplerPlan plan{{SamplerKind::AllOnes, SamplerKind::SinglePoint}, 1, 1};
    const auto rows = corollary_ratio_experiment(3, {1, 2}, Rational(1), 4, plan);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        if (r.sample.sampler == SamplerKind::SinglePoint) CHECK(close(r.sample.ratio, 1, 1e-12L));
        const long double N = static_cast<long double>(r.scale.N().get_si());
        CHECK(close(r.envelope, N * N + N, 1e-15L));
    }
    const auto at0 = corollary_ratio_experiment(3, {2}, Rational(0), 4, SamplerPlan{{SamplerKind::AllOnes}, 1, 1});
    const auto direct = estimate_restriction_constant(PhaseSystem::parabola(), IndexDomain::box(1, BigInt(9)), 4,
                                                      ScaleSpec(3, 2), LocalizationVector::zeros(2), Side::Real,
                                                      SamplerPlan{{SamplerKind::AllOnes}, 1, 1});
    CHECK(at0[0].sample.ratio == direct.estimate);
    CHECK_THROWS_AS(corollary_ratio_experiment(3, {2}, Rational::parse("1/3"), 4, plan), InvalidInput);
}

TEST_CASE("index domains and coefficient files") {
    CHECK_THROWS_AS(IndexDomain::from_points({{1}, {1}}, BigInt(3)), InvalidInput);
    CHECK_THROWS_AS(IndexDomain::from_points({}, BigInt(3)), InvalidInput);
    const auto omega = IndexDomain::box(2, BigInt(3));
    CHECK(omega.size() == 9);
    CHECK(omega.points()[5] == std::vector<std::int64_t>{1, 2});
    std::istringstream in("# comment\nindex,re,im\n1-2,0.5,-1\n0-0,2,0\n");
    const auto a = CoefficientVector::read_csv(omega, in);
    CHECK(a[5] == Complex(0.5L, -1));
    CHECK(a[0] == Complex(2, 0));
    CHECK(a[1] == Complex(0, 0));
    std::istringstream bad("3-3,1,0\n");
    CHECK_THROWS_AS(CoefficientVector::read_csv(omega, bad), InvalidInput);
}
