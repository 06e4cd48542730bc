#include "padicmv/counterexample.hpp"

#include <cmath>

#include "padicmv/errors.hpp"
#include "padicmv/parallel.hpp"

namespace padicmv {

CounterexampleFamily make_family(std::uint64_t p, unsigned k, long double r) {
    if (!(r >= 2) || !std::isfinite(r)) throw InvalidInput("exponent r must be a finite real >= 2");
    ScaleSpec scale(p, k);
    HenselRoot xi = hensel_sqrt_minus_one(p, 2 * k);
    return CounterexampleFamily{std::move(scale), std::move(xi), r};
}

namespace {

long double scale_value(const CounterexampleFamily& fam) { return Rational(fam.scale.N()).to_long_double(); }

long double modulus_power(long double abs2, long double r) {
    if (abs2 == 0) return 0;
    const long double half = r / 2;
    if (half == std::floor(half) && half <= 64) {
        long double out = 1;
        for (int i = 0; i < static_cast<int>(half); ++i) out *= abs2;
        return out;
    }
    return std::exp(half * std::log(abs2));
}

}  // namespace

long double single_norm(const CounterexampleFamily& fam) { return std::pow(scale_value(fam), 6.0L / fam.r); }

long double sum_norm_power(const CounterexampleFamily& fam, unsigned threads) {
    const BigInt Nbig = fam.scale.N();
    if (Nbig > BigInt(1UL << 20)) throw ResourceError("counterexample: N = " + Nbig.get_str() + " is too large");
    const std::uint64_t N = Nbig.get_ui();
    const std::uint64_t M = N * N;
    if (N * M > 4'000'000'000ULL) {
        throw ResourceError("counterexample: N^3 = " + std::to_string(N * M) + " inner terms exceed the budget");
    }
    std::vector<Complex> table(M);
    for (std::uint64_t t = 0; t < M; ++t) table[t] = unit_root(t, M);
    const long double r = fam.r;
    const auto total = deterministic_reduce<NeumaierSum<long double>>(
        M, threads, [&](std::uint64_t begin, std::uint64_t end, NeumaierSum<long double>& acc) {
            for (std::uint64_t w = begin; w < end; ++w) {
                NeumaierComplexSum<long double> inner;
                std::uint64_t phase = 0;
                for (std::uint64_t n = 0; n < N; ++n) {
                    inner.add(table[phase]);
                    phase += w;
                    if (phase >= M) phase -= M;
                }
                acc.add(modulus_power(std::norm(inner.value()), r));
            }
        });
    const long double Nf = static_cast<long double>(N);
    return Nf * Nf * Nf * Nf * total.value();
}

long double sum_norm(const CounterexampleFamily& fam, unsigned threads) {
    return std::pow(sum_norm_power(fam, threads), 1.0L / fam.r);
}

long double decoupling_ratio(const CounterexampleFamily& fam, unsigned threads) {
    const long double N = scale_value(fam);
    return sum_norm(fam, threads) / std::pow(N, 0.5L + 6.0L / fam.r);
}

bool verify_paraboloid_membership(const CounterexampleFamily& fam, const BigInt& xi) {
    const BigInt N = fam.scale.N();
    const BigInt M = N * N;
    for (BigInt n = 0; n < N; ++n) {
        BigInt v = n * xi * n * xi + n * n;
        if (!mpz_divisible_p(v.get_mpz_t(), M.get_mpz_t())) return false;
    }
    return true;
}

bool verify_paraboloid_membership(const CounterexampleFamily& fam) {
    return verify_paraboloid_membership(fam, fam.xi.xi);
}

std::vector<CounterexampleRow> counterexample_table(std::uint64_t p, unsigned kmax,
                                                    const std::vector<long double>& rs, unsigned threads) {
    if (kmax == 0) throw InvalidInput("kmax must be positive");
    if (rs.empty()) throw InvalidInput("no exponents r given");
    std::vector<CounterexampleRow> rows;
    for (unsigned k = 1; k <= kmax; ++k) {
        for (long double r : rs) {
            const auto fam = make_family(p, k, r);
            if (!verify_paraboloid_membership(fam)) throw std::logic_error("Hensel lift failed the paraboloid check");
            CounterexampleRow row;
            row.p = p;
            row.k = k;
            row.N = fam.scale.N();
            row.r = r;
            row.single = single_norm(fam);
            row.sum = sum_norm(fam, threads);
            row.ratio = row.sum / std::pow(scale_value(fam), 0.5L + 6.0L / r);
            row.log_ratio = std::log(row.ratio);
            rows.push_back(row);
        }
    }
    return rows;
}

CsvTable counterexample_csv(const std::vector<CounterexampleRow>& rows) {
    CsvTable t;
    t.header = {"p", "k", "N", "r", "single_norm", "sum_norm", "ratio", "log_ratio"};
    for (const auto& r : rows) {
        t.rows.push_back({std::to_string(r.p), std::to_string(r.k), r.N.get_str(), format_real(r.r),
                          format_real(r.single), format_real(r.sum), format_real(r.ratio), format_real(r.log_ratio)});
    }
    return t;
}

}  // namespace padicmv
