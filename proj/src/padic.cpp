#include "padicmv/padic.hpp"

#include <algorithm>
#include <string>

#include "padicmv/errors.hpp"

namespace padicmv {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(u128(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These twelve bases are a deterministic witness set below 3.3e24.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

ScaleSpec::ScaleSpec(std::uint64_t p, unsigned K) : p_(p), K_(K) {
    if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
    if (K == 0) throw InvalidInput("K must be positive");
    N_ = power(K);
}

std::vector<std::uint64_t> HenselRoot::digits() const {
    std::vector<std::uint64_t> out;
    BigInt x = xi;
    const BigInt bp(static_cast<unsigned long>(p));
    for (unsigned i = 0; i < K; ++i) {
        BigInt r;
        mpz_fdiv_qr(x.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), bp.get_mpz_t());
        out.push_back(mpz_get_ui(r.get_mpz_t()));
    }
    return out;
}

PhaseFraction chi_p(const Rational& q, std::uint64_t p) {
    if (!is_prime(p)) throw InvalidInput("chi_p: p is not prime");
    BigInt den = q.den();
    const BigInt bp(static_cast<unsigned long>(p));
    while (den > 1 && mpz_divisible_p(den.get_mpz_t(), bp.get_mpz_t())) den /= bp;
    if (den != 1) throw InvalidInput("chi_p: denominator of " + q.str() + " is not a power of " + std::to_string(p));
    return PhaseFraction(q);
}

HenselRoot hensel_sqrt_minus_one(std::uint64_t p, unsigned K) {
    if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
    if (p % 4 != 1) throw UnsupportedPrime("-1 is not a square mod " + std::to_string(p) + " (need p = 1 mod 4)");
    if (K == 0) throw InvalidInput("K must be positive");
    std::uint64_t base = 0;
    for (std::uint64_t x = 2; x + 2 <= p; ++x) {
        if (mul_mod(x, x, p) == p - 1) {
            base = x;
            break;
        }
    }
    // The two roots are x and p - x; the search from below finds the smaller.
    const BigInt bp(static_cast<unsigned long>(p));
    BigInt x(static_cast<unsigned long>(base));
    unsigned prec = 1;
    while (prec < K) {
        prec = std::min(2 * prec, K);
        const BigInt mod = bigint_pow(bp, prec);
        // x <- x - (x^2 + 1) / (2x) mod p^prec
        BigInt f = x * x + 1;
        BigInt inv;
        BigInt two_x = 2 * x;
        mpz_invert(inv.get_mpz_t(), two_x.get_mpz_t(), mod.get_mpz_t());
        x = x - f * inv;
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
    }
    return HenselRoot{p, K, x};
}

std::optional<long> valuation(const BigInt& n, std::uint64_t p) {
    if (n == 0) return std::nullopt;
    const BigInt bp(static_cast<unsigned long>(p));
    BigInt m = abs(n);
    return static_cast<long>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), bp.get_mpz_t()));
}

std::optional<long> valuation(const Rational& q, std::uint64_t p) {
    if (q.is_zero()) return std::nullopt;
    return *valuation(q.num(), p) - *valuation(q.den(), p);
}

}  // namespace padicmv
