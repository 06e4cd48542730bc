#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "padicmv/exact_arith.hpp"

namespace padicmv {

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// (p, K, N = p^K).
class ScaleSpec {
public:
    ScaleSpec(std::uint64_t p, unsigned K);

    std::uint64_t p() const { return p_; }
    unsigned K() const { return K_; }
    const BigInt& N() const { return N_; }
    /// p^e for e >= 0.
    BigInt power(unsigned e) const { return bigint_pow(BigInt(static_cast<unsigned long>(p_)), e); }

private:
    std::uint64_t p_;
    unsigned K_;
    BigInt N_;
};

/// xi in [0, p^K) with xi^2 + 1 = 0 mod p^K.
struct HenselRoot {
    std::uint64_t p;
    unsigned K;
    BigInt xi;

    /// Base-p digits b_0, b_1, ..., b_{K-1} of xi.
    std::vector<std::uint64_t> digits() const;
};

/// chi_p(q) = q mod 1 for q with p-power denominator. Throws InvalidInput
/// otherwise.
PhaseFraction chi_p(const Rational& q, std::uint64_t p);

/// The lift of the smaller square root of -1 mod p. Throws UnsupportedPrime
/// unless p = 1 mod 4.
HenselRoot hensel_sqrt_minus_one(std::uint64_t p, unsigned K);

/// p-adic valuation; std::nullopt stands for +infinity (q = 0).
std::optional<long> valuation(const Rational& q, std::uint64_t p);
std::optional<long> valuation(const BigInt& n, std::uint64_t p);

}  // namespace padicmv
