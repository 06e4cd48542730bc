#pragma once

// Exact rationals, phases in Q/Z, and the complex values of e(q) = exp(2 pi i q).
//
// Phases are kept exact until the single transcendental evaluation in
// unit_root(); sums of unit-modulus terms go through the deterministic
// compensated reduction in parallel.hpp.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace padicmv {

using BigInt = mpz_class;
using Complex = std::complex<long double>;

/// Floating precision used for unit roots and accumulation.
enum class Precision {
    Double = 53,    ///< IEEE binary64
    Extended = 64,  ///< x87 double-extended (default)
};

Precision parse_precision(int bits);

/// Reduced fraction num/den with den >= 1.
class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
    explicit Rational(const BigInt& v) : q_(v) {}
    Rational(const BigInt& num, const BigInt& den);
    explicit Rational(const mpq_class& q);

    /// Parses "a" or "a/b" (optional sign, decimal digits only).
    static Rational parse(std::string_view text);

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_integer() const { return q_.get_den() == 1; }
    bool is_zero() const { return sgn(q_) == 0; }
    int sign() const { return sgn(q_); }

    /// floor(q) as an integer.
    BigInt floor() const;
    /// q - floor(q), in [0, 1).
    Rational frac() const;

    long double to_long_double() const;
    std::string str() const;

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    mpq_class q_{0};
};

/// base^exp for a nonnegative exponent; negative exponents give 1/base^|exp|.
Rational rational_pow(const Rational& base, long exp);
BigInt bigint_pow(const BigInt& base, unsigned long exp);

/// Comma-separated list of "a" or "a/b" entries. Throws InvalidInput naming
/// the 1-based position of the first malformed entry.
std::vector<Rational> parse_rational_list(std::string_view text);

/// An element of Q/Z, stored as its representative in [0, 1).
class PhaseFraction {
public:
    PhaseFraction() = default;
    explicit PhaseFraction(const Rational& q) : value_(q.frac()) {}

    const Rational& value() const { return value_; }

    PhaseFraction operator+(const PhaseFraction& o) const { return PhaseFraction(value_ + o.value_); }
    PhaseFraction operator-(const PhaseFraction& o) const { return PhaseFraction(value_ - o.value_); }
    PhaseFraction operator*(const BigInt& m) const { return PhaseFraction(value_ * Rational(m)); }

    friend bool operator==(const PhaseFraction&, const PhaseFraction&) = default;

private:
    Rational value_;
};

/// e(q) with relative error below 2^-60.
Complex unit_root(const PhaseFraction& q);

/// e(num/den) for 0 <= num < den < 2^62; bit-identical to
/// unit_root(PhaseFraction(num/den)).
Complex unit_root(std::uint64_t num, std::uint64_t den);

/// Sum with per-chunk Neumaier compensation and a fixed pairwise tree over
/// chunks of 1024 terms. The result does not depend on `threads`.
Complex compensated_sum(std::span<const Complex> values, unsigned threads = 1);
long double compensated_sum(std::span<const long double> values, unsigned threads = 1);

}  // namespace padicmv
