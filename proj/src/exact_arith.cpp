#include "padicmv/exact_arith.hpp"

#include <cctype>
#include <numbers>
#include <ostream>
#include <sstream>

#include "padicmv/errors.hpp"
#include "padicmv/parallel.hpp"

namespace padicmv {

Precision parse_precision(int bits) {
    switch (bits) {
        case 53: return Precision::Double;
        case 64: return Precision::Extended;
        default:
            throw InvalidInput("unsupported precision " + std::to_string(bits) +
                               " (supported: 53, 64)");
    }
}

Rational::Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw InvalidInput("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

namespace {

bool parse_integer(std::string_view s, BigInt& out) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (std::size_t j = i; j < s.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
    }
    std::string digits(s.substr(s[0] == '+' ? 1 : 0));
    return out.set_str(digits, 10) == 0;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    text = trim(text);
    const auto slash = text.find('/');
    BigInt num;
    BigInt den = 1;
    if (slash == std::string_view::npos) {
        if (!parse_integer(text, num)) {
            throw InvalidInput("malformed rational '" + std::string(text) + "'");
        }
    } else {
        if (!parse_integer(text.substr(0, slash), num) ||
            !parse_integer(text.substr(slash + 1), den)) {
            throw InvalidInput("malformed rational '" + std::string(text) + "'");
        }
        if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(num, den);
}

BigInt Rational::floor() const {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return out;
}

Rational Rational::frac() const {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return Rational(r, q_.get_den());
}

namespace {

// num/den to long double with 63 significant bits (truncated), for operands
// of any size.
long double ratio_to_long_double(const BigInt& num, const BigInt& den) {
    if (num == 0) return 0.0L;
    BigInt a = abs(num);
    const long shift = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) -
                       static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2)) + 66;
    BigInt q;
    if (shift >= 0) {
        mpz_mul_2exp(a.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(shift));
        mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), den.get_mpz_t());
    } else {
        BigInt d = den;
        mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(-shift));
        mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    }
    long extra = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - 63;
    if (extra < 0) extra = 0;
    mpz_tdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(extra));
    const long double mant = static_cast<long double>(mpz_get_ui(q.get_mpz_t()));
    const long double mag = std::ldexp(mant, static_cast<int>(extra - shift));
    return num < 0 ? -mag : mag;
}

}  // namespace

long double Rational::to_long_double() const { return ratio_to_long_double(q_.get_num(), q_.get_den()); }

std::string Rational::str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational& Rational::operator+=(const Rational& o) {
    q_ += o.q_;
    return *this;
}
Rational& Rational::operator-=(const Rational& o) {
    q_ -= o.q_;
    return *this;
}
Rational& Rational::operator*=(const Rational& o) {
    q_ *= o.q_;
    return *this;
}
Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw InvalidInput("division by zero rational");
    q_ /= o.q_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

BigInt bigint_pow(const BigInt& base, unsigned long exp) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
    return out;
}

Rational rational_pow(const Rational& base, long exp) {
    const unsigned long e = static_cast<unsigned long>(exp < 0 ? -exp : exp);
    Rational p(bigint_pow(base.num(), e), bigint_pow(base.den(), e));
    if (exp < 0) return Rational(1) / p;
    return p;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
    std::vector<Rational> out;
    std::size_t pos = 0;
    std::size_t index = 1;
    while (true) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        try {
            out.push_back(Rational::parse(item));
        } catch (const InvalidInput& e) {
            throw InvalidInput("entry " + std::to_string(index) + ": " + e.what());
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
        ++index;
    }
    return out;
}

namespace {

// e(f) for |f| <= 1/8 rotated by i^quarter.
Complex rotate_quarter(long double f, unsigned quarter) {
    constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    const long double c = std::cos(two_pi * f);
    const long double s = std::sin(two_pi * f);
    switch (quarter & 3u) {
        case 0: return {c, s};
        case 1: return {-s, c};
        case 2: return {-c, -s};
        default: return {s, -c};
    }
}

}  // namespace

// t = num/den in [0,1). Write t = q/4 + f with q = round(4t) and |f| <= 1/8, so
// the transcendental evaluation only sees small arguments and the quarter
// turns are exact. f is rounded correctly from its exact value, which makes
// the result depend only on t and not on how the fraction is written.
Complex unit_root(std::uint64_t num, std::uint64_t den) {
    using u128 = unsigned __int128;
    const std::uint64_t q = static_cast<std::uint64_t>((u128(8) * num + den) / (u128(2) * den));
    const __int128 fnum = __int128(4) * num - __int128(q) * den;
    const long double f = static_cast<long double>(static_cast<std::int64_t>(fnum)) /
                          (4.0L * static_cast<long double>(den));
    return rotate_quarter(f, static_cast<unsigned>(q));
}

Complex unit_root(const PhaseFraction& phase) {
    const Rational& t = phase.value();
    const BigInt num = t.num();
    const BigInt den = t.den();
    if (mpz_sizeinbase(den.get_mpz_t(), 2) <= 62) {
        return unit_root(static_cast<std::uint64_t>(mpz_get_ui(num.get_mpz_t())),
                         static_cast<std::uint64_t>(mpz_get_ui(den.get_mpz_t())));
    }
    BigInt q = (8 * num + den) / (2 * den);
    const BigInt fnum = 4 * num - q * den;
    const long double f = ratio_to_long_double(fnum, BigInt(4 * den));
    return rotate_quarter(f, static_cast<unsigned>(mpz_get_ui(q.get_mpz_t())));
}

Complex compensated_sum(std::span<const Complex> values, unsigned threads) {
    auto acc = deterministic_reduce<NeumaierComplexSum<long double>>(
        values.size(), threads, [&](std::uint64_t b, std::uint64_t e, auto& a) {
            for (std::uint64_t i = b; i < e; ++i) a.add(values[i]);
        });
    return acc.value();
}

long double compensated_sum(std::span<const long double> values, unsigned threads) {
    auto acc = deterministic_reduce<NeumaierSum<long double>>(
        values.size(), threads, [&](std::uint64_t b, std::uint64_t e, auto& a) {
            for (std::uint64_t i = b; i < e; ++i) a.add(values[i]);
        });
    return acc.value();
}

}  // namespace padicmv
