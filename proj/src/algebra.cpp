#include "padicmv/algebra.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "padicmv/errors.hpp"

namespace padicmv {

namespace {

BigInt lcm_of_denominators(const std::vector<Rational>& values) {
    BigInt l = 1;
    for (const auto& v : values) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.den().get_mpz_t());
    }
    return l;
}

// Positive divisors of |n| (n != 0). Trial division to 10^6; a larger
// cofactor must be prime for the enumeration to be complete.
std::vector<BigInt> positive_divisors(const BigInt& n) {
    BigInt m = abs(n);
    std::vector<std::pair<BigInt, unsigned>> factors;
    for (unsigned long q = 2; q <= 1000000UL && BigInt(q) * q <= m; ++q) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), q)) {
            unsigned mult = 0;
            while (mpz_divisible_ui_p(m.get_mpz_t(), q)) {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), q);
                ++mult;
            }
            factors.emplace_back(BigInt(q), mult);
        }
    }
    if (m > 1) {
        const bool small = m <= BigInt("1000000000000");
        if (!small && mpz_probab_prime_p(m.get_mpz_t(), 40) == 0) {
            throw InvalidInput("constant term too large for the rational-root check");
        }
        factors.emplace_back(m, 1);
    }
    std::vector<BigInt> divs{1};
    for (const auto& [prime, mult] : factors) {
        const std::size_t base = divs.size();
        BigInt pk = 1;
        for (unsigned e = 1; e <= mult; ++e) {
            pk *= prime;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

// Integer coefficients A_0..A_d of L*P(x) with L the lcm of denominators.
std::vector<BigInt> integer_multiple(const std::vector<Rational>& c) {
    const BigInt l = lcm_of_denominators(c);
    std::vector<BigInt> a;
    a.reserve(c.size() + 1);
    for (const auto& ci : c) a.push_back(ci.num() * (l / ci.den()));
    a.push_back(l);
    return a;
}

bool has_rational_root(const std::vector<Rational>& c) {
    const auto a = integer_multiple(c);
    if (a.front() == 0) return true;
    const auto nums = positive_divisors(a.front());
    const auto dens = positive_divisors(a.back());
    const std::size_t d = a.size() - 1;
    for (const auto& v : dens) {
        for (const auto& u0 : nums) {
            for (int sign : {1, -1}) {
                const BigInt u = sign * u0;
                // sum_i A_i u^i v^{d-i}
                BigInt acc = 0;
                BigInt upow = 1;
                for (std::size_t i = 0; i <= d; ++i) {
                    acc += a[i] * upow * bigint_pow(v, static_cast<unsigned long>(d - i));
                    upow *= u;
                }
                if (acc == 0) return true;
            }
        }
    }
    return false;
}

}  // namespace

MinimalPolynomial::MinimalPolynomial(std::vector<Rational> coefficients)
    : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) throw InvalidInput("minimal polynomial needs degree >= 1");
    if (coeffs_.size() > 1 && has_rational_root(coeffs_)) {
        throw InvalidInput("minimal polynomial " + pretty() + " has a rational root (reducible)");
    }
}

MinimalPolynomial MinimalPolynomial::parse(std::string_view text) {
    return MinimalPolynomial(parse_rational_list(text));
}

bool MinimalPolynomial::has_integer_coefficients() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.is_integer(); });
}

std::string MinimalPolynomial::pretty() const {
    std::ostringstream os;
    const unsigned d = degree();
    os << "x";
    if (d > 1) os << "^" << d;
    for (unsigned i = d; i-- > 0;) {
        const Rational& c = coeffs_[i];
        if (c.is_zero()) continue;
        os << (c.sign() < 0 ? "-" : "+");
        const Rational mag = c.sign() < 0 ? -c : c;
        if (i == 0 || !(mag == Rational(1))) os << mag;
        if (i >= 1) os << "x";
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

std::string MinimalPolynomial::str() const {
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ',';
        out += coeffs_[i].str();
    }
    return out;
}

FieldElement FieldElement::one(unsigned d) {
    FieldElement e = zero(d);
    e.coords[0] = 1;
    return e;
}

FieldElement field_add(const FieldElement& a, const FieldElement& b) {
    if (a.coords.size() != b.coords.size()) throw InvalidInput("field elements of different degree");
    FieldElement out = a;
    for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += b.coords[i];
    return out;
}

FieldElement field_multiply(const FieldElement& a, const FieldElement& b, const MinimalPolynomial& P) {
    const std::size_t d = P.degree();
    if (a.coords.size() != d || b.coords.size() != d) {
        throw InvalidInput("field element length does not match the minimal polynomial degree");
    }
    std::vector<Rational> prod(2 * d - 1);
    for (std::size_t i = 0; i < d; ++i) {
        if (a.coords[i].is_zero()) continue;
        for (std::size_t j = 0; j < d; ++j) prod[i + j] += a.coords[i] * b.coords[j];
    }
    // x^d = -(c_{d-1} x^{d-1} + ... + c_0); reduce from the top.
    const auto& c = P.coefficients();
    for (std::size_t top = prod.size(); top-- > d;) {
        if (prod[top].is_zero()) continue;
        const Rational lead = prod[top];
        for (std::size_t i = 0; i < d; ++i) prod[top - d + i] -= lead * c[i];
        prod[top] = 0;
    }
    prod.resize(d);
    return {std::move(prod)};
}

std::vector<Rational> trace_powers(const MinimalPolynomial& P, unsigned kappa_max) {
    // Roots' power sums p_m with elementary-symmetric coefficients a_i = c_{d-i}:
    //   p_m + a_1 p_{m-1} + ... + a_{m-1} p_1 + m a_m = 0   (m <= d)
    //   p_m + a_1 p_{m-1} + ... + a_d p_{m-d}        = 0   (m >  d)
    const unsigned d = P.degree();
    const auto& c = P.coefficients();
    auto a = [&](unsigned i) -> const Rational& { return c[d - i]; };
    std::vector<Rational> p(kappa_max + 1);
    p[0] = Rational(static_cast<long>(d));
    for (unsigned m = 1; m <= kappa_max; ++m) {
        Rational acc;
        const unsigned top = std::min(m - 1, d);
        for (unsigned i = 1; i <= top; ++i) acc += a(i) * p[m - i];
        if (m <= d) acc += Rational(static_cast<long>(m)) * a(m);
        p[m] = -acc;
    }
    return p;
}

Rational trace_power(const MinimalPolynomial& P, unsigned kappa) { return trace_powers(P, kappa)[kappa]; }

int epsilon_table(unsigned ell, unsigned e1) {
    if (ell > 1) throw InvalidInput("epsilon_table: ell must be 0 or 1");
    const unsigned s = ell + e1;
    if (s % 2 == 1) return 0;
    return s % 4 == 2 ? -1 : 1;
}

unsigned MonomialTerm::degree() const {
    unsigned s = 0;
    for (unsigned e : exponents) s += e;
    return s;
}

bool PhaseComponent::has_integer_coefficients() const {
    return std::all_of(terms.begin(), terms.end(),
                       [](const MonomialTerm& t) { return t.coefficient.is_integer(); });
}

Rational PhaseComponent::evaluate(std::span<const BigInt> n) const {
    Rational acc;
    for (const auto& t : terms) {
        BigInt m = 1;
        for (std::size_t i = 0; i < t.exponents.size(); ++i) m *= bigint_pow(n[i], t.exponents[i]);
        acc += t.coefficient * Rational(m);
    }
    return acc;
}

PhaseSystem::PhaseSystem(unsigned dim, std::vector<PhaseComponent> components)
    : dim_(dim), components_(std::move(components)) {
    if (dim_ == 0) throw InvalidInput("phase system needs at least one variable");
    if (components_.empty()) throw InvalidInput("phase system needs at least one component");
    for (const auto& comp : components_) {
        if (comp.terms.empty()) throw InvalidInput("phase component with no terms");
        if (comp.degree == 0) throw InvalidInput("phase component of degree 0");
        for (const auto& t : comp.terms) {
            if (t.exponents.size() != dim_) throw InvalidInput("multiindex length differs from dimension");
            if (t.coefficient.is_zero()) throw InvalidInput("zero monomial coefficient");
            if (t.degree() != comp.degree) throw InvalidInput("phase component is not homogeneous");
        }
    }
}

PhaseSystem PhaseSystem::moment_curve(unsigned k) {
    if (k == 0) throw InvalidInput("moment curve needs k >= 1");
    std::vector<PhaseComponent> comps;
    for (unsigned j = 1; j <= k; ++j) {
        comps.push_back(PhaseComponent{j, 0, j, {MonomialTerm{{j}, Rational(1)}}, Rational(1)});
    }
    return PhaseSystem(1, std::move(comps));
}

PhaseSystem PhaseSystem::paraboloid() {
    std::vector<PhaseComponent> comps;
    comps.push_back(PhaseComponent{1, 0, 1, {MonomialTerm{{1, 0}, Rational(1)}}, Rational(1)});
    comps.push_back(PhaseComponent{1, 1, 1, {MonomialTerm{{0, 1}, Rational(1)}}, Rational(1)});
    comps.push_back(PhaseComponent{
        2, 0, 2, {MonomialTerm{{2, 0}, Rational(1)}, MonomialTerm{{0, 2}, Rational(1)}}, Rational(1)});
    return PhaseSystem(2, std::move(comps));
}

std::vector<unsigned> PhaseSystem::degrees() const {
    std::vector<unsigned> out;
    for (const auto& c : components_) out.push_back(c.degree);
    return out;
}

bool PhaseSystem::has_integer_coefficients() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const PhaseComponent& c) { return c.has_integer_coefficients(); });
}

PhaseSystem PhaseSystem::normalized() const {
    std::vector<PhaseComponent> out = components_;
    for (auto& comp : out) {
        std::vector<Rational> coeffs;
        for (const auto& t : comp.terms) coeffs.push_back(t.coefficient);
        const BigInt l = lcm_of_denominators(coeffs);
        BigInt g = 0;
        for (const auto& c : coeffs) {
            const BigInt v = c.num() * (l / c.den());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        }
        const Rational factor(g, l);
        for (auto& t : comp.terms) t.coefficient /= factor;
        comp.scale *= factor;
    }
    return PhaseSystem(dim_, std::move(out));
}

namespace {

std::string multiindex_str(const std::vector<unsigned>& e) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(e[i]);
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

void PhaseSystem::write_csv(std::ostream& os) const {
    os << "j,ell,multiindex,coefficient,component_scale\n";
    for (const auto& comp : components_) {
        for (const auto& t : comp.terms) {
            os << comp.j << ',' << comp.ell << ',' << multiindex_str(t.exponents) << ','
               << t.coefficient << ',' << comp.scale << '\n';
        }
    }
}

PhaseSystem PhaseSystem::read_csv(std::istream& is) {
    std::string line;
    bool header_seen = false;
    std::vector<PhaseComponent> comps;
    std::map<std::pair<unsigned, unsigned>, std::size_t> index;
    unsigned dim = 0;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("j,", 0) == 0) continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 5) throw InvalidInput("phase CSV line " + std::to_string(lineno) + ": expected 5 fields");
        try {
            const unsigned j = static_cast<unsigned>(std::stoul(f[0]));
            const unsigned ell = static_cast<unsigned>(std::stoul(f[1]));
            std::vector<unsigned> e;
            for (const auto& part : split(f[2], '-')) e.push_back(static_cast<unsigned>(std::stoul(part)));
            MonomialTerm term{e, Rational::parse(f[3])};
            const Rational scale = Rational::parse(f[4]);
            if (dim == 0) dim = static_cast<unsigned>(e.size());
            auto [it, inserted] = index.try_emplace({j, ell}, comps.size());
            if (inserted) comps.push_back(PhaseComponent{j, ell, term.degree(), {}, scale});
            comps[it->second].terms.push_back(std::move(term));
        } catch (const std::logic_error& e) {
            throw InvalidInput("phase CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return PhaseSystem(dim, std::move(comps));
}

std::vector<std::vector<unsigned>> multiindices(unsigned d, unsigned j) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur(d, 0);
    auto rec = [&](auto&& self, unsigned pos, unsigned remaining) -> void {
        if (pos + 1 == d) {
            cur[pos] = remaining;
            out.push_back(cur);
            return;
        }
        for (unsigned e = remaining + 1; e-- > 0;) {
            cur[pos] = e;
            self(self, pos + 1, remaining - e);
        }
    };
    if (d == 0) return out;
    rec(rec, 0, j);
    return out;
}

BigInt multinomial(unsigned j, std::span<const unsigned> e) {
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), j);
    for (unsigned ei : e) {
        BigInt f;
        mpz_fac_ui(f.get_mpz_t(), ei);
        out /= f;
    }
    return out;
}

PhaseSystem expand_trace_phase_raw(const MinimalPolynomial& P, unsigned k) {
    if (k == 0) throw InvalidInput("expand_trace_phase needs k >= 1");
    const unsigned d = P.degree();
    const auto traces = trace_powers(P, (d - 1) + (d - 1) * k);
    std::vector<PhaseComponent> comps;
    for (unsigned j = 1; j <= k; ++j) {
        const auto idx = multiindices(d, j);
        for (unsigned ell = 0; ell < d; ++ell) {
            PhaseComponent comp{j, ell, j, {}, Rational(1)};
            for (const auto& e : idx) {
                unsigned kappa = ell;
                for (unsigned i = 1; i < d; ++i) kappa += i * e[i];
                const Rational coeff = traces[kappa] * Rational(multinomial(j, e));
                if (!coeff.is_zero()) comp.terms.push_back(MonomialTerm{e, coeff});
            }
            comps.push_back(std::move(comp));
        }
    }
    return PhaseSystem(d, std::move(comps));
}

PhaseSystem expand_trace_phase(const MinimalPolynomial& P, unsigned k) {
    return expand_trace_phase_raw(P, k).normalized();
}

std::vector<BigInt> evaluate_phase(const PhaseSystem& phase, std::span<const BigInt> n) {
    if (n.size() != phase.dim()) throw InvalidInput("evaluate_phase: point dimension mismatch");
    if (!phase.has_integer_coefficients()) {
        throw InvalidInput("evaluate_phase: phase system has non-integer coefficients; normalize it first");
    }
    std::vector<BigInt> out;
    out.reserve(phase.size());
    for (const auto& comp : phase.components()) out.push_back(comp.evaluate(n).num());
    return out;
}

std::vector<BigInt> evaluate_phase(const PhaseSystem& phase, std::span<const std::int64_t> n) {
    std::vector<BigInt> big;
    big.reserve(n.size());
    for (auto v : n) big.emplace_back(static_cast<long>(v));
    return evaluate_phase(phase, big);
}

}  // namespace padicmv
