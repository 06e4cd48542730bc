#pragma once

// Number fields Q(alpha) given by a monic minimal polynomial, traces of powers
// of alpha, and the homogeneous phase systems obtained by expanding
// Tr[alpha^l * (n_0 + n_1 alpha + ... + n_{d-1} alpha^{d-1})^j].

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "padicmv/exact_arith.hpp"

namespace padicmv {

/// P(x) = x^d + c_{d-1} x^{d-1} + ... + c_0, stored as ascending c_0..c_{d-1}.
class MinimalPolynomial {
public:
    /// Validates d >= 1 and, for d > 1, that P has no rational root.
    explicit MinimalPolynomial(std::vector<Rational> coefficients);

    /// Text form "c_0,c_1,...,c_{d-1}"; "-2,0,0" is x^3 - 2.
    static MinimalPolynomial parse(std::string_view text);

    unsigned degree() const { return static_cast<unsigned>(coeffs_.size()); }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    bool has_integer_coefficients() const;

    /// Human-readable form, e.g. "x^3-2".
    std::string pretty() const;
    /// The comma-separated text form accepted by parse().
    std::string str() const;

private:
    std::vector<Rational> coeffs_;
};

/// Coordinates of an element of Q(alpha) in the power basis 1, alpha, ..., alpha^{d-1}.
struct FieldElement {
    std::vector<Rational> coords;

    static FieldElement zero(unsigned d) { return {std::vector<Rational>(d)}; }
    static FieldElement one(unsigned d);

    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

/// a * b reduced modulo P. Throws InvalidInput on length mismatch.
FieldElement field_multiply(const FieldElement& a, const FieldElement& b, const MinimalPolynomial& P);
FieldElement field_add(const FieldElement& a, const FieldElement& b);

/// Tr_{Q(alpha)/Q}(alpha^kappa) via Newton's identities.
Rational trace_power(const MinimalPolynomial& P, unsigned kappa);

/// Traces for kappa = 0..kappa_max, sharing one Newton recurrence.
std::vector<Rational> trace_powers(const MinimalPolynomial& P, unsigned kappa_max);

/// epsilon_{l,e1} for x^2+1: 0 if l+e1 odd, -1 if l+e1 = 2 mod 4, +1 if 0 mod 4.
int epsilon_table(unsigned ell, unsigned e1);

struct MonomialTerm {
    std::vector<unsigned> exponents;
    Rational coefficient;

    unsigned degree() const;
};

/// One homogeneous polynomial P_j. `scale` is the rational factor removed by
/// normalization: raw component = scale * (this component).
struct PhaseComponent {
    unsigned j = 1;    ///< label: the power j (equals the degree for trace systems)
    unsigned ell = 0;  ///< label: the trace shift l, or the index among equal-degree components
    unsigned degree = 1;
    std::vector<MonomialTerm> terms;
    Rational scale{1};

    bool has_integer_coefficients() const;
    /// Value at an integer point. Exact.
    Rational evaluate(std::span<const BigInt> n) const;
};

/// A vector (P_1, ..., P_k) of homogeneous polynomials in d variables.
class PhaseSystem {
public:
    PhaseSystem(unsigned dim, std::vector<PhaseComponent> components);

    /// (n, n^2, ..., n^k) in one variable.
    static PhaseSystem moment_curve(unsigned k);
    /// (n, n^2).
    static PhaseSystem parabola() { return moment_curve(2); }
    /// (x_1, x_2, x_1^2 + x_2^2).
    static PhaseSystem paraboloid();

    unsigned dim() const { return dim_; }
    std::size_t size() const { return components_.size(); }
    const std::vector<PhaseComponent>& components() const { return components_; }
    const PhaseComponent& operator[](std::size_t j) const { return components_[j]; }
    std::vector<unsigned> degrees() const;
    bool has_integer_coefficients() const;

    /// Clears denominators and divides each component by its positive integer
    /// content, accumulating the removed factor into the component scale.
    PhaseSystem normalized() const;

    /// CSV rows (j, ell, multiindex, coefficient, component_scale) with header.
    void write_csv(std::ostream& os) const;
    /// Inverse of write_csv. `#` comment lines are skipped.
    static PhaseSystem read_csv(std::istream& is);

private:
    unsigned dim_;
    std::vector<PhaseComponent> components_;
};

/// Component (j, l), 1 <= j <= k, 0 <= l < d, is
///   sum_{|e| = j} multinomial(j; e) Tr(alpha^{l + sum_i i e_i}) n^e,
/// normalized. Multiindices run lexicographically descending in e_0.
PhaseSystem expand_trace_phase(const MinimalPolynomial& P, unsigned k);
/// Same expansion without normalization (all scales 1).
PhaseSystem expand_trace_phase_raw(const MinimalPolynomial& P, unsigned k);

/// Exact component values; requires integer coefficients.
std::vector<BigInt> evaluate_phase(const PhaseSystem& phase, std::span<const BigInt> n);
std::vector<BigInt> evaluate_phase(const PhaseSystem& phase, std::span<const std::int64_t> n);

/// All multiindices of length d and total degree j, e_0 descending first.
std::vector<std::vector<unsigned>> multiindices(unsigned d, unsigned j);
BigInt multinomial(unsigned j, std::span<const unsigned> e);

}  // namespace padicmv
