#pragma once

// Solution counts J_{s,k,d}(N; alpha) of the system
//     sum_{i<s} beta_i^t = sum_{i<s} gamma_i^t,   t = 1..k,
// with beta_i = sum_l n_{il} alpha^l and n_{il} in [0, N), over ordered tuples.
//
// J = sum over keys of multiplicity^2, the key of an s-tuple being the exact
// coordinates of its power sums. Rational P is handled by passing to the
// algebraic integer gamma = c alpha (c clears the denominators) and scaling
// every beta by c^{d-1}, which keeps all keys integral.

#include <cstdint>
#include <string>
#include <vector>

#include "padicmv/algebra.hpp"
#include "padicmv/csv.hpp"
#include "padicmv/exact_arith.hpp"

namespace padicmv {

inline constexpr std::uint64_t kDefaultKeyBudget = 100'000'000;

enum class CountMethod { Hash, Brute, Formal };
std::string to_string(CountMethod m);

struct SolutionCountRecord {
    unsigned d = 1;
    unsigned s = 1;
    unsigned k = 1;
    std::uint64_t N = 1;
    std::string minpoly;  ///< P in the "c_0,...,c_{d-1}" form; empty for Formal
    BigInt J;
    CountMethod method = CountMethod::Hash;
    double seconds = 0;  ///< wall time, 0 unless timing was requested
};

struct CountOptions {
    std::uint64_t key_budget = kDefaultKeyBudget;  ///< cap on N^{ds}
    unsigned threads = 1;
    bool timing = false;
    /// Above this many s-tuples the count runs in hash-partitioned passes.
    std::uint64_t pass_size = 10'000'000;
};

SolutionCountRecord count_solutions(const MinimalPolynomial& P, unsigned s, unsigned k, std::uint64_t N,
                                    const CountOptions& opt = {});

/// Pairwise comparison of all (N^{ds})^2 tuple pairs using FieldElement
/// arithmetic over Q; requires N^{2ds} <= 10^8.
SolutionCountRecord count_solutions_brute(const MinimalPolynomial& P, unsigned s, unsigned k, std::uint64_t N,
                                          const CountOptions& opt = {});

/// alpha treated as a formal variable: keys are the unreduced polynomial
/// power sums. This is one reading of the transcendental case.
SolutionCountRecord count_solutions_formal(unsigned d, unsigned s, unsigned k, std::uint64_t N,
                                           const CountOptions& opt = {});

struct GrowthPoint {
    std::uint64_t N = 0;
    BigInt J;
    long double log_N = 0;
    long double log_J = 0;
    long double residual = 0;
};

struct GrowthFit {
    unsigned d = 1, s = 1, k = 1;
    long double slope = 0;
    long double intercept = 0;
    long double envelope = 0;  ///< max(ds, 2ds - dk(k+1)/2)
    std::vector<GrowthPoint> points;
};

/// Least-squares slope of log J against log N. Ns must be strictly
/// increasing with at least three entries.
GrowthFit fit_growth(const MinimalPolynomial& P, unsigned s, unsigned k, const std::vector<std::uint64_t>& Ns,
                     const CountOptions& opt = {});

long double vinogradov_envelope(unsigned d, unsigned s, unsigned k);

/// Columns d, s, k, N, minpoly, J, method, seconds. The seconds field is
/// left empty when the record carries no timing.
CsvTable solution_count_table(const std::vector<SolutionCountRecord>& records);

struct LineFit {
    long double slope = 0;
    long double intercept = 0;
};
/// Ordinary least squares y = slope x + intercept.
LineFit fit_line(const std::vector<long double>& x, const std::vector<long double>& y);

}  // namespace padicmv
