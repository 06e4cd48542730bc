#pragma once

// Mean values of exponential sums  sum_{n in Omega} a_n e(x . P(n)).
//
// p-adic side: the short mean value over prod_j B(0, N^{-sigma_j}) in Q_p^k
// reduces to the finite sum
//     N^{sum_j (sigma_j - |e_j|)} sum_iota | sum_n a_n e(sum_j iota_j P_j(n) / M_j) |^r,
// M_j = N^{|e_j| - sigma_j}, with phases accumulated exactly in Q/Z.
//
// Real side: the integral N^{sum sigma} int_A |...|^r over the sparse domain A
// is the average over the centered cell R of the p-adic value at the
// modulated coefficients a_n(v) = a_n e(v . P(n)); the average is taken by a
// tensor Gauss rule on R.

#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padicmv/algebra.hpp"
#include "padicmv/csv.hpp"
#include "padicmv/domains.hpp"
#include "padicmv/exact_arith.hpp"
#include "padicmv/padic.hpp"
#include "padicmv/quadrature.hpp"

namespace padicmv {

/// How the p-adic finite sum is evaluated. Fourier sums over the iota tuples;
/// Correlation (even integer r = 2s only) groups ordered s-tuples of Omega by
/// the residues of sum_i P_j(n_i) mod M_j and returns sum_groups |G|^2, which
/// is the same number by Parseval on the residue group.
enum class KernelPath { Auto, Fourier, Correlation };

struct ExecConfig {
    unsigned threads = 1;
    Precision precision = Precision::Extended;
    std::uint64_t cell_budget = kDefaultCellBudget;          ///< iota tuples per p-adic evaluation
    std::uint64_t work_budget = 20'000'000'000ULL;           ///< quadrature nodes * terms per evaluation
    KernelPath path = KernelPath::Auto;
};

/// A finite set of integer points in Z^d, with the scale N it was built for.
class IndexDomain {
public:
    /// The half-open box [0, N)^d in lexicographic order.
    static IndexDomain box(unsigned d, const BigInt& N);
    /// Throws InvalidInput on an empty list, mixed dimensions or duplicates.
    static IndexDomain from_points(std::vector<std::vector<std::int64_t>> points, const BigInt& N);

    unsigned dim() const { return data_->dim; }
    std::size_t size() const { return data_->points.size(); }
    const std::vector<std::vector<std::int64_t>>& points() const { return data_->points; }
    const BigInt& bound() const { return data_->N; }
    std::optional<std::size_t> find(std::span<const std::int64_t> point) const;

private:
    struct Data {
        unsigned dim = 0;
        BigInt N;
        std::vector<std::vector<std::int64_t>> points;
        std::map<std::vector<std::int64_t>, std::size_t> index;
    };
    explicit IndexDomain(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    std::shared_ptr<const Data> data_;
};

/// Coefficients a_n aligned with the points of an IndexDomain (absent keys are 0).
class CoefficientVector {
public:
    CoefficientVector(IndexDomain domain, std::vector<Complex> values);

    static CoefficientVector ones(const IndexDomain& domain);
    /// Rows "n_1-n_2-...,re,im"; `#` lines and a header starting with "index" are skipped.
    static CoefficientVector read_csv(const IndexDomain& domain, std::istream& is);

    const IndexDomain& domain() const { return domain_; }
    std::span<const Complex> values() const { return values_; }
    const Complex& operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// sum_n |a_n|^r.
    long double norm_power(long double r) const;
    CoefficientVector scaled(const Complex& c) const;

private:
    IndexDomain domain_;
    std::vector<Complex> values_;
};

/// a_n(v) = a_n e(sum_j v_j P_j(n)) with exact phases in Q/Z.
CoefficientVector modulate_coefficients(const CoefficientVector& a, const std::vector<Rational>& v,
                                        const PhaseSystem& phase);

enum class MeanValueMethod { PadicExact, RealQuadrature };
std::string to_string(MeanValueMethod m);

struct MeanValueReport {
    long double value = 0;
    long double r = 2;
    MeanValueMethod method = MeanValueMethod::PadicExact;
    long double quadrature_error_bound = 0;
    std::string normalization = "includes N^{sum sigma_j}";
    std::uint64_t cells = 0;             ///< iota tuples summed per evaluation
    std::uint64_t quadrature_nodes = 0;  ///< nodes of the reported (fine) rule
};

/// Precomputed exact phase residues for one (P, Omega, N, sigma). Evaluating
/// the p-adic sum for many coefficient vectors reuses it.
class ShortSumKernel {
public:
    ShortSumKernel(const PhaseSystem& phase, const IndexDomain& omega, const ScaleSpec& scale,
                   const LocalizationVector& sigma, const ExecConfig& exec = {});

    const SparseDomain& domain() const { return domain_; }
    std::uint64_t cells() const { return cells_; }
    std::size_t points() const { return exact_phase_.size(); }

    /// N^{sum (sigma - |e|)} sum_iota |sum_n b_n e(iota . P(n) / M)|^r.
    long double evaluate(std::span<const Complex> b, long double r) const;

    /// Modulation by a real vector v: b_n = a_n e(v . P(n)) (floating phase).
    void modulate(std::span<const Complex> a, std::span<const long double> v, std::vector<Complex>& out) const;

    /// max_n |P_j(n)| per component, as floating values.
    const std::vector<long double>& phase_bounds() const { return bounds_; }

    /// The path evaluate() takes for exponent r.
    KernelPath path_for(long double r) const;
    /// Terms summed by one evaluation at exponent r (for work budgets).
    long double cost(long double r) const;

private:
    struct GroupCache;
    struct Groups {
        unsigned s = 0;
        std::vector<std::uint32_t> tuples;  ///< s point indices per tuple, grouped
        std::vector<std::size_t> offsets;   ///< group g holds tuples [offsets[g], offsets[g+1])
    };

    template <class Real>
    long double evaluate_impl(std::span<const Complex> b, long double r) const;
    template <class Real>
    long double evaluate_correlation(std::span<const Complex> b, unsigned s) const;
    std::shared_ptr<const Groups> groups(unsigned s) const;

    SparseDomain domain_;
    ExecConfig exec_;
    std::uint64_t cells_ = 0;
    std::uint64_t denom_ = 1;                     ///< common denominator D = max_j M_j
    std::vector<std::uint64_t> counts_;           ///< M_j
    std::vector<std::vector<std::uint64_t>> step_;  ///< step_[j][n] = (P_j(n) mod M_j) * D / M_j
    std::vector<std::vector<long double>> exact_phase_;  ///< P_j(n) as floating values
    std::vector<long double> bounds_;
    long double normalization_ = 1;               ///< N^{sum (sigma - |e|)} = 1 / cells
    std::shared_ptr<const std::vector<Complex>> table_;  ///< e(t / D), t < D, when D is small
    std::vector<std::vector<std::uint64_t>> residue_;    ///< residue_[n][j] = P_j(n) mod M_j
    std::shared_ptr<GroupCache> cache_;
};

MeanValueReport padic_short_mv(const PhaseSystem& phase, const IndexDomain& omega, const CoefficientVector& a,
                               long double r, const ScaleSpec& scale, const LocalizationVector& sigma,
                               const ExecConfig& exec = {});

MeanValueReport real_sparse_mv(const PhaseSystem& phase, const IndexDomain& omega, const CoefficientVector& a,
                               long double r, const ScaleSpec& scale, const LocalizationVector& sigma,
                               const QuadratureConfig& quad = {}, const ExecConfig& exec = {});

/// Modulation grid for transfer_check.
struct TransferGrid {
    enum class Kind { QuadratureNodes, Uniform } kind = Kind::QuadratureNodes;
    unsigned points_per_axis = 4;  ///< for Uniform: cell-centered lattice in R
};

struct TransferReport {
    long double real_value = 0;
    long double padic_sup = 0;
    long double error_bound = 0;
    long double tolerance = 1e-6L;
    std::uint64_t grid_points = 0;
    std::vector<long double> argmax;  ///< modulation v attaining padic_sup
    bool pass = false;
};

/// Checks real <= (1 + tol) max_{v in grid} padic(a(v)) + quadrature error.
TransferReport transfer_check(const PhaseSystem& phase, const IndexDomain& omega, const CoefficientVector& a,
                              long double r, const ScaleSpec& scale, const LocalizationVector& sigma,
                              const TransferGrid& grid = {}, long double tol = 1e-6L,
                              const QuadratureConfig& quad = {}, const ExecConfig& exec = {});

// ---------------------------------------------------------------------------
// Sampled lower bounds for the restriction constants.

enum class SamplerKind { AllOnes, SinglePoint, RandomPhases, RandomSparse };
std::string to_string(SamplerKind s);
SamplerKind parse_sampler(const std::string& name);

/// Draw `trial` of a sampler; pseudo-random draws depend only on (seed, trial).
CoefficientVector sample_coefficients(const IndexDomain& omega, SamplerKind kind, std::uint64_t seed,
                                      std::uint64_t trial);
/// Complex coefficients with random moduli in [1/2, 3/2) and random phases.
CoefficientVector random_complex_coefficients(const IndexDomain& omega, std::uint64_t seed);

enum class Side { Padic, Real };
std::string to_string(Side s);

struct SampleResult {
    SamplerKind sampler;
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    long double value = 0;
    long double denominator = 0;
    long double ratio = 0;
    long double error_bound = 0;
};

struct RestrictionEstimate {
    Side side = Side::Padic;
    long double estimate = 0;  ///< max ratio: a lower bound for the optimal constant
    SamplerKind best_sampler = SamplerKind::SinglePoint;
    std::uint64_t best_trial = 0;
    std::vector<SampleResult> samples;
};

struct SamplerPlan {
    std::vector<SamplerKind> samplers{SamplerKind::AllOnes, SamplerKind::SinglePoint, SamplerKind::RandomPhases,
                                      SamplerKind::RandomSparse};
    unsigned trials = 4;  ///< draws per pseudo-random sampler (deterministic samplers draw once)
    std::uint64_t seed = 1;
};

RestrictionEstimate estimate_restriction_constant(const PhaseSystem& phase, const IndexDomain& omega, long double r,
                                                  const ScaleSpec& scale, const LocalizationVector& sigma, Side side,
                                                  const SamplerPlan& plan = {}, const QuadratureConfig& quad = {},
                                                  const ExecConfig& exec = {});

/// The second transference bound, tabulated from sampled estimates. Only the
/// direction real <= padic is falsifiable with lower bounds; this row reports
/// both sides of  D^p <= 2^{(r+1)k} / prod eps_j * D^inf  without asserting it.
struct UpperTransferRow {
    std::vector<long double> eps;  ///< eps_j with the normalization scale reapplied
    long double factor = 0;        ///< 2^{(r+1)k} / prod eps_j
    long double padic_estimate = 0;
    long double real_estimate = 0;
    long double rhs = 0;  ///< factor * real_estimate
};
UpperTransferRow upper_transfer_row(const PhaseSystem& phase, const IndexDomain& omega, long double r,
                                    long double padic_estimate, long double real_estimate);

/// Parabola (n, n^2) on [0, N), sigma = (0, s), for N = p^K over `Ks`:
/// measured real-side ratios against N^{r/2} + N^{r-4+s}. Report only.
struct CorollaryRow {
    ScaleSpec scale;
    SampleResult sample;
    long double envelope = 0;
};
std::vector<CorollaryRow> corollary_ratio_experiment(std::uint64_t p, const std::vector<unsigned>& Ks,
                                                     const Rational& sigma, long double r, const SamplerPlan& plan,
                                                     const QuadratureConfig& quad = {}, const ExecConfig& exec = {});

}  // namespace padicmv
