#include "padicmv/meanvalue.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

#include "padicmv/errors.hpp"
#include "padicmv/parallel.hpp"
#include "padicmv/rng.hpp"

namespace padicmv {

// ---------------------------------------------------------------------------
// IndexDomain / CoefficientVector

IndexDomain IndexDomain::box(unsigned d, const BigInt& N) {
    if (d == 0) throw InvalidInput("index domain dimension must be positive");
    if (N < 1) throw InvalidInput("index domain bound must be positive");
    const BigInt total = bigint_pow(N, d);
    if (total > BigInt(100'000'000UL)) throw ResourceError("index box [0,N)^d has " + total.get_str() + " points");
    const auto n = static_cast<std::int64_t>(N.get_si());
    std::vector<std::vector<std::int64_t>> pts;
    std::vector<std::int64_t> cur(d, 0);
    while (true) {
        pts.push_back(cur);
        std::size_t j = d;
        bool done = true;
        while (j-- > 0) {
            if (++cur[j] < n) {
                done = false;
                break;
            }
            cur[j] = 0;
        }
        if (done) break;
    }
    return from_points(std::move(pts), N);
}

IndexDomain IndexDomain::from_points(std::vector<std::vector<std::int64_t>> points, const BigInt& N) {
    if (points.empty()) throw InvalidInput("index domain must be nonempty");
    auto data = std::make_shared<Data>();
    data->dim = static_cast<unsigned>(points.front().size());
    if (data->dim == 0) throw InvalidInput("index points must have positive dimension");
    data->N = N;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != data->dim) throw InvalidInput("index points of mixed dimension");
        if (!data->index.emplace(points[i], i).second) throw InvalidInput("duplicate index point");
    }
    data->points = std::move(points);
    return IndexDomain(std::move(data));
}

std::optional<std::size_t> IndexDomain::find(std::span<const std::int64_t> point) const {
    auto it = data_->index.find(std::vector<std::int64_t>(point.begin(), point.end()));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
}

CoefficientVector::CoefficientVector(IndexDomain domain, std::vector<Complex> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.size()) throw InvalidInput("coefficient vector length differs from |Omega|");
    for (const auto& z : values_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidInput("non-finite coefficient");
    }
}

CoefficientVector CoefficientVector::ones(const IndexDomain& domain) {
    return CoefficientVector(domain, std::vector<Complex>(domain.size(), Complex(1, 0)));
}

CoefficientVector CoefficientVector::read_csv(const IndexDomain& domain, std::istream& is) {
    std::vector<Complex> values(domain.size(), Complex(0, 0));
    std::vector<bool> seen(domain.size(), false);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line.rfind("index", 0) == 0) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 3) throw InvalidInput("coefficient CSV line " + std::to_string(lineno) + ": expected 3 fields");
        std::vector<std::int64_t> pt;
        try {
            std::size_t pos = 0;
            const std::string& key = f[0];
            while (pos <= key.size()) {
                const auto dash = key.find('-', pos);
                const std::string part = key.substr(pos, dash == std::string::npos ? std::string::npos : dash - pos);
                pt.push_back(std::stoll(part));
                if (dash == std::string::npos) break;
                pos = dash + 1;
            }
            const auto idx = domain.find(pt);
            if (!idx) throw InvalidInput("index " + key + " is not in Omega");
            if (seen[*idx]) throw InvalidInput("index " + key + " listed twice");
            seen[*idx] = true;
            values[*idx] = Complex(std::stold(f[1]), std::stold(f[2]));
        } catch (const InvalidInput& e) {
            throw InvalidInput("coefficient CSV line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::logic_error&) {
            throw InvalidInput("coefficient CSV line " + std::to_string(lineno) + ": malformed number");
        }
    }
    return CoefficientVector(domain, std::move(values));
}

namespace {

// |z|^r from |z|^2; exact repeated squaring for even integer r.
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

long double CoefficientVector::norm_power(long double r) const {
    NeumaierSum<long double> acc;
    for (const auto& z : values_) acc.add(modulus_power(std::norm(z), r));
    return acc.value();
}

CoefficientVector CoefficientVector::scaled(const Complex& c) const {
    std::vector<Complex> out = values_;
    for (auto& z : out) z *= c;
    return CoefficientVector(domain_, std::move(out));
}

CoefficientVector modulate_coefficients(const CoefficientVector& a, const std::vector<Rational>& v,
                                        const PhaseSystem& phase) {
    if (v.size() != phase.size()) throw InvalidInput("modulation vector length differs from the number of components");
    const auto& pts = a.domain().points();
    std::vector<Complex> out(a.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto values = evaluate_phase(phase, pts[i]);
        Rational t;
        for (std::size_t j = 0; j < v.size(); ++j) t += v[j] * Rational(values[j]);
        out[i] = a[i] * unit_root(PhaseFraction(t));
    }
    return CoefficientVector(a.domain(), std::move(out));
}

std::string to_string(MeanValueMethod m) {
    return m == MeanValueMethod::PadicExact ? "padic-exact" : "real-quadrature";
}

// ---------------------------------------------------------------------------
// ShortSumKernel

namespace {

constexpr std::uint64_t kMaxTable = std::uint64_t{1} << 20;

}  // namespace

struct ShortSumKernel::GroupCache {
    std::mutex mutex;
    std::map<unsigned, std::shared_ptr<const Groups>> by_s;
};

ShortSumKernel::ShortSumKernel(const PhaseSystem& phase, const IndexDomain& omega, const ScaleSpec& scale,
                               const LocalizationVector& sigma, const ExecConfig& exec)
    : domain_(build_domain(scale, sigma, phase.degrees())), exec_(exec) {
    if (omega.dim() != phase.dim()) throw InvalidInput("Omega dimension differs from the phase dimension");
    if (!phase.has_integer_coefficients()) {
        throw InvalidInput("phase system must have integer coefficients (normalize it first)");
    }
    const BigInt total = domain_.total_cells();
    if (total > BigInt(static_cast<unsigned long>(exec.cell_budget))) {
        throw ResourceError("p-adic sum has " + total.get_str() + " cells, over the budget of " +
                            std::to_string(exec.cell_budget));
    }
    cells_ = total.get_ui();
    const std::size_t k = phase.size();
    for (const auto& c : domain_.cell_counts()) counts_.push_back(c.get_ui());
    denom_ = *std::max_element(counts_.begin(), counts_.end());
    step_.assign(k, std::vector<std::uint64_t>(omega.size()));
    exact_phase_.assign(omega.size(), std::vector<long double>(k));
    residue_.assign(omega.size(), std::vector<std::uint64_t>(k));
    bounds_.assign(k, 0);
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const auto values = evaluate_phase(phase, omega.points()[i]);
        for (std::size_t j = 0; j < k; ++j) {
            const BigInt M(static_cast<unsigned long>(counts_[j]));
            BigInt res;
            mpz_fdiv_r(res.get_mpz_t(), values[j].get_mpz_t(), M.get_mpz_t());
            // M_j divides D since both are powers of p.
            residue_[i][j] = res.get_ui();
            step_[j][i] = res.get_ui() * (denom_ / counts_[j]);
            exact_phase_[i][j] = Rational(values[j]).to_long_double();
            bounds_[j] = std::max(bounds_[j], std::fabs(exact_phase_[i][j]));
        }
    }
    normalization_ = 1.0L / static_cast<long double>(cells_);
    if (denom_ <= kMaxTable) {
        auto table = std::make_shared<std::vector<Complex>>(denom_);
        for (std::uint64_t t = 0; t < denom_; ++t) (*table)[t] = unit_root(t, denom_);
        table_ = std::move(table);
    }
    cache_ = std::make_shared<GroupCache>();
}

namespace {

constexpr std::uint64_t kMaxCorrelationTuples = 10'000'000;

// r = 2s with 1 <= s <= 32, else 0.
unsigned even_half(long double r) {
    const long double half = r / 2;
    if (half != std::floor(half) || half < 1 || half > 32) return 0;
    return static_cast<unsigned>(half);
}

long double tuple_count(std::size_t points, unsigned s) { return std::pow(static_cast<long double>(points), s); }

}  // namespace

KernelPath ShortSumKernel::path_for(long double r) const {
    const unsigned s = even_half(r);
    if (exec_.path == KernelPath::Fourier) return KernelPath::Fourier;
    if (exec_.path == KernelPath::Correlation) {
        if (s == 0) throw InvalidInput("the correlation path needs an even integer exponent r <= 64");
        if (tuple_count(points(), s) > kMaxCorrelationTuples) {
            throw ResourceError("correlation path needs |Omega|^(r/2) <= 10^7 tuples");
        }
        return KernelPath::Correlation;
    }
    if (s == 0) return KernelPath::Fourier;
    const long double tuples = tuple_count(points(), s);
    if (tuples > kMaxCorrelationTuples) return KernelPath::Fourier;
    return tuples * s < static_cast<long double>(cells_) * static_cast<long double>(points()) ? KernelPath::Correlation
                                                                                                : KernelPath::Fourier;
}

long double ShortSumKernel::cost(long double r) const {
    if (path_for(r) == KernelPath::Correlation) return tuple_count(points(), even_half(r)) * even_half(r);
    return static_cast<long double>(cells_) * static_cast<long double>(points());
}

std::shared_ptr<const ShortSumKernel::Groups> ShortSumKernel::groups(unsigned s) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (auto it = cache_->by_s.find(s); it != cache_->by_s.end()) return it->second;
    const std::size_t npts = points();
    const std::size_t k = counts_.size();
    const auto count = static_cast<std::uint64_t>(tuple_count(npts, s));
    // keys[t * k + j] = sum_i P_j(n_i) mod M_j for tuple t (first index slowest).
    std::vector<std::uint64_t> keys(count * k, 0);
    for (std::uint64_t t = 0; t < count; ++t) {
        std::uint64_t rest = t;
        for (unsigned i = 0; i < s; ++i) {
            const std::size_t n = rest % npts;
            rest /= npts;
            for (std::size_t j = 0; j < k; ++j) {
                std::uint64_t& x = keys[t * k + j];
                x += residue_[n][j];
                if (x >= counts_[j]) x -= counts_[j];
            }
        }
    }
    std::vector<std::uint64_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
        return std::lexicographical_compare(&keys[a * k], &keys[a * k] + k, &keys[b * k], &keys[b * k] + k);
    });
    auto g = std::make_shared<Groups>();
    g->s = s;
    g->tuples.reserve(count * s);
    for (std::uint64_t pos = 0; pos < count; ++pos) {
        const std::uint64_t t = order[pos];
        if (pos == 0 || !std::equal(&keys[t * k], &keys[t * k] + k, &keys[order[pos - 1] * k])) {
            g->offsets.push_back(pos);
        }
        std::uint64_t rest = t;
        for (unsigned i = 0; i < s; ++i) {
            g->tuples.push_back(static_cast<std::uint32_t>(rest % npts));
            rest /= npts;
        }
    }
    g->offsets.push_back(count);
    cache_->by_s.emplace(s, g);
    return g;
}

template <class Real>
long double ShortSumKernel::evaluate_correlation(std::span<const Complex> b, unsigned s) const {
    const auto g = groups(s);
    std::vector<std::complex<Real>> bb(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) bb[i] = {static_cast<Real>(b[i].real()), static_cast<Real>(b[i].imag())};
    const std::uint64_t ngroups = g->offsets.size() - 1;
    auto fill = [&](std::uint64_t begin, std::uint64_t end, NeumaierSum<long double>& acc) {
        for (std::uint64_t q = begin; q < end; ++q) {
            std::complex<Real> G(0, 0);
            for (std::size_t t = g->offsets[q]; t < g->offsets[q + 1]; ++t) {
                const std::uint32_t* idx = &g->tuples[t * s];
                std::complex<Real> prod = bb[idx[0]];
                for (unsigned i = 1; i < s; ++i) prod *= bb[idx[i]];
                G += prod;
            }
            acc.add(static_cast<long double>(std::norm(G)));
        }
    };
    return deterministic_reduce<NeumaierSum<long double>>(ngroups, exec_.threads, fill).value();
}

void ShortSumKernel::modulate(std::span<const Complex> a, std::span<const long double> v,
                              std::vector<Complex>& out) const {
    out.resize(a.size());
    constexpr long double two_pi = 6.283185307179586476925286766559005768L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        long double t = 0;
        for (std::size_t j = 0; j < v.size(); ++j) t += v[j] * exact_phase_[i][j];
        t -= std::floor(t);
        out[i] = a[i] * Complex(std::cos(two_pi * t), std::sin(two_pi * t));
    }
}

template <class Real>
long double ShortSumKernel::evaluate_impl(std::span<const Complex> b, long double r) const {
    const std::size_t npts = b.size();
    const std::size_t k = counts_.size();
    std::vector<Real> bre(npts), bim(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        bre[i] = static_cast<Real>(b[i].real());
        bim[i] = static_cast<Real>(b[i].imag());
    }
    std::vector<Real> tre, tim;
    if (table_) {
        tre.resize(denom_);
        tim.resize(denom_);
        for (std::uint64_t t = 0; t < denom_; ++t) {
            tre[t] = static_cast<Real>((*table_)[t].real());
            tim[t] = static_cast<Real>((*table_)[t].imag());
        }
    }
    const std::uint64_t D = denom_;
    const std::uint64_t last = counts_[k - 1];
    const auto& last_step = step_[k - 1];

    auto fill = [&](std::uint64_t begin, std::uint64_t end, NeumaierSum<long double>& acc) {
        std::vector<std::uint64_t> iota(k);
        std::vector<std::uint64_t> ph(npts);
        auto reset = [&](std::uint64_t linear) {
            for (std::size_t j = k; j-- > 0;) {
                iota[j] = linear % counts_[j];
                linear /= counts_[j];
            }
            for (std::size_t i = 0; i < npts; ++i) {
                unsigned __int128 s = 0;
                for (std::size_t j = 0; j < k; ++j) s += static_cast<unsigned __int128>(iota[j]) * step_[j][i];
                ph[i] = static_cast<std::uint64_t>(s % D);
            }
        };
        reset(begin);
        for (std::uint64_t t = begin; t < end; ++t) {
            Real sre = 0, sim = 0;
            if (table_) {
                for (std::size_t i = 0; i < npts; ++i) {
                    const Real er = tre[ph[i]], ei = tim[ph[i]];
                    sre += bre[i] * er - bim[i] * ei;
                    sim += bre[i] * ei + bim[i] * er;
                }
            } else {
                for (std::size_t i = 0; i < npts; ++i) {
                    const Complex e = unit_root(ph[i], D);
                    const Real er = static_cast<Real>(e.real()), ei = static_cast<Real>(e.imag());
                    sre += bre[i] * er - bim[i] * ei;
                    sim += bre[i] * ei + bim[i] * er;
                }
            }
            acc.add(modulus_power(static_cast<long double>(sre * sre + sim * sim), r));
            if (++iota[k - 1] < last) {
                for (std::size_t i = 0; i < npts; ++i) {
                    std::uint64_t x = ph[i] + last_step[i];
                    ph[i] = x >= D ? x - D : x;
                }
            } else if (t + 1 < end) {
                reset(t + 1);
            }
        }
    };
    const auto sum = deterministic_reduce<NeumaierSum<long double>>(cells_, exec_.threads, fill);
    return sum.value() * normalization_;
}

long double ShortSumKernel::evaluate(std::span<const Complex> b, long double r) const {
    if (b.size() != points()) throw InvalidInput("coefficient vector length differs from |Omega|");
    if (!(r >= 2) || !std::isfinite(r)) throw InvalidInput("exponent r must be a finite real >= 2");
    const bool dbl = exec_.precision == Precision::Double;
    if (path_for(r) == KernelPath::Correlation) {
        const unsigned s = even_half(r);
        return dbl ? evaluate_correlation<double>(b, s) : evaluate_correlation<long double>(b, s);
    }
    return dbl ? evaluate_impl<double>(b, r) : evaluate_impl<long double>(b, r);
}

// ---------------------------------------------------------------------------
// p-adic and real mean values

MeanValueReport padic_short_mv(const PhaseSystem& phase, const IndexDomain& omega, const CoefficientVector& a,
                               long double r, const ScaleSpec& scale, const LocalizationVector& sigma,
                               const ExecConfig& exec) {
    const ShortSumKernel kernel(phase, omega, scale, sigma, exec);
    MeanValueReport rep;
    rep.value = kernel.evaluate(a.values(), r);
    rep.r = r;
    rep.method = MeanValueMethod::PadicExact;
    rep.cells = kernel.cells();
    return rep;
}

namespace {

struct RuleAverage {
    long double average = 0;
    long double sup = 0;
    std::vector<long double> argmax;
};

// Weighted average and maximum of v -> padic(a(v)) over the nodes of `rule`.
RuleAverage average_over_rule(const ShortSumKernel& kernel, const CoefficientVector& a, long double r,
                              const TensorRule& rule) {
    RuleAverage out;
    NeumaierSum<long double> acc;
    std::vector<long double> v;
    std::vector<Complex> b;
    for (std::uint64_t i = 0; i < rule.size(); ++i) {
        const long double w = rule.node(i, v);
        kernel.modulate(a.values(), v, b);
        const long double f = kernel.evaluate(b, r);
        acc.add(w * f);
        if (i == 0 || f > out.sup) {
            out.sup = f;
            out.argmax = v;
        }
    }
    out.average = acc.value();
    return out;
}

std::vector<long double> cell_halfwidths(const ShortSumKernel& kernel) {
    std::vector<long double> h;
    for (const auto& x : kernel.domain().cell_halfwidths()) h.push_back(x.to_long_double());
    return h;
}

struct QuadratureLevels {
    TensorRule coarse;
    TensorRule fine;
};

// Two levels on the same order: depth s (from the phase bound unless fixed)
// and depth s + 1. The finer value is reported and the difference of the
// two is the error estimate.
QuadratureLevels make_levels(const ShortSumKernel& kernel, long double r, const QuadratureConfig& quad,
                             const ExecConfig& exec) {
    const auto h = cell_halfwidths(kernel);
    const unsigned s = quad.depth >= 0 ? static_cast<unsigned>(quad.depth)
                                       : auto_depth(h, kernel.phase_bounds(), quad.max_phase_variation);
    QuadratureLevels levels{TensorRule(h, quad.order, s), TensorRule(h, quad.order, s + 1)};
    const long double work =
        static_cast<long double>(levels.fine.size() + levels.coarse.size()) * kernel.cost(r);
    if (work > static_cast<long double>(exec.work_budget)) {
        std::ostringstream os;
        os << "quadrature needs " << static_cast<double>(work) << " term evaluations, over the work budget of "
           << exec.work_budget;
        throw ResourceError(os.str());
    }
    return levels;
}

}  // namespace

MeanValueReport real_sparse_mv(const PhaseSystem& phase, const IndexDomain& omega, const CoefficientVector& a,
                               long double r, const ScaleSpec& scale, const LocalizationVector& sigma,
                               const QuadratureConfig& quad, const ExecConfig& exec) {
    const ShortSumKernel kernel(phase, omega, scale, sigma, exec);
    const auto levels = make_levels(kernel, r, quad, exec);
    const auto coarse = average_over_rule(kernel, a, r, levels.coarse);
    const auto fine = average_over_rule(kernel, a, r, levels.fine);
    MeanValueReport rep;
    rep.value = fine.average;
    rep.r = r;
    rep.method = MeanValueMethod::RealQuadrature;
    rep.quadrature_error_bound = std::fabs(fine.average - coarse.average);
    rep.cells = kernel.cells();
    rep.quadrature_nodes = levels.fine.size();
    return rep;
}

TransferReport transfer_check(const PhaseSystem& phase, const IndexDomain& omega, const CoefficientVector& a,
                              long double r, const ScaleSpec& scale, const LocalizationVector& sigma,
                              const TransferGrid& grid, long double tol, const QuadratureConfig& quad,
                              const ExecConfig& exec) {
    const ShortSumKernel kernel(phase, omega, scale, sigma, exec);
    const auto levels = make_levels(kernel, r, quad, exec);
    const auto coarse = average_over_rule(kernel, a, r, levels.coarse);
    const auto fine = average_over_rule(kernel, a, r, levels.fine);
    TransferReport rep;
    rep.real_value = fine.average;
    rep.error_bound = std::fabs(fine.average - coarse.average);
    rep.tolerance = tol;
    if (grid.kind == TransferGrid::Kind::QuadratureNodes) {
        rep.padic_sup = fine.sup;
        rep.argmax = fine.argmax;
        rep.grid_points = levels.fine.size();
    } else {
        if (grid.points_per_axis == 0) throw InvalidInput("uniform grid needs at least one point per axis");
        // Cell-centered lattice v_j = h_j (2 t + 1 - g) / g, t < g, with exact rational phases.
        const auto& hw = kernel.domain().cell_halfwidths();
        const std::size_t k = hw.size();
        const unsigned g = grid.points_per_axis;
        std::uint64_t total = 1;
        for (std::size_t j = 0; j < k; ++j) total *= g;
        std::vector<unsigned> t(k, 0);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::uint64_t rem = idx;
            for (std::size_t j = k; j-- > 0;) {
                t[j] = static_cast<unsigned>(rem % g);
                rem /= g;
            }
            std::vector<Rational> v;
            std::vector<long double> vf;
            for (std::size_t j = 0; j < k; ++j) {
                v.push_back(hw[j] * Rational(BigInt(static_cast<long>(2 * t[j] + 1) - static_cast<long>(g)),
                                             BigInt(static_cast<long>(g))));
                vf.push_back(v.back().to_long_double());
            }
            const auto b = modulate_coefficients(a, v, phase);
            const long double f = kernel.evaluate(b.values(), r);
            if (idx == 0 || f > rep.padic_sup) {
                rep.padic_sup = f;
                rep.argmax = vf;
            }
        }
        rep.grid_points = total;
    }
    rep.pass = rep.real_value <= (1 + tol) * rep.padic_sup + rep.error_bound;
    return rep;
}

// ---------------------------------------------------------------------------
// Samplers and restriction-constant estimates

std::string to_string(SamplerKind s) {
    switch (s) {
        case SamplerKind::AllOnes: return "all-ones";
        case SamplerKind::SinglePoint: return "single-point";
        case SamplerKind::RandomPhases: return "random-phases";
        case SamplerKind::RandomSparse: return "random-sparse";
    }
    return "?";
}

SamplerKind parse_sampler(const std::string& name) {
    for (auto s : {SamplerKind::AllOnes, SamplerKind::SinglePoint, SamplerKind::RandomPhases, SamplerKind::RandomSparse}) {
        if (to_string(s) == name) return s;
    }
    throw InvalidInput("unknown sampler '" + name + "' (all-ones, single-point, random-phases, random-sparse)");
}

std::string to_string(Side s) { return s == Side::Padic ? "padic" : "real"; }

namespace {

constexpr std::uint64_t kPhaseDenominator = std::uint64_t{1} << 32;

Complex random_unit(const CounterRng& rng, std::uint64_t counter) {
    return unit_root(rng.bits(counter) >> 32, kPhaseDenominator);
}

}  // namespace

CoefficientVector sample_coefficients(const IndexDomain& omega, SamplerKind kind, std::uint64_t seed,
                                      std::uint64_t trial) {
    const std::size_t n = omega.size();
    std::vector<Complex> a(n, Complex(0, 0));
    const CounterRng rng(seed, static_cast<std::uint64_t>(kind) * 0x100000000ULL + trial);
    switch (kind) {
        case SamplerKind::AllOnes:
            std::fill(a.begin(), a.end(), Complex(1, 0));
            break;
        case SamplerKind::SinglePoint:
            a[rng.bits(0) % n] = Complex(1, 0);
            break;
        case SamplerKind::RandomPhases:
            for (std::size_t i = 0; i < n; ++i) a[i] = random_unit(rng, i);
            break;
        case SamplerKind::RandomSparse: {
            bool any = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (rng.bits(n + i) & 1) {
                    a[i] = random_unit(rng, i);
                    any = true;
                }
            }
            if (!any) a[rng.bits(2 * n) % n] = Complex(1, 0);
            break;
        }
    }
    return CoefficientVector(omega, std::move(a));
}

CoefficientVector random_complex_coefficients(const IndexDomain& omega, std::uint64_t seed) {
    const CounterRng rng(seed, 0xc0ffeeULL);
    std::vector<Complex> a(omega.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double modulus = 0.5L + static_cast<long double>(rng.uniform(2 * i));
        a[i] = modulus * random_unit(rng, 2 * i + 1);
    }
    return CoefficientVector(omega, std::move(a));
}

RestrictionEstimate estimate_restriction_constant(const PhaseSystem& phase, const IndexDomain& omega, long double r,
                                                  const ScaleSpec& scale, const LocalizationVector& sigma, Side side,
                                                  const SamplerPlan& plan, const QuadratureConfig& quad,
                                                  const ExecConfig& exec) {
    if (plan.samplers.empty()) throw InvalidInput("no samplers requested");
    const ShortSumKernel kernel(phase, omega, scale, sigma, exec);
    std::optional<QuadratureLevels> levels;
    if (side == Side::Real) levels.emplace(make_levels(kernel, r, quad, exec));
    RestrictionEstimate est;
    est.side = side;
    bool first = true;
    for (auto kind : plan.samplers) {
        const bool random = kind == SamplerKind::RandomPhases || kind == SamplerKind::RandomSparse;
        const unsigned trials = random ? std::max(1u, plan.trials) : 1u;
        for (unsigned trial = 0; trial < trials; ++trial) {
            const auto a = sample_coefficients(omega, kind, plan.seed, trial);
            SampleResult s{kind, trial, plan.seed};
            if (side == Side::Padic) {
                s.value = kernel.evaluate(a.values(), r);
            } else {
                const auto coarse = average_over_rule(kernel, a, r, levels->coarse);
                const auto fine = average_over_rule(kernel, a, r, levels->fine);
                s.value = fine.average;
                s.error_bound = std::fabs(fine.average - coarse.average);
            }
            s.denominator = a.norm_power(r);
            s.ratio = s.value / s.denominator;
            if (first || s.ratio > est.estimate) {
                est.estimate = s.ratio;
                est.best_sampler = kind;
                est.best_trial = trial;
                first = false;
            }
            est.samples.push_back(s);
        }
    }
    return est;
}

UpperTransferRow upper_transfer_row(const PhaseSystem& phase, const IndexDomain& omega, long double r,
                                    long double padic_estimate, long double real_estimate) {
    UpperTransferRow row;
    const Rational N(omega.bound());
    long double prod = 1;
    for (const auto& comp : phase.components()) {
        // max_n |scale * P_j(n) / N^{|e_j|}|, the component as originally given.
        Rational best;
        for (const auto& pt : omega.points()) {
            std::vector<BigInt> n;
            for (auto x : pt) n.emplace_back(static_cast<long>(x));
            Rational v = comp.scale * comp.evaluate(n) / rational_pow(N, comp.degree);
            if (v.sign() < 0) v = -v;
            if (best < v) best = v;
        }
        const long double m = std::max(1.0L, best.to_long_double());
        row.eps.push_back(1.0L / m);
        prod *= row.eps.back();
    }
    row.factor = std::pow(2.0L, (r + 1) * static_cast<long double>(phase.size())) / prod;
    row.padic_estimate = padic_estimate;
    row.real_estimate = real_estimate;
    row.rhs = row.factor * real_estimate;
    return row;
}

std::vector<CorollaryRow> corollary_ratio_experiment(std::uint64_t p, const std::vector<unsigned>& Ks,
                                                     const Rational& sigma, long double r, const SamplerPlan& plan,
                                                     const QuadratureConfig& quad, const ExecConfig& exec) {
    if (sigma.sign() < 0 || sigma > Rational(1)) throw InvalidInput("corollary-ratio: sigma must lie in [0, 1]");
    const PhaseSystem parabola = PhaseSystem::parabola();
    std::vector<CorollaryRow> rows;
    for (unsigned K : Ks) {
        const ScaleSpec scale(p, K);
        const LocalizationVector loc{{Rational(0), sigma}};
        const IndexDomain omega = IndexDomain::box(1, scale.N());
        const auto est = estimate_restriction_constant(parabola, omega, r, scale, loc, Side::Real, plan, quad, exec);
        const long double N = Rational(scale.N()).to_long_double();
        const long double envelope = std::pow(N, r / 2) + std::pow(N, r - 4 + sigma.to_long_double());
        for (const auto& s : est.samples) rows.push_back(CorollaryRow{scale, s, envelope});
    }
    return rows;
}

}  // namespace padicmv
