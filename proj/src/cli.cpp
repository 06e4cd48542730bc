#include "padicmv/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "padicmv/algebra.hpp"
#include "padicmv/counterexample.hpp"
#include "padicmv/csv.hpp"
#include "padicmv/domains.hpp"
#include "padicmv/errors.hpp"
#include "padicmv/meanvalue.hpp"
#include "padicmv/padic.hpp"
#include "padicmv/vinogradov.hpp"

namespace padicmv::cli {

namespace {

using Params = std::map<std::string, std::string>;

// Keys shared by every command.
const Params kCommon{{"seed", "1"}, {"threads", "1"}, {"precision", "64"}, {"budget", "100000000"}};

const Params kPhase{{"phase", "parabola"}, {"k", "3"}, {"minpoly", ""}, {"phase-file", ""}};
const Params kScale{{"p", "3"}, {"K", "1"}, {"sigma", ""}};
const Params kCoeffs{{"coeffs", "ones"}, {"coeff-file", ""}, {"path", "auto"}};
const Params kQuad{{"order", "4"}, {"depth", "-1"}, {"max-variation", "1/4"}, {"work-budget", "20000000000"}};
const Params kSamplers{{"samplers", "all-ones,single-point,random-phases,random-sparse"}, {"trials", "4"}};

// Boolean switches; given as bare flags on the command line.
const std::set<std::string> kFlags{"raw", "timing", "upper-transfer"};

Params merge(std::initializer_list<Params> parts) {
    Params out = kCommon;
    for (const auto& p : parts) out.insert(p.begin(), p.end());
    return out;
}

const std::map<std::string, Params>& key_table() {
    static const std::map<std::string, Params> table{
        {"traces", merge({{{"minpoly", ""}, {"kappa-max", "10"}}})},
        {"phase-system", merge({{{"minpoly", ""}, {"k", "3"}, {"raw", "0"}}})},
        {"domain-cells", merge({kPhase, kScale, {{"degrees", ""}}})},
        {"mv-padic", merge({kPhase, kScale, kCoeffs, {{"r", "2"}}})},
        {"mv-real", merge({kPhase, kScale, kCoeffs, kQuad, {{"r", "2"}}})},
        {"transfer-check",
         merge({kPhase, kScale, kCoeffs, kQuad,
                {{"r", "4"}, {"grid", "nodes"}, {"grid-points", "4"}, {"tol", "1e-6"}, {"trials", "1"}}})},
        {"restriction-estimate",
         merge({kPhase, kScale, kQuad, kSamplers,
                {{"r", "4"}, {"side", "padic"}, {"path", "auto"}, {"upper-transfer", "0"}}})},
        {"corollary-ratio", merge({kQuad, kSamplers, {{"p", "3"}, {"Ks", "1,2"}, {"sigma", "0"}, {"r", "4"}}})},
        {"vinogradov",
         merge({{{"minpoly", ""}, {"d", ""}, {"s", "2"}, {"k", "2"}, {"N", ""}, {"method", "hash"}, {"timing", "0"}}})},
        {"vinogradov-fit", merge({{{"minpoly", ""}, {"s", "2"}, {"k", "2"}, {"N", ""}, {"timing", "0"}}})},
        {"counterexample", merge({{{"p", "5"}, {"kmax", "3"}, {"r", "6"}}})},
        {"hensel", merge({{{"p", "5"}, {"K", "1"}}})},
    };
    return table;
}

// ---------------------------------------------------------------------------
// Typed access to the parameter map

class Args {
public:
    explicit Args(const Params& p) : p_(p) {}

    bool has(const std::string& key) const { return p_.count(key) > 0; }
    const std::string& str(const std::string& key) const { return p_.at(key); }

    const std::string& required(const std::string& key) const {
        const auto& v = str(key);
        if (v.empty()) throw InvalidInput("--" + key + " is required");
        return v;
    }

    long long integer(const std::string& key) const { return parse_integer(key, required(key)); }

    std::uint64_t unsigned_integer(const std::string& key) const {
        const long long v = integer(key);
        if (v < 0) throw InvalidInput("--" + key + " must be nonnegative");
        return static_cast<std::uint64_t>(v);
    }

    long double real(const std::string& key) const { return parse_real(key, required(key)); }

    bool flag(const std::string& key) const {
        const auto& v = str(key);
        if (v == "1" || v == "true") return true;
        if (v == "0" || v == "false" || v.empty()) return false;
        throw InvalidInput("--" + key + " must be 0 or 1");
    }

    std::vector<std::uint64_t> unsigned_list(const std::string& key) const {
        std::vector<std::uint64_t> out;
        for (const auto& part : split_csv_line(required(key))) {
            const long long v = parse_integer(key, part);
            if (v < 0) throw InvalidInput("--" + key + " entries must be nonnegative");
            out.push_back(static_cast<std::uint64_t>(v));
        }
        return out;
    }

    std::vector<long double> real_list(const std::string& key) const {
        std::vector<long double> out;
        for (const auto& part : split_csv_line(required(key))) out.push_back(parse_real(key, part));
        return out;
    }

    static long long parse_integer(const std::string& key, const std::string& text) {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(text, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (text.empty() || pos != text.size()) throw InvalidInput("--" + key + ": '" + text + "' is not an integer");
        return v;
    }

    // Decimal reals, or exact rationals "a/b".
    static long double parse_real(const std::string& key, const std::string& text) {
        if (text.find('/') != std::string::npos) {
            try {
                return Rational::parse(text).to_long_double();
            } catch (const InvalidInput& e) {
                throw InvalidInput("--" + key + ": " + e.what());
            }
        }
        char* end = nullptr;
        const long double v = std::strtold(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
            throw InvalidInput("--" + key + ": '" + text + "' is not a number");
        }
        return v;
    }

private:
    const Params& p_;
};

ExecConfig exec_config(const Args& a) {
    ExecConfig e;
    e.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, a.unsigned_integer("threads")));
    e.precision = parse_precision(static_cast<int>(a.integer("precision")));
    e.cell_budget = a.unsigned_integer("budget");
    return e;
}

ExecConfig exec_with_path(const Args& a) {
    ExecConfig e = exec_config(a);
    const auto& path = a.str("path");
    if (path == "auto") e.path = KernelPath::Auto;
    else if (path == "fourier") e.path = KernelPath::Fourier;
    else if (path == "correlation") e.path = KernelPath::Correlation;
    else throw InvalidInput("--path must be auto, fourier or correlation");
    if (a.has("work-budget")) e.work_budget = a.unsigned_integer("work-budget");
    return e;
}

QuadratureConfig quad_config(const Args& a) {
    QuadratureConfig q;
    const long long order = a.integer("order");
    if (order < 1 || order > 64) throw InvalidInput("--order must be in [1, 64]");
    q.order = static_cast<unsigned>(order);
    const long long depth = a.integer("depth");
    if (depth < -1 || depth > 19) throw InvalidInput("--depth must be -1 (automatic) or in [0, 19]");
    q.depth = static_cast<int>(depth);
    q.max_phase_variation = a.real("max-variation");
    if (!(q.max_phase_variation > 0)) throw InvalidInput("--max-variation must be positive");
    return q;
}

PhaseSystem resolve_phase(const Args& a) {
    const auto& kind = a.str("phase");
    if (kind == "parabola") return PhaseSystem::parabola();
    if (kind == "paraboloid") return PhaseSystem::paraboloid();
    const long long k = a.integer("k");
    if (kind == "moment") {
        if (k < 1 || k > 12) throw InvalidInput("--k must be in [1, 12]");
        return PhaseSystem::moment_curve(static_cast<unsigned>(k));
    }
    if (kind == "trace") {
        if (k < 1 || k > 12) throw InvalidInput("--k must be in [1, 12]");
        return expand_trace_phase(MinimalPolynomial::parse(a.required("minpoly")), static_cast<unsigned>(k));
    }
    if (kind == "file") {
        std::ifstream in(a.required("phase-file"));
        if (!in) throw InvalidInput("cannot read phase file " + a.str("phase-file"));
        return PhaseSystem::read_csv(in);
    }
    throw InvalidInput("--phase must be parabola, moment, paraboloid, trace or file");
}

ScaleSpec resolve_scale(const Args& a) {
    const long long K = a.integer("K");
    if (K < 1 || K > 64) throw InvalidInput("--K must be in [1, 64]");
    return ScaleSpec(a.unsigned_integer("p"), static_cast<unsigned>(K));
}

LocalizationVector resolve_sigma(const Args& a, std::size_t k) {
    if (a.str("sigma").empty()) return LocalizationVector::zeros(k);
    return LocalizationVector{parse_rational_list(a.str("sigma"))};
}

CoefficientVector resolve_coeffs(const Args& a, const IndexDomain& omega, std::uint64_t trial) {
    const auto& kind = a.str("coeffs");
    const std::uint64_t seed = a.unsigned_integer("seed");
    if (kind == "ones") return CoefficientVector::ones(omega);
    if (kind == "random") return sample_coefficients(omega, SamplerKind::RandomPhases, seed, trial);
    if (kind == "sparse") return sample_coefficients(omega, SamplerKind::RandomSparse, seed, trial);
    if (kind == "point") return sample_coefficients(omega, SamplerKind::SinglePoint, seed, trial);
    if (kind == "random-complex") return random_complex_coefficients(omega, seed + trial);
    if (kind == "file") {
        std::ifstream in(a.required("coeff-file"));
        if (!in) throw InvalidInput("cannot read coefficient file " + a.str("coeff-file"));
        return CoefficientVector::read_csv(omega, in);
    }
    throw InvalidInput("--coeffs must be ones, random, sparse, point, random-complex or file");
}

SamplerPlan resolve_plan(const Args& a) {
    SamplerPlan plan;
    plan.samplers.clear();
    for (const auto& name : split_csv_line(a.required("samplers"))) plan.samplers.push_back(parse_sampler(name));
    plan.trials = static_cast<unsigned>(a.unsigned_integer("trials"));
    plan.seed = a.unsigned_integer("seed");
    return plan;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// The resolved configuration as a comment line. Thread count and output path
// are left out so that the CSV bytes depend only on the computation.
std::string config_comment(const ExperimentConfig& c) {
    std::string line = "padicmv " + c.command;
    for (const auto& [k, v] : c.params) {
        if (k == "threads") continue;
        line += " " + k + "=" + v;
    }
    return line;
}

struct Outcome {
    CsvTable table;
    std::string summary;
    int code = kOk;
};

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_traces(const Args& a) {
    const auto P = MinimalPolynomial::parse(a.required("minpoly"));
    const long long kmax = a.integer("kappa-max");
    if (kmax < 0 || kmax > 10000) throw InvalidInput("--kappa-max must be in [0, 10000]");
    const auto tr = trace_powers(P, static_cast<unsigned>(kmax));
    Outcome o;
    o.table.header = {"kappa", "trace"};
    for (std::size_t i = 0; i < tr.size(); ++i) o.table.rows.push_back({std::to_string(i), tr[i].str()});
    o.summary = "traces: " + P.pretty() + ", kappa 0.." + std::to_string(kmax);
    return o;
}

Outcome cmd_phase_system(const Args& a) {
    const auto P = MinimalPolynomial::parse(a.required("minpoly"));
    const long long k = a.integer("k");
    if (k < 1 || k > 12) throw InvalidInput("--k must be in [1, 12]");
    const auto phase = a.flag("raw") ? expand_trace_phase_raw(P, static_cast<unsigned>(k))
                                     : expand_trace_phase(P, static_cast<unsigned>(k));
    std::ostringstream os;
    phase.write_csv(os);
    Outcome o;
    std::istringstream is(os.str());
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            o.table.header = split_csv_line(line);
            first = false;
        } else {
            o.table.rows.push_back(split_csv_line(line));
        }
    }
    std::vector<std::string> scales;
    for (const auto& c : phase.components()) scales.push_back(c.scale.str());
    o.summary = "phase-system: " + P.pretty() + ", k=" + std::to_string(k) + ", " +
                std::to_string(phase.size()) + " components, scales " + join(scales, ",");
    return o;
}

Outcome cmd_domain_cells(const Args& a) {
    const auto scale = resolve_scale(a);
    std::vector<unsigned> degrees;
    if (!a.str("degrees").empty()) {
        for (auto v : a.unsigned_list("degrees")) degrees.push_back(static_cast<unsigned>(v));
    } else {
        degrees = resolve_phase(a).degrees();
    }
    const auto domain = build_domain(scale, resolve_sigma(a, degrees.size()), degrees);
    Outcome o;
    o.table = cell_table(domain, a.unsigned_integer("budget"));
    o.summary = "domain-cells: " + domain.total_cells().get_str() + " cells, measure " + domain.measure().str();
    return o;
}

const std::vector<std::string> kMeanValueHeader{"command", "p",           "K",     "sigma",
                                                "r",       "sampler",     "seed",  "value",
                                                "denominator", "ratio", "error_bound"};

std::vector<std::string> mean_value_row(const std::string& command, const ScaleSpec& scale,
                                        const LocalizationVector& sigma, long double r, const std::string& sampler,
                                        std::uint64_t seed, long double value, long double denominator,
                                        long double error) {
    return {command,
            std::to_string(scale.p()),
            std::to_string(scale.K()),
            sigma.str(),
            format_real(r),
            sampler,
            std::to_string(seed),
            format_real(value),
            format_real(denominator),
            format_real(value / denominator),
            format_real(error)};
}

Outcome cmd_mean_value(const Args& a, bool real) {
    const auto phase = resolve_phase(a);
    const auto scale = resolve_scale(a);
    const auto sigma = resolve_sigma(a, phase.size());
    const long double r = a.real("r");
    const auto omega = IndexDomain::box(phase.dim(), scale.N());
    const auto coeffs = resolve_coeffs(a, omega, 0);
    const auto exec = exec_with_path(a);
    const auto rep = real ? real_sparse_mv(phase, omega, coeffs, r, scale, sigma, quad_config(a), exec)
                          : padic_short_mv(phase, omega, coeffs, r, scale, sigma, exec);
    Outcome o;
    o.table.header = kMeanValueHeader;
    o.table.rows.push_back(mean_value_row(real ? "mv-real" : "mv-padic", scale, sigma, r, a.str("coeffs"),
                                          a.unsigned_integer("seed"), rep.value, coeffs.norm_power(r),
                                          rep.quadrature_error_bound));
    o.table.comments.push_back("method=" + to_string(rep.method) + "; value " + rep.normalization);
    o.summary = std::string(real ? "mv-real" : "mv-padic") + ": value=" + format_real(rep.value);
    if (real) {
        o.summary += " error_bound=" + format_real(rep.quadrature_error_bound) +
                     " nodes=" + std::to_string(rep.quadrature_nodes);
    }
    return o;
}

Outcome cmd_transfer_check(const Args& a) {
    const auto phase = resolve_phase(a);
    const auto scale = resolve_scale(a);
    const auto sigma = resolve_sigma(a, phase.size());
    const long double r = a.real("r");
    const auto omega = IndexDomain::box(phase.dim(), scale.N());
    const auto exec = exec_with_path(a);
    const auto quad = quad_config(a);
    TransferGrid grid;
    if (a.str("grid") == "nodes") {
        grid.kind = TransferGrid::Kind::QuadratureNodes;
    } else if (a.str("grid") == "uniform") {
        grid.kind = TransferGrid::Kind::Uniform;
        grid.points_per_axis = static_cast<unsigned>(a.unsigned_integer("grid-points"));
    } else {
        throw InvalidInput("--grid must be nodes or uniform");
    }
    const long double tol = a.real("tol");
    if (!(tol >= 0)) throw InvalidInput("--tol must be nonnegative");
    const std::uint64_t trials = a.unsigned_integer("trials");
    if (trials == 0) throw InvalidInput("--trials must be positive");
    Outcome o;
    o.table.header = {"command", "p",          "K",          "sigma",       "r",           "sampler", "seed",
                      "trial",   "real_value", "padic_sup",  "error_bound", "grid_points", "pass"};
    std::uint64_t passed = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto coeffs = resolve_coeffs(a, omega, t);
        const auto rep = transfer_check(phase, omega, coeffs, r, scale, sigma, grid, tol, quad, exec);
        passed += rep.pass ? 1 : 0;
        o.table.rows.push_back({"transfer-check", std::to_string(scale.p()), std::to_string(scale.K()), sigma.str(),
                                format_real(r), a.str("coeffs"), a.str("seed"), std::to_string(t),
                                format_real(rep.real_value), format_real(rep.padic_sup), format_real(rep.error_bound),
                                std::to_string(rep.grid_points), rep.pass ? "1" : "0"});
    }
    o.summary = "transfer-check: " + std::to_string(passed) + "/" + std::to_string(trials) + " pass";
    if (passed != trials) o.code = kVerificationFailed;
    return o;
}

Outcome cmd_restriction_estimate(const Args& a) {
    const auto phase = resolve_phase(a);
    const auto scale = resolve_scale(a);
    const auto sigma = resolve_sigma(a, phase.size());
    const long double r = a.real("r");
    const auto omega = IndexDomain::box(phase.dim(), scale.N());
    const auto exec = exec_with_path(a);
    const auto quad = quad_config(a);
    const auto plan = resolve_plan(a);
    Side side;
    if (a.str("side") == "padic") side = Side::Padic;
    else if (a.str("side") == "real") side = Side::Real;
    else throw InvalidInput("--side must be padic or real");
    const auto est = estimate_restriction_constant(phase, omega, r, scale, sigma, side, plan, quad, exec);
    Outcome o;
    o.table.header = kMeanValueHeader;
    for (const auto& s : est.samples) {
        o.table.rows.push_back(mean_value_row("restriction-estimate", scale, sigma, r, to_string(s.sampler), s.seed,
                                              s.value, s.denominator, s.error_bound));
    }
    o.table.comments.push_back("side=" + to_string(side) + "; estimate=" + format_real(est.estimate) +
                               " from " + to_string(est.best_sampler) + " trial " + std::to_string(est.best_trial));
    if (a.flag("upper-transfer")) {
        const Side other = side == Side::Padic ? Side::Real : Side::Padic;
        const auto est2 = estimate_restriction_constant(phase, omega, r, scale, sigma, other, plan, quad, exec);
        const long double padic = side == Side::Padic ? est.estimate : est2.estimate;
        const long double realv = side == Side::Padic ? est2.estimate : est.estimate;
        const auto row = upper_transfer_row(phase, omega, r, padic, realv);
        std::vector<std::string> eps;
        for (auto e : row.eps) eps.push_back(format_real(e));
        o.table.comments.push_back("upper-transfer (report only, not asserted): eps=" + join(eps, ";") +
                                   " factor=" + format_real(row.factor) + " padic_estimate=" +
                                   format_real(row.padic_estimate) + " real_estimate=" +
                                   format_real(row.real_estimate) + " rhs=" + format_real(row.rhs));
    }
    o.summary = "restriction-estimate: estimate=" + format_real(est.estimate) + " (" + to_string(est.best_sampler) + ")";
    return o;
}

Outcome cmd_corollary_ratio(const Args& a) {
    std::vector<unsigned> Ks;
    for (auto K : a.unsigned_list("Ks")) Ks.push_back(static_cast<unsigned>(K));
    const Rational sigma = Rational::parse(a.required("sigma"));
    const long double r = a.real("r");
    ExecConfig exec = exec_config(a);
    exec.work_budget = a.unsigned_integer("work-budget");
    const auto rows =
        corollary_ratio_experiment(a.unsigned_integer("p"), Ks, sigma, r, resolve_plan(a), quad_config(a), exec);
    Outcome o;
    o.table.header = kMeanValueHeader;
    o.table.header.push_back("envelope");
    for (const auto& row : rows) {
        auto cells = mean_value_row("corollary-ratio", row.scale, LocalizationVector{{Rational(0), sigma}}, r,
                                    to_string(row.sample.sampler), row.sample.seed, row.sample.value,
                                    row.sample.denominator, row.sample.error_bound);
        cells.push_back(format_real(row.envelope));
        o.table.rows.push_back(std::move(cells));
    }
    o.table.comments.push_back("report only: ratios tabulated against N^(r/2) + N^(r-4+sigma), no constant asserted");
    o.summary = "corollary-ratio: " + std::to_string(rows.size()) + " rows";
    return o;
}

CountOptions count_options(const Args& a) {
    CountOptions opt;
    opt.key_budget = a.unsigned_integer("budget");
    opt.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, a.unsigned_integer("threads")));
    opt.timing = a.flag("timing");
    return opt;
}

Outcome cmd_vinogradov(const Args& a) {
    const auto P = MinimalPolynomial::parse(a.required("minpoly"));
    if (!a.str("d").empty() && a.unsigned_integer("d") != P.degree()) {
        throw InvalidInput("--d " + a.str("d") + " differs from the degree " + std::to_string(P.degree()) +
                           " of the minimal polynomial");
    }
    const auto s = static_cast<unsigned>(a.unsigned_integer("s"));
    const auto k = static_cast<unsigned>(a.unsigned_integer("k"));
    const auto opt = count_options(a);
    const auto& method = a.str("method");
    if (method != "hash" && method != "brute" && method != "formal" && method != "all") {
        throw InvalidInput("--method must be hash, brute, formal or all");
    }
    std::vector<SolutionCountRecord> recs;
    std::vector<std::string> js;
    Outcome o;
    for (auto N : a.unsigned_list("N")) {
        if (method == "hash" || method == "all") recs.push_back(count_solutions(P, s, k, N, opt));
        if (method == "brute" || method == "all") recs.push_back(count_solutions_brute(P, s, k, N, opt));
        if (method == "formal" || method == "all") recs.push_back(count_solutions_formal(P.degree(), s, k, N, opt));
        if (method == "all" && recs[recs.size() - 3].J != recs[recs.size() - 2].J) o.code = kVerificationFailed;
        js.push_back(recs[method == "all" ? recs.size() - 3 : recs.size() - 1].J.get_str());
    }
    o.table = solution_count_table(recs);
    if (method == "formal" || method == "all") {
        o.table.comments.push_back("formal rows treat alpha as an independent variable (unreduced power sums)");
    }
    o.summary = "J=" + join(js, ",");
    if (o.code == kVerificationFailed) o.summary += " (hash and brute force disagree)";
    return o;
}

Outcome cmd_vinogradov_fit(const Args& a) {
    const auto P = MinimalPolynomial::parse(a.required("minpoly"));
    const auto s = static_cast<unsigned>(a.unsigned_integer("s"));
    const auto k = static_cast<unsigned>(a.unsigned_integer("k"));
    const auto fit = fit_growth(P, s, k, a.unsigned_list("N"), count_options(a));
    Outcome o;
    o.table.header = {"d", "s", "k", "N", "minpoly", "J", "log_N", "log_J", "residual", "envelope"};
    for (const auto& pt : fit.points) {
        o.table.rows.push_back({std::to_string(fit.d), std::to_string(s), std::to_string(k), std::to_string(pt.N),
                                P.pretty(), pt.J.get_str(), format_real(pt.log_N), format_real(pt.log_J),
                                format_real(pt.residual), format_real(fit.envelope)});
    }
    o.table.comments.push_back("slope=" + format_real(fit.slope) + " intercept=" + format_real(fit.intercept));
    o.summary = "vinogradov-fit: slope=" + format_real(fit.slope) + " envelope=" + format_real(fit.envelope);
    return o;
}

Outcome cmd_counterexample(const Args& a) {
    const auto p = a.unsigned_integer("p");
    const long long kmax = a.integer("kmax");
    if (kmax < 1 || kmax > 4) throw InvalidInput("--kmax must be in [1, 4]");
    const auto rs = a.real_list("r");
    const auto rows = counterexample_table(p, static_cast<unsigned>(kmax), rs,
                                           static_cast<unsigned>(std::max<std::uint64_t>(1, a.unsigned_integer("threads"))));
    Outcome o;
    o.table = counterexample_csv(rows);
    std::vector<std::string> parts;
    for (long double r : rs) {
        std::vector<long double> x, ys, yr;
        for (const auto& row : rows) {
            if (row.r != r) continue;
            x.push_back(std::log(Rational(row.N).to_long_double()));
            ys.push_back(std::log(row.sum));
            yr.push_back(row.log_ratio);
        }
        if (x.size() >= 2) {
            parts.push_back("r=" + format_real(r) + " sum_norm slope=" + format_real(fit_line(x, ys).slope) +
                            " ratio slope=" + format_real(fit_line(x, yr).slope));
        }
    }
    for (const auto& part : parts) o.table.comments.push_back(part);
    o.summary = "counterexample: p=" + std::to_string(p) + (parts.empty() ? "" : " " + join(parts, "; "));
    return o;
}

Outcome cmd_hensel(const Args& a) {
    const long long K = a.integer("K");
    if (K < 1 || K > 100000) throw InvalidInput("--K must be in [1, 100000]");
    const auto root = hensel_sqrt_minus_one(a.unsigned_integer("p"), static_cast<unsigned>(K));
    Outcome o;
    o.table.header = {"p", "K", "xi", "digits"};
    std::vector<std::string> digits;
    for (auto d : root.digits()) digits.push_back(std::to_string(d));
    o.table.rows.push_back({std::to_string(root.p), std::to_string(root.K), root.xi.get_str(), join(digits, ";")});
    o.summary = root.xi.get_str();
    return o;
}

Outcome dispatch(const ExperimentConfig& c) {
    const Args a(c.params);
    const auto& cmd = c.command;
    if (cmd == "traces") return cmd_traces(a);
    if (cmd == "phase-system") return cmd_phase_system(a);
    if (cmd == "domain-cells") return cmd_domain_cells(a);
    if (cmd == "mv-padic") return cmd_mean_value(a, false);
    if (cmd == "mv-real") return cmd_mean_value(a, true);
    if (cmd == "transfer-check") return cmd_transfer_check(a);
    if (cmd == "restriction-estimate") return cmd_restriction_estimate(a);
    if (cmd == "corollary-ratio") return cmd_corollary_ratio(a);
    if (cmd == "vinogradov") return cmd_vinogradov(a);
    if (cmd == "vinogradov-fit") return cmd_vinogradov_fit(a);
    if (cmd == "counterexample") return cmd_counterexample(a);
    if (cmd == "hensel") return cmd_hensel(a);
    throw InvalidInput("unknown command '" + cmd + "'");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidInput("config file " + path + " line " + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"traces",         "phase-system",         "domain-cells",
                                                "mv-padic",       "mv-real",              "transfer-check",
                                                "restriction-estimate", "corollary-ratio", "vinogradov",
                                                "vinogradov-fit", "counterexample",       "hensel"};
    return names;
}

const std::map<std::string, std::string>& command_keys(const std::string& command) {
    const auto& t = key_table();
    auto it = t.find(command);
    if (it == t.end()) throw InvalidInput("unknown command '" + command + "'");
    return it->second;
}

ExperimentConfig make_config(const std::string& command, const std::map<std::string, std::string>& params,
                             std::string out) {
    ExperimentConfig c;
    c.command = command;
    c.params = command_keys(command);
    c.out = std::move(out);
    for (const auto& [k, v] : params) {
        auto it = c.params.find(k);
        if (it == c.params.end()) throw InvalidInput("unknown key '" + k + "' for command " + command);
        it->second = v;
    }
    return c;
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    try {
        Outcome o = dispatch(config);
        o.table.comments.insert(o.table.comments.begin(), config_comment(config));
        std::string path = config.out;
        if (path.empty()) {
            if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
                path = (std::filesystem::path(dir) / (config.command + ".csv")).string();
            }
        }
        std::ostream* summary = &out;
        if (path == "-") {
            o.table.write(out);
            summary = &err;
        } else if (!path.empty()) {
            o.table.write(std::filesystem::path(path));
        }
        *summary << o.summary << '\n';
        return o.code;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const ResourceError& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kBudgetExceeded;
    } catch (const std::bad_alloc&) {
        err << "budget exceeded: out of memory\n";
        return kBudgetExceeded;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exponential-sum mean values over real and p-adic domains"};
    app.require_subcommand(1);
    std::string out_path;
    std::string config_path;
    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : commands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--out", out_path, "CSV output path ('-' for stdout)");
        sub->add_option("--config", config_path, "key=value file; flags override it");
        for (const auto& [key, def] : command_keys(name)) {
            auto& slot = values[name][key];
            if (kFlags.count(key)) {
                sub->add_flag("--" + key, slot, "switch (default " + def + ")");
            } else {
                sub->add_option("--" + key, slot, def.empty() ? "" : "default " + def)->allow_extra_args(false);
            }
        }
        subs[name] = sub;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }
    try {
        for (const auto& name : commands()) {
            auto* sub = subs[name];
            if (!sub->parsed()) continue;
            std::map<std::string, std::string> params;
            if (!config_path.empty()) {
                auto file = read_config_file(config_path);
                if (auto it = file.find("out"); it != file.end()) {
                    if (out_path.empty()) out_path = it->second;
                    file.erase(it);
                }
                params = std::move(file);
            }
            for (const auto& [key, def] : command_keys(name)) {
                if (sub->count("--" + key) > 0) params[key] = values[name][key];
            }
            return run(make_config(name, params, out_path), out, err);
        }
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
    return kInvalidInput;
}

}  // namespace padicmv::cli
