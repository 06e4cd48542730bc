#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "padicmv/algebra.hpp"
#include "padicmv/cli.hpp"
#include "padicmv/counterexample.hpp"
#include "padicmv/errors.hpp"
#include "padicmv/meanvalue.hpp"
#include "padicmv/padic.hpp"
#include "padicmv/vinogradov.hpp"

namespace py = pybind11;
using namespace padicmv;

namespace {

py::int_ to_py(const BigInt& x) { return py::int_(py::str(x.get_str())); }

PhaseSystem make_phase(const std::string& name, unsigned k, const std::string& minpoly) {
    if (name == "parabola") return PhaseSystem::parabola();
    if (name == "moment") return PhaseSystem::moment_curve(k);
    if (name == "paraboloid") return PhaseSystem::paraboloid();
    if (name == "trace") return expand_trace_phase(MinimalPolynomial::parse(minpoly), k);
    throw InvalidInput("phase must be parabola, moment, paraboloid or trace");
}

struct Problem {
    PhaseSystem phase;
    ScaleSpec scale;
    LocalizationVector sigma;
    IndexDomain omega;
    CoefficientVector a;
};

Problem make_problem(const std::string& phase_name, unsigned k, const std::string& minpoly, std::uint64_t p,
                     unsigned K, const std::string& sigma, const std::optional<std::vector<Complex>>& coeffs) {
    auto phase = make_phase(phase_name, k, minpoly);
    ScaleSpec scale(p, K);
    auto loc = sigma.empty() ? LocalizationVector::zeros(phase.size()) : LocalizationVector{parse_rational_list(sigma)};
    auto omega = IndexDomain::box(phase.dim(), scale.N());
    auto a = coeffs ? CoefficientVector(omega, *coeffs) : CoefficientVector::ones(omega);
    return Problem{std::move(phase), std::move(scale), std::move(loc), std::move(omega), std::move(a)};
}

ExecConfig exec_for(unsigned threads) {
    ExecConfig e;
    e.threads = threads;
    return e;
}

}  // namespace

PYBIND11_MODULE(_padicmv, m) {
    m.doc() = "Exponential-sum mean values over real and p-adic domains";

    // Later registrations are tried first, so the subclass goes last.
    const auto invalid = py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<UnsupportedPrime>(m, "UnsupportedPrime", invalid.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);

    m.def(
        "trace_powers",
        [](const std::string& minpoly, unsigned kappa_max) {
            std::vector<std::string> out;
            for (const auto& t : trace_powers(MinimalPolynomial::parse(minpoly), kappa_max)) out.push_back(t.str());
            return out;
        },
        py::arg("minpoly"), py::arg("kappa_max"), "Tr(alpha^kappa) for kappa = 0..kappa_max, as exact strings.");

    m.def(
        "phase_system",
        [](const std::string& minpoly, unsigned k) {
            const auto phase = expand_trace_phase(MinimalPolynomial::parse(minpoly), k);
            py::list out;
            for (const auto& c : phase.components()) {
                py::dict terms;
                for (const auto& t : c.terms) {
                    py::tuple key(t.exponents.size());
                    for (std::size_t i = 0; i < t.exponents.size(); ++i) key[i] = py::int_(t.exponents[i]);
                    terms[key] = t.coefficient.str();
                }
                py::dict comp;
                comp["j"] = c.j;
                comp["ell"] = c.ell;
                comp["degree"] = c.degree;
                comp["scale"] = c.scale.str();
                comp["terms"] = terms;
                out.append(comp);
            }
            return out;
        },
        py::arg("minpoly"), py::arg("k"), "Normalized trace phase components with their recorded scales.");

    m.def(
        "hensel_sqrt_minus_one", [](std::uint64_t p, unsigned K) { return to_py(hensel_sqrt_minus_one(p, K).xi); },
        py::arg("p"), py::arg("K"), "xi with xi^2 + 1 = 0 mod p^K, p = 1 mod 4.");

    m.def(
        "mv_padic",
        [](std::uint64_t p, unsigned K, long double r, const std::string& sigma, const std::string& phase, unsigned k,
           const std::string& minpoly, const std::optional<std::vector<Complex>>& coeffs, unsigned threads) {
            const auto pr = make_problem(phase, k, minpoly, p, K, sigma, coeffs);
            py::gil_scoped_release release;
            return static_cast<double>(
                padic_short_mv(pr.phase, pr.omega, pr.a, r, pr.scale, pr.sigma, exec_for(threads)).value);
        },
        py::arg("p"), py::arg("K"), py::arg("r"), py::arg("sigma") = "", py::arg("phase") = "parabola",
        py::arg("k") = 3, py::arg("minpoly") = "", py::arg("coeffs") = py::none(), py::arg("threads") = 1,
        "p-adic short mean value over the box [0, N)^d (coefficients default to 1).");

    m.def(
        "mv_real",
        [](std::uint64_t p, unsigned K, long double r, const std::string& sigma, const std::string& phase, unsigned k,
           const std::string& minpoly, const std::optional<std::vector<Complex>>& coeffs, unsigned threads) {
            const auto pr = make_problem(phase, k, minpoly, p, K, sigma, coeffs);
            py::gil_scoped_release release;
            const auto rep = real_sparse_mv(pr.phase, pr.omega, pr.a, r, pr.scale, pr.sigma, {}, exec_for(threads));
            return std::pair<double, double>(static_cast<double>(rep.value),
                                             static_cast<double>(rep.quadrature_error_bound));
        },
        py::arg("p"), py::arg("K"), py::arg("r"), py::arg("sigma") = "", py::arg("phase") = "parabola",
        py::arg("k") = 3, py::arg("minpoly") = "", py::arg("coeffs") = py::none(), py::arg("threads") = 1,
        "Real sparse mean value and its quadrature error estimate.");

    m.def(
        "transfer_check",
        [](std::uint64_t p, unsigned K, long double r, const std::string& sigma, const std::string& phase, unsigned k,
           const std::string& minpoly, const std::optional<std::vector<Complex>>& coeffs, unsigned threads) {
            const auto pr = make_problem(phase, k, minpoly, p, K, sigma, coeffs);
            TransferReport rep;
            {
                py::gil_scoped_release release;
                rep = transfer_check(pr.phase, pr.omega, pr.a, r, pr.scale, pr.sigma, {}, 1e-6L, {},
                                     exec_for(threads));
            }
            py::dict out;
            out["real_value"] = static_cast<double>(rep.real_value);
            out["padic_sup"] = static_cast<double>(rep.padic_sup);
            out["error_bound"] = static_cast<double>(rep.error_bound);
            out["grid_points"] = rep.grid_points;
            out["pass"] = rep.pass;
            return out;
        },
        py::arg("p"), py::arg("K"), py::arg("r"), py::arg("sigma") = "", py::arg("phase") = "parabola",
        py::arg("k") = 3, py::arg("minpoly") = "", py::arg("coeffs") = py::none(), py::arg("threads") = 1);

    m.def(
        "count_solutions",
        [](const std::string& minpoly, unsigned s, unsigned k, std::uint64_t N, const std::string& method,
           unsigned threads) {
            CountOptions opt;
            opt.threads = threads;
            SolutionCountRecord rec;
            {
                py::gil_scoped_release release;
                if (method == "hash") {
                    rec = count_solutions(MinimalPolynomial::parse(minpoly), s, k, N, opt);
                } else if (method == "brute") {
                    rec = count_solutions_brute(MinimalPolynomial::parse(minpoly), s, k, N, opt);
                } else {
                    throw InvalidInput("method must be hash or brute");
                }
            }
            return to_py(rec.J);
        },
        py::arg("minpoly"), py::arg("s"), py::arg("k"), py::arg("N"), py::arg("method") = "hash",
        py::arg("threads") = 1, "J_{s,k,d}(N; alpha) over ordered tuples.");

    m.def(
        "counterexample",
        [](std::uint64_t p, unsigned k, long double r, unsigned threads) {
            const auto fam = make_family(p, k, r);
            py::dict out;
            out["N"] = to_py(fam.scale.N());
            out["xi"] = to_py(fam.xi.xi);
            out["single_norm"] = static_cast<double>(single_norm(fam));
            out["sum_norm"] = static_cast<double>(sum_norm(fam, threads));
            out["ratio"] = static_cast<double>(decoupling_ratio(fam, threads));
            out["on_paraboloid"] = verify_paraboloid_membership(fam);
            return out;
        },
        py::arg("p"), py::arg("k"), py::arg("r"), py::arg("threads") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"padicmv"};
            full.insert(full.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const auto& a : full) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs one command in-process; returns (exit code, stdout, stderr).");
}
