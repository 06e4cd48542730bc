#include "padicmv/vinogradov.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "padicmv/errors.hpp"
#include "padicmv/parallel.hpp"
#include "padicmv/rng.hpp"

namespace padicmv {

std::string to_string(CountMethod m) {
    switch (m) {
        case CountMethod::Hash: return "hash";
        case CountMethod::Brute: return "brute";
        case CountMethod::Formal: return "formal";
    }
    return "?";
}

namespace {

using u128 = unsigned __int128;

std::uint64_t checked_power(std::uint64_t base, unsigned exp, std::uint64_t cap, const char* what) {
    std::uint64_t out = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && out > cap / base) {
            throw ResourceError(std::string(what) + " " + std::to_string(base) + "^" + std::to_string(exp) +
                                " exceeds the budget of " + std::to_string(cap));
        }
        out *= base;
    }
    return out;
}

void validate(unsigned d, unsigned s, unsigned k, std::uint64_t N) {
    if (d == 0 || s == 0 || k == 0) throw InvalidInput("d, s and k must be positive");
    if (N == 0) throw InvalidInput("N must be positive");
}

/// Point n in [0, N)^d from its linear index, first coordinate slowest.
std::vector<std::int64_t> unrank(std::uint64_t idx, unsigned d, std::uint64_t N) {
    std::vector<std::int64_t> n(d);
    for (unsigned l = d; l-- > 0;) {
        n[l] = static_cast<std::int64_t>(idx % N);
        idx /= N;
    }
    return n;
}

// Open-addressing multiset of fixed-length int64 keys.
class KeyCounter {
public:
    explicit KeyCounter(std::size_t width) : width_(width) { rehash(1024); }

    void add(const std::int64_t* key, std::uint64_t h) {
        if (2 * (used_ + 1) > cap_) rehash(2 * cap_);
        std::size_t slot = h & (cap_ - 1);
        while (count_[slot] != 0) {
            if (std::equal(key, key + width_, &keys_[slot * width_])) {
                ++count_[slot];
                return;
            }
            slot = (slot + 1) & (cap_ - 1);
        }
        std::copy(key, key + width_, &keys_[slot * width_]);
        hash_[slot] = h;
        count_[slot] = 1;
        ++used_;
    }

    u128 sum_of_squares() const {
        u128 out = 0;
        for (std::uint64_t c : count_) out += u128(c) * c;
        return out;
    }

private:
    void rehash(std::size_t cap) {
        std::vector<std::int64_t> keys(cap * width_);
        std::vector<std::uint64_t> count(cap, 0), hash(cap, 0);
        for (std::size_t i = 0; i < cap_; ++i) {
            if (count_[i] == 0) continue;
            std::size_t slot = hash_[i] & (cap - 1);
            while (count[slot] != 0) slot = (slot + 1) & (cap - 1);
            std::copy(&keys_[i * width_], &keys_[i * width_] + width_, &keys[slot * width_]);
            count[slot] = count_[i];
            hash[slot] = hash_[i];
        }
        keys_ = std::move(keys);
        count_ = std::move(count);
        hash_ = std::move(hash);
        cap_ = cap;
    }

    std::size_t width_;
    std::size_t cap_ = 0;
    std::size_t used_ = 0;
    std::vector<std::int64_t> keys_;
    std::vector<std::uint64_t> count_;
    std::vector<std::uint64_t> hash_;
};

std::uint64_t hash_key(const std::int64_t* key, std::size_t width) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (std::size_t i = 0; i < width; ++i) h = CounterRng::mix(h ^ static_cast<std::uint64_t>(key[i]));
    return h;
}

// Visits every ordered s-tuple of points with the running vector sum.
template <class T, class Visit>
void for_each_tuple(const std::vector<std::vector<T>>& vecs, unsigned s, Visit&& visit) {
    const std::size_t n = vecs.size();
    const std::size_t width = vecs.front().size();
    std::vector<std::size_t> idx(s, 0);
    std::vector<std::vector<T>> prefix(s, std::vector<T>(width));
    auto rebuild = [&](unsigned from) {
        for (unsigned i = from; i < s; ++i) {
            for (std::size_t c = 0; c < width; ++c) {
                prefix[i][c] = (i == 0 ? T(0) : prefix[i - 1][c]) + vecs[idx[i]][c];
            }
        }
    };
    rebuild(0);
    while (true) {
        visit(prefix[s - 1]);
        unsigned pos = s;
        while (pos-- > 0) {
            if (++idx[pos] < n) break;
            idx[pos] = 0;
        }
        if (pos == static_cast<unsigned>(-1)) return;
        rebuild(pos);
    }
}

/// J = sum of multiplicity^2 over tuple sums of the per-point vectors.
BigInt count_from_vectors(const std::vector<std::vector<BigInt>>& vecs, unsigned s, const CountOptions& opt) {
    const std::uint64_t total = checked_power(vecs.size(), s, opt.key_budget, "tuple count");
    const std::size_t width = vecs.front().size();
    BigInt maxabs = 0;
    for (const auto& v : vecs) {
        for (const auto& x : v) maxabs = std::max<BigInt>(maxabs, abs(x));
    }
    const std::uint64_t passes_for_memory = (total + opt.pass_size - 1) / std::max<std::uint64_t>(1, opt.pass_size);
    const std::uint64_t passes =
        std::max<std::uint64_t>({1, passes_for_memory, total >= (1u << 16) ? std::uint64_t{opt.threads} : 1});
    std::vector<BigInt> partial(passes);

    if (maxabs * s < BigInt("4611686018427387904")) {
        std::vector<std::vector<std::int64_t>> small(vecs.size(), std::vector<std::int64_t>(width));
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            for (std::size_t c = 0; c < width; ++c) small[i][c] = vecs[i][c].get_si();
        }
        parallel_chunks(passes, opt.threads, [&](std::size_t pass) {
            KeyCounter counter(width);
            for_each_tuple(small, s, [&](const std::vector<std::int64_t>& key) {
                const std::uint64_t h = hash_key(key.data(), width);
                if (passes > 1 && CounterRng::mix(h) % passes != pass) return;
                counter.add(key.data(), h);
            });
            const u128 sq = counter.sum_of_squares();
            partial[pass] = BigInt(static_cast<unsigned long>(sq >> 64));
            partial[pass] <<= 64;
            partial[pass] += BigInt(static_cast<unsigned long>(sq & 0xffffffffffffffffULL));
        });
    } else {
        parallel_chunks(passes, opt.threads, [&](std::size_t pass) {
            std::unordered_map<std::string, std::uint64_t> counter;
            for_each_tuple(vecs, s, [&](const std::vector<BigInt>& key) {
                std::string text;
                for (const auto& x : key) {
                    text += x.get_str(32);
                    text += ',';
                }
                const std::uint64_t h = std::hash<std::string>{}(text);
                if (passes > 1 && CounterRng::mix(h) % passes != pass) return;
                ++counter[text];
            });
            BigInt sum = 0;
            for (const auto& [key, c] : counter) sum += BigInt(static_cast<unsigned long>(c)) * c;
            partial[pass] = sum;
        });
    }
    BigInt J = 0;
    for (const auto& x : partial) J += x;
    return J;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SolutionCountRecord count_solutions(const MinimalPolynomial& P, unsigned s, unsigned k, std::uint64_t N,
                                    const CountOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned d = P.degree();
    validate(d, s, k, N);
    const std::uint64_t points = checked_power(N, d, opt.key_budget, "point count");
    checked_power(points, s, opt.key_budget, "tuple count");

    // gamma = c alpha has minimal polynomial sum_i c_i c^{d-i} x^i + x^d.
    BigInt c = 1;
    for (const auto& ci : P.coefficients()) mpz_lcm(c.get_mpz_t(), c.get_mpz_t(), ci.den().get_mpz_t());
    std::vector<Rational> q(d);
    for (unsigned i = 0; i < d; ++i) q[i] = P.coefficients()[i] * Rational(bigint_pow(c, d - i));
    const MinimalPolynomial Q(q);

    std::vector<std::vector<BigInt>> vecs(points);
    for (std::uint64_t idx = 0; idx < points; ++idx) {
        const auto n = unrank(idx, d, N);
        FieldElement beta = FieldElement::zero(d);
        for (unsigned l = 0; l < d; ++l) {
            beta.coords[l] = Rational(BigInt(static_cast<long>(n[l]))) * Rational(bigint_pow(c, d - 1 - l));
        }
        FieldElement pw = beta;
        for (unsigned t = 1; t <= k; ++t) {
            if (t > 1) pw = field_multiply(pw, beta, Q);
            for (const auto& x : pw.coords) vecs[idx].push_back(x.num());
        }
    }
    SolutionCountRecord rec{d, s, k, N, P.str(), count_from_vectors(vecs, s, opt), CountMethod::Hash, 0};
    if (opt.timing) rec.seconds = elapsed_since(t0);
    return rec;
}

SolutionCountRecord count_solutions_brute(const MinimalPolynomial& P, unsigned s, unsigned k, std::uint64_t N,
                                          const CountOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned d = P.degree();
    validate(d, s, k, N);
    const std::uint64_t points = checked_power(N, d, 100'000'000, "point count");
    const std::uint64_t tuples = checked_power(points, s, 100'000'000, "tuple count");
    checked_power(tuples, 2, 100'000'000, "pair count");

    std::vector<FieldElement> beta(points);
    for (std::uint64_t idx = 0; idx < points; ++idx) {
        const auto n = unrank(idx, d, N);
        beta[idx] = FieldElement::zero(d);
        for (unsigned l = 0; l < d; ++l) beta[idx].coords[l] = Rational(static_cast<long>(n[l]));
    }
    // keys[t][i]: the t-th power sum of tuple i.
    std::vector<std::vector<FieldElement>> keys(tuples);
    for (std::uint64_t i = 0; i < tuples; ++i) {
        std::vector<FieldElement> sums(k, FieldElement::zero(d));
        std::uint64_t rest = i;
        for (unsigned j = 0; j < s; ++j) {
            const auto& b = beta[rest % points];
            rest /= points;
            FieldElement pw = FieldElement::one(d);
            for (unsigned t = 0; t < k; ++t) {
                pw = field_multiply(pw, b, P);
                sums[t] = field_add(sums[t], pw);
            }
        }
        keys[i] = std::move(sums);
    }
    std::uint64_t J = 0;
    for (std::uint64_t i = 0; i < tuples; ++i) {
        for (std::uint64_t j = 0; j < tuples; ++j) {
            if (keys[i] == keys[j]) ++J;
        }
    }
    SolutionCountRecord rec{d, s, k, N, P.str(), BigInt(static_cast<unsigned long>(J)), CountMethod::Brute, 0};
    if (opt.timing) rec.seconds = elapsed_since(t0);
    return rec;
}

SolutionCountRecord count_solutions_formal(unsigned d, unsigned s, unsigned k, std::uint64_t N,
                                           const CountOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(d, s, k, N);
    const std::uint64_t points = checked_power(N, d, opt.key_budget, "point count");
    checked_power(points, s, opt.key_budget, "tuple count");
    std::vector<std::vector<BigInt>> vecs(points);
    for (std::uint64_t idx = 0; idx < points; ++idx) {
        const auto n = unrank(idx, d, N);
        std::vector<BigInt> pw{BigInt(1)};
        for (unsigned t = 1; t <= k; ++t) {
            std::vector<BigInt> next(pw.size() + d - 1, BigInt(0));
            for (std::size_t a = 0; a < pw.size(); ++a) {
                for (unsigned l = 0; l < d; ++l) next[a + l] += pw[a] * n[l];
            }
            pw = std::move(next);
            vecs[idx].insert(vecs[idx].end(), pw.begin(), pw.end());
        }
    }
    SolutionCountRecord rec{d, s, k, N, "", count_from_vectors(vecs, s, opt), CountMethod::Formal, 0};
    if (opt.timing) rec.seconds = elapsed_since(t0);
    return rec;
}

LineFit fit_line(const std::vector<long double>& x, const std::vector<long double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidInput("line fit needs at least two points");
    const long double n = static_cast<long double>(x.size());
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    long double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw InvalidInput("line fit needs distinct abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

long double vinogradov_envelope(unsigned d, unsigned s, unsigned k) {
    const long double ds = static_cast<long double>(d) * s;
    return std::max(ds, 2 * ds - static_cast<long double>(d) * k * (k + 1) / 2);
}

GrowthFit fit_growth(const MinimalPolynomial& P, unsigned s, unsigned k, const std::vector<std::uint64_t>& Ns,
                     const CountOptions& opt) {
    if (Ns.size() < 3) throw InvalidInput("growth fit needs at least three values of N");
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (Ns[i] < 2) throw InvalidInput("growth fit needs N >= 2");
        if (i > 0 && Ns[i] <= Ns[i - 1]) throw InvalidInput("N list must be strictly increasing");
    }
    GrowthFit fit;
    fit.d = P.degree();
    fit.s = s;
    fit.k = k;
    fit.envelope = vinogradov_envelope(fit.d, s, k);
    std::vector<long double> xs, ys;
    for (auto N : Ns) {
        const auto rec = count_solutions(P, s, k, N, opt);
        GrowthPoint pt;
        pt.N = N;
        pt.J = rec.J;
        pt.log_N = std::log(static_cast<long double>(N));
        pt.log_J = std::log(Rational(rec.J).to_long_double());
        xs.push_back(pt.log_N);
        ys.push_back(pt.log_J);
        fit.points.push_back(pt);
    }
    const auto line = fit_line(xs, ys);
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    for (auto& pt : fit.points) pt.residual = pt.log_J - (line.slope * pt.log_N + line.intercept);
    return fit;
}

CsvTable solution_count_table(const std::vector<SolutionCountRecord>& records) {
    CsvTable t;
    t.header = {"d", "s", "k", "N", "minpoly", "J", "method", "seconds"};
    for (const auto& r : records) {
        const std::string poly = r.method == CountMethod::Formal ? "formal" : MinimalPolynomial::parse(r.minpoly).pretty();
        t.rows.push_back({std::to_string(r.d), std::to_string(r.s), std::to_string(r.k), std::to_string(r.N), poly,
                          r.J.get_str(), to_string(r.method), r.seconds > 0 ? format_real(r.seconds) : ""});
    }
    return t;
}

}  // namespace padicmv
