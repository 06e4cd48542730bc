#include "padicmv/quadrature.hpp"

#include <cmath>

#include <boost/math/special_functions/legendre.hpp>

#include "padicmv/errors.hpp"

namespace padicmv {

GaussRule gauss_legendre(unsigned order) {
    if (order == 0 || order > 64) throw InvalidInput("quadrature order must be in [1, 64]");
    // legendre_p_zeros returns the nonnegative zeros in increasing order.
    const auto pos = boost::math::legendre_p_zeros<long double>(static_cast<int>(order));
    GaussRule rule;
    auto weight = [order](long double x) {
        const long double dp = boost::math::legendre_p_prime<long double>(static_cast<int>(order), x);
        return 2.0L / ((1.0L - x * x) * dp * dp);
    };
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
        if (*it == 0.0L) continue;
        rule.nodes.push_back(-*it);
        rule.weights.push_back(weight(*it));
    }
    for (long double x : pos) {
        rule.nodes.push_back(x);
        rule.weights.push_back(weight(x));
    }
    return rule;
}

TensorRule::TensorRule(const std::vector<long double>& halfwidths, unsigned order, unsigned depth)
    : order_(order), depth_(depth) {
    if (depth > 20) throw InvalidInput("quadrature depth must be at most 20");
    const GaussRule base = gauss_legendre(order);
    const std::uint64_t sub = std::uint64_t{1} << depth;
    for (long double h : halfwidths) {
        Axis axis;
        const long double width = 2 * h / static_cast<long double>(sub);
        for (std::uint64_t s = 0; s < sub; ++s) {
            const long double mid = -h + (static_cast<long double>(s) + 0.5L) * width;
            for (std::size_t i = 0; i < base.nodes.size(); ++i) {
                axis.x.push_back(mid + 0.5L * width * base.nodes[i]);
                axis.w.push_back(base.weights[i] / (2.0L * static_cast<long double>(sub)));
            }
        }
        if (size_ > (std::uint64_t{1} << 62) / axis.x.size()) throw ResourceError("quadrature rule too large");
        size_ *= axis.x.size();
        axes_.push_back(std::move(axis));
    }
}

long double TensorRule::node(std::uint64_t index, std::vector<long double>& v) const {
    v.resize(axes_.size());
    long double w = 1;
    for (std::size_t j = axes_.size(); j-- > 0;) {
        const std::uint64_t n = axes_[j].x.size();
        const std::uint64_t i = index % n;
        index /= n;
        v[j] = axes_[j].x[i];
        w *= axes_[j].w[i];
    }
    return w;
}

unsigned auto_depth(const std::vector<long double>& halfwidths, const std::vector<long double>& phase_bounds,
                    long double max_variation) {
    if (!(max_variation > 0)) throw InvalidInput("max phase variation must be positive");
    unsigned s = 0;
    for (std::size_t j = 0; j < halfwidths.size(); ++j) {
        long double variation = 2 * halfwidths[j] * phase_bounds[j];
        unsigned sj = 0;
        while (variation > max_variation && sj < 20) {
            variation /= 2;
            ++sj;
        }
        s = std::max(s, sj);
    }
    return s;
}

}  // namespace padicmv
