#pragma once

// Tensor-product Gauss-Legendre rules on the centered box
// R = prod_j [-h_j, h_j], each axis split into 2^s equal subintervals.

#include <cstdint>
#include <vector>

namespace padicmv {

struct QuadratureConfig {
    unsigned order = 4;                      ///< Gauss-Legendre nodes per subinterval and axis
    int depth = -1;                          ///< dyadic subdivision depth; -1 picks it from the phase bound
    long double max_phase_variation = 0.25;  ///< target periods of e(v P_j(n)) across one subinterval
};

/// Nodes and weights on [-1, 1]; weights sum to 2.
struct GaussRule {
    std::vector<long double> nodes;
    std::vector<long double> weights;
};
GaussRule gauss_legendre(unsigned order);

/// A product rule with weights normalized to sum to 1 (an average over R).
class TensorRule {
public:
    TensorRule(const std::vector<long double>& halfwidths, unsigned order, unsigned depth);

    std::size_t dim() const { return axes_.size(); }
    std::uint64_t size() const { return size_; }
    unsigned order() const { return order_; }
    unsigned depth() const { return depth_; }

    /// Node `index` (last axis fastest) into `v`; returns its weight.
    long double node(std::uint64_t index, std::vector<long double>& v) const;

private:
    struct Axis {
        std::vector<long double> x;
        std::vector<long double> w;
    };
    std::vector<Axis> axes_;
    std::uint64_t size_ = 1;
    unsigned order_;
    unsigned depth_;
};

/// Smallest s >= 0 with max_j (2 h_j / 2^s) * bound_j <= max_variation.
unsigned auto_depth(const std::vector<long double>& halfwidths, const std::vector<long double>& phase_bounds,
                    long double max_variation);

}  // namespace padicmv
