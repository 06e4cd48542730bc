#pragma once

// Sparse subdomains of the torus R^k/Z^k: the union over index tuples iota,
// 0 <= iota_j < N^{|e_j| - sigma_j}, of the boxes centered at
// (iota_j N^{sigma_j - |e_j|})_j with half-widths N^{-|e_j|}/2.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "padicmv/csv.hpp"
#include "padicmv/exact_arith.hpp"
#include "padicmv/padic.hpp"

namespace padicmv {

inline constexpr std::uint64_t kDefaultCellBudget = 100'000'000;

/// sigma_1..sigma_k with 0 <= sigma_j <= |e_j| and sigma_j * K integral.
struct LocalizationVector {
    std::vector<Rational> sigma;

    static LocalizationVector zeros(std::size_t k) { return {std::vector<Rational>(k)}; }
    Rational total() const;
    std::string str() const;  ///< "0;1/2" form (semicolon separated, CSV-safe)
};

struct Cell {
    std::vector<std::uint64_t> iota;
    std::vector<Rational> center;
    std::vector<Rational> halfwidth;
};

class SparseDomain {
public:
    const ScaleSpec& scale() const { return scale_; }
    const LocalizationVector& sigma() const { return sigma_; }
    const std::vector<unsigned>& degrees() const { return degrees_; }
    std::size_t dim() const { return degrees_.size(); }

    /// N^{|e_j| - sigma_j}.
    const std::vector<BigInt>& cell_counts() const { return counts_; }
    /// Exponent of p in cell_counts()[j], i.e. (|e_j| - sigma_j) K.
    const std::vector<unsigned>& count_exponents() const { return count_exp_; }
    /// N^{-|e_j|} / 2.
    const std::vector<Rational>& cell_halfwidths() const { return halfwidths_; }
    /// N^{sigma_j - |e_j|}: spacing between consecutive centers on axis j.
    Rational spacing(std::size_t j) const;

    BigInt total_cells() const;
    /// product_j cell_counts_j * 2 * halfwidth_j = N^{-sum sigma}.
    Rational measure() const;

private:
    friend SparseDomain build_domain(const ScaleSpec&, const LocalizationVector&, const std::vector<unsigned>&);
    SparseDomain(ScaleSpec scale, LocalizationVector sigma, std::vector<unsigned> degrees);

    ScaleSpec scale_;
    LocalizationVector sigma_;
    std::vector<unsigned> degrees_;
    std::vector<BigInt> counts_;
    std::vector<unsigned> count_exp_;
    std::vector<Rational> halfwidths_;
};

/// Throws InvalidInput if sigma_j K is not an integer, sigma_j lies outside
/// [0, |e_j|], or the lengths disagree.
SparseDomain build_domain(const ScaleSpec& scale, const LocalizationVector& sigma,
                          const std::vector<unsigned>& degrees);

/// Visits every cell in lexicographic order of iota (last axis fastest).
/// Throws ResourceError naming the cell count if it exceeds `budget`.
void enumerate_cells(const SparseDomain& domain, const std::function<void(const Cell&)>& visit,
                     std::uint64_t budget = kDefaultCellBudget);

/// The cell listing as a table (no comments).
CsvTable cell_table(const SparseDomain& domain, std::uint64_t budget = kDefaultCellBudget);

/// One row per cell: iota_j..., center_j..., halfwidth_j... as exact rationals.
void emit_cell_csv(const SparseDomain& domain, const std::filesystem::path& path,
                   const std::vector<std::string>& comments = {},
                   std::uint64_t budget = kDefaultCellBudget);

}  // namespace padicmv
