#include "padicmv/domains.hpp"

#include <sstream>

#include "padicmv/errors.hpp"

namespace padicmv {

Rational LocalizationVector::total() const {
    Rational t;
    for (const auto& s : sigma) t += s;
    return t;
}

std::string LocalizationVector::str() const {
    std::string out;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (i) out += ';';
        out += sigma[i].str();
    }
    return out;
}

SparseDomain::SparseDomain(ScaleSpec scale, LocalizationVector sigma, std::vector<unsigned> degrees)
    : scale_(std::move(scale)), sigma_(std::move(sigma)), degrees_(std::move(degrees)) {}

Rational SparseDomain::spacing(std::size_t j) const { return Rational(1) / Rational(counts_[j]); }

BigInt SparseDomain::total_cells() const {
    BigInt t = 1;
    for (const auto& c : counts_) t *= c;
    return t;
}

Rational SparseDomain::measure() const {
    Rational m(1);
    for (std::size_t j = 0; j < dim(); ++j) m *= Rational(counts_[j]) * Rational(2) * halfwidths_[j];
    return m;
}

SparseDomain build_domain(const ScaleSpec& scale, const LocalizationVector& sigma,
                          const std::vector<unsigned>& degrees) {
    if (sigma.sigma.size() != degrees.size()) {
        throw InvalidInput("sigma has " + std::to_string(sigma.sigma.size()) + " entries but the phase has " +
                           std::to_string(degrees.size()) + " components");
    }
    SparseDomain dom(scale, sigma, degrees);
    const Rational K(static_cast<long>(scale.K()));
    for (std::size_t j = 0; j < degrees.size(); ++j) {
        const Rational& s = sigma.sigma[j];
        if (s.sign() < 0 || s > Rational(static_cast<long>(degrees[j]))) {
            throw InvalidInput("sigma_" + std::to_string(j + 1) + " = " + s.str() + " outside [0, " +
                               std::to_string(degrees[j]) + "]");
        }
        const Rational sK = s * K;
        if (!sK.is_integer()) {
            throw InvalidInput("sigma_" + std::to_string(j + 1) + " * K = " + sK.str() + " is not an integer");
        }
        const long e = static_cast<long>(degrees[j]) * static_cast<long>(scale.K()) - sK.num().get_si();
        dom.count_exp_.push_back(static_cast<unsigned>(e));
        dom.counts_.push_back(scale.power(static_cast<unsigned>(e)));
        dom.halfwidths_.push_back(Rational(1, 2 * scale.power(degrees[j] * scale.K())));
    }
    return dom;
}

void enumerate_cells(const SparseDomain& domain, const std::function<void(const Cell&)>& visit,
                     std::uint64_t budget) {
    const BigInt total = domain.total_cells();
    if (total > BigInt(static_cast<unsigned long>(budget))) {
        throw ResourceError("domain has " + total.get_str() + " cells, over the enumeration budget of " +
                            std::to_string(budget));
    }
    const std::size_t k = domain.dim();
    std::vector<std::uint64_t> counts;
    for (const auto& c : domain.cell_counts()) counts.push_back(c.get_ui());
    Cell cell;
    cell.iota.assign(k, 0);
    cell.halfwidth = domain.cell_halfwidths();
    std::vector<Rational> spacing;
    for (std::size_t j = 0; j < k; ++j) spacing.push_back(domain.spacing(j));
    cell.center.assign(k, Rational(0));
    while (true) {
        for (std::size_t j = 0; j < k; ++j) {
            cell.center[j] = Rational(BigInt(static_cast<unsigned long>(cell.iota[j]))) * spacing[j];
        }
        visit(cell);
        std::size_t j = k;
        while (j > 0) {
            --j;
            if (++cell.iota[j] < counts[j]) break;
            cell.iota[j] = 0;
            if (j == 0) return;
        }
        if (k == 0) return;
    }
}

CsvTable cell_table(const SparseDomain& domain, std::uint64_t budget) {
    CsvTable t;
    const std::size_t k = domain.dim();
    for (const char* prefix : {"iota_", "center_", "halfwidth_"}) {
        for (std::size_t j = 1; j <= k; ++j) t.header.push_back(prefix + std::to_string(j));
    }
    enumerate_cells(
        domain,
        [&](const Cell& c) {
            std::vector<std::string> row;
            row.reserve(3 * k);
            for (auto i : c.iota) row.push_back(std::to_string(i));
            for (const auto& x : c.center) row.push_back(x.str());
            for (const auto& h : c.halfwidth) row.push_back(h.str());
            t.rows.push_back(std::move(row));
        },
        budget);
    return t;
}

void emit_cell_csv(const SparseDomain& domain, const std::filesystem::path& path,
                   const std::vector<std::string>& comments, std::uint64_t budget) {
    CsvTable t = cell_table(domain, budget);
    t.comments = comments;
    t.write(path);
}

}  // namespace padicmv
