#include "padicmv/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace padicmv {

void CsvTable::write(std::ostream& os) const {
    for (const auto& c : comments) os << "# " << c << '\n';
    auto emit = [&os](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            os << fields[i];
        }
        os << '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
}

void CsvTable::write(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write(os);
    if (!os) throw std::runtime_error("write to " + path.string() + " failed");
}

std::string format_real(long double x) {
    char buf[64];
    for (int prec = 6; prec <= 21; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*Lg", prec, x);
        if (std::strtold(buf, nullptr) == x) return buf;
    }
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace padicmv
