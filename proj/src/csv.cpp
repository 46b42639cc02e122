#include "causalbic/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "causalbic/errors.hpp"

namespace causalbic {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void data_error(std::size_t line, const std::string& what) {
    throw InputError("line " + std::to_string(line) + ": " + what);
}

double parse_value(const std::string& cell, std::size_t line) {
    if (cell.empty()) data_error(line, "empty value cell");
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(value)) {
        data_error(line, "non-numeric value '" + cell + "'");
    }
    return value;
}

InterventionTarget parse_target(const std::string& cell, int p, std::size_t line) {
    if (cell.empty()) return InterventionTarget{};
    VertexSet members = 0;
    for (const std::string& label : split(cell, ';')) {
        char* end = nullptr;
        const long v = std::strtol(label.c_str(), &end, 10);
        if (label.empty() || end != label.c_str() + label.size()) data_error(line, "bad target label '" + label + "'");
        if (v < 1 || v > p) data_error(line, "target label " + label + " outside 1.." + std::to_string(p));
        members |= singleton(static_cast<int>(v - 1));
    }
    return InterventionTarget(members);
}

}  // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw InputError("line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split(line, ',');
    if (header.size() < 2 || header[0] != "target") data_error(1, "header must be 'target,x1,...,xp'");
    const int p = static_cast<int>(header.size()) - 1;
    if (p > kMaxVertices) throw CapacityError("at most 64 variables supported");
    Dataset data(p);
    std::vector<double> x(static_cast<std::size_t>(p));
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line, ',');
        if (cells.size() != header.size()) {
            data_error(line_no, "expected " + std::to_string(header.size()) + " columns, got " +
                                    std::to_string(cells.size()));
        }
        const InterventionTarget target = parse_target(cells[0], p, line_no);
        for (int j = 0; j < p; ++j) x[static_cast<std::size_t>(j)] = parse_value(cells[static_cast<std::size_t>(j) + 1], line_no);
        data.add_row(target, x);
    }
    return data;
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    out << "target";
    for (int j = 1; j <= data.dimension(); ++j) out << ",x" << j;
    out << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data.target(i).to_string();
        for (double v : data.row(i)) out << ',' << format_double(v);
        out << '\n';
    }
}

TargetFamily family_from_dataset(const Dataset& data) {
    if (data.empty()) throw InputError("empty dataset has no target family");
    std::set<InterventionTarget> seen;
    for (std::size_t i = 0; i < data.size(); ++i) seen.insert(data.target(i));
    return TargetFamily(std::vector<InterventionTarget>(seen.begin(), seen.end()));
}

}  // namespace causalbic
