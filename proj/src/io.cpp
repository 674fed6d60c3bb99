#include "pathqv/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "pathqv/error.hpp"

namespace pathqv {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& raw, std::size_t line) {
    const std::string cell = trim(raw);
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (!cell.empty() && *begin == '+') ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (cell.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
        throw ValidationError("line " + std::to_string(line) + ": non-numeric cell '" + cell + "'");
    return v;
}

}  // namespace

SampledPath load_csv(std::istream& in, std::optional<double> horizon) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty()) header = split(line);
    }
    if (header.empty()) throw ValidationError("empty CSV input");
    if (trim(header.front()) != "t")
        throw ValidationError("line " + std::to_string(lineno) + ": header must start with 't'");
    if (header.size() < 2)
        throw ValidationError("line " + std::to_string(lineno) + ": header has no value columns");
    const std::size_t d = header.size() - 1;

    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw ValidationError("line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(header.size()) + " columns, found " +
                                  std::to_string(cells.size()));
        const double t = parse_number(cells[0], lineno);
        if (times.empty() && t != 0.0)
            throw ValidationError("line " + std::to_string(lineno) + ": first time must be 0");
        if (!times.empty() && t == times.back())
            throw ValidationError("line " + std::to_string(lineno) + ": duplicate time");
        if (!times.empty() && t < times.back())
            throw ValidationError("line " + std::to_string(lineno) + ": times not increasing");
        times.push_back(t);
        for (std::size_t i = 1; i <= d; ++i) values.push_back(parse_number(cells[i], lineno));
    }
    if (times.empty()) throw ValidationError("CSV has a header but no samples");
    double T = horizon ? *horizon : times.back();
    if (!horizon && T == 0.0) T = 1.0;
    if (T < times.back()) throw ValidationError("horizon precedes the last sample time");
    return SampledPath(std::move(times), std::move(values), d, T);
}

SampledPath load_csv_file(const std::string& filename, std::optional<double> horizon) {
    std::ifstream in(filename);
    if (!in) throw ValidationError("cannot open '" + filename + "'");
    return load_csv(in, horizon);
}

void write_csv(const SampledPath& path, std::ostream& out) {
    out << 't';
    for (std::size_t i = 1; i <= path.dim(); ++i) out << ",x" << i;
    out << '\n';
    for (std::size_t k = 0; k < path.size(); ++k) {
        out << format_double(path.time(k));
        for (std::size_t i = 0; i < path.dim(); ++i) out << ',' << format_double(path.value(k, i));
        out << '\n';
    }
}

void write_partition_csv(const Partition& partition, std::ostream& out) {
    out << "k,t\n";
    for (std::size_t k = 0; k < partition.times.size(); ++k)
        out << k << ',' << format_double(partition.times[k]) << '\n';
}

Partition load_partition_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    Partition p;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (header) {
            if (cells.size() != 2 || trim(cells[0]) != "k" || trim(cells[1]) != "t")
                throw ValidationError("line " + std::to_string(lineno) + ": expected header 'k,t'");
            header = false;
            continue;
        }
        if (cells.size() != 2)
            throw ValidationError("line " + std::to_string(lineno) + ": expected 2 columns");
        p.times.push_back(parse_number(cells[1], lineno));
    }
    if (header) throw ValidationError("empty partition CSV");
    return p;
}

nlohmann::json to_json(const Partition& partition) {
    return {{"times", partition.times}, {"exhausted", partition.exhausted}};
}

nlohmann::json to_json(const LebesgueTrace& trace) {
    std::vector<double> levels;
    for (std::size_t k = 0; k < trace.levels.size(); ++k) levels.push_back(trace.level_value(k));
    return {{"kind", "lebesgue"},
            {"level", trace.level},
            {"partition", to_json(trace.partition)},
            {"dyadic_index", trace.levels},
            {"dyadic_value", levels}};
}

nlohmann::json to_json(const DrawTrace& trace) {
    std::vector<std::string> dirs;
    for (std::size_t k = 1; k < trace.direction.size(); ++k)
        dirs.push_back(trace.direction[k] == Direction::up ? "up" : "down");
    return {{"kind", "drawupdown"},
            {"level", trace.level},
            {"threshold", trace.threshold},
            {"rho", trace.rho},
            {"directions", dirs},
            {"intra", trace.intra},
            {"i_kn", trace.last_before_next},
            {"next_reached", trace.next_reached},
            {"partition", to_json(trace.combined)}};
}

nlohmann::json to_json(const ConvergenceReport& report) {
    nlohmann::json j{{"levels", report.levels},
                     {"sup_diffs", report.sup_diffs},
                     {"converged", report.converged},
                     {"tol", report.tol},
                     {"achieved_tol", report.achieved_tol}};
    j["converged_at"] = report.converged_at ? nlohmann::json(*report.converged_at) : nlohmann::json();
    return j;
}

void write_qv_csv(const QVMatrixProcess& qv, std::ostream& out) {
    const std::size_t d = qv.dim();
    out << 't';
    for (const char* prefix : {"qv_", "jump_"})
        for (std::size_t i = 1; i <= d; ++i)
            for (std::size_t j = 1; j <= d; ++j) out << ',' << prefix << i << j;
    out << '\n';
    for (std::size_t k = 0; k < qv.matrices.size(); ++k) {
        out << format_double(qv.matrices.times()[k]);
        for (const MatrixProcess* m : {&qv.matrices, &qv.jump_part})
            for (double v : m->matrix(k)) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_tv_csv(const TVResult& tv, std::ostream& out) {
    out << "t,tv_running\n";
    for (std::size_t k = 0; k < tv.times.size(); ++k)
        out << format_double(tv.times[k]) << ',' << format_double(tv.running[k]) << '\n';
}

void write_integral_csv(const IntegralProcess& process, std::ostream& out) {
    out << "t,value\n";
    for (std::size_t k = 0; k < process.times.size(); ++k)
        out << format_double(process.times[k]) << ',' << format_double(process.values[k]) << '\n';
}

}  // namespace pathqv
