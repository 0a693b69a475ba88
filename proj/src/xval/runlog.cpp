#include "qrl/xval/runlog.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qrl::xval {

std::string_view to_string(LogKind kind) {
    switch (kind) {
    case LogKind::Epsilon: return "epsilon";
    case LogKind::Eta: return "eta";
    case LogKind::Loss: return "loss";
    case LogKind::EpisodeReturn: return "episode_return";
    case LogKind::ValidationReturn: return "validation_return";
    case LogKind::Solved: return "solved";
    }
    throw std::logic_error("to_string: bad LogKind");
}

LogKind parse_log_kind(std::string_view s) {
    if (s == "epsilon") return LogKind::Epsilon;
    if (s == "eta") return LogKind::Eta;
    if (s == "loss") return LogKind::Loss;
    if (s == "episode_return") return LogKind::EpisodeReturn;
    if (s == "validation_return") return LogKind::ValidationReturn;
    if (s == "solved") return LogKind::Solved;
    throw std::invalid_argument("parse_log_kind: unknown kind '" + std::string(s) + "'");
}

std::vector<double> RunLog::series(LogKind kind) const {
    std::vector<double> out;
    for (const LogRow& r : rows)
        if (r.kind == kind) out.push_back(r.value);
    return out;
}

std::vector<long long> RunLog::steps_of(LogKind kind) const {
    std::vector<long long> out;
    for (const LogRow& r : rows)
        if (r.kind == kind) out.push_back(r.step);
    return out;
}

std::optional<long long> RunLog::solved_step() const {
    for (const LogRow& r : rows)
        if (r.kind == LogKind::Solved) return r.step;
    return std::nullopt;
}

std::string format_double(double v) {
    char buf[40];
    // exact integers print without an exponent (%g would render 10 as 1e+01);
    // below 2^53 the round trip through long long is lossless
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%s%lld", std::signbit(v) && v == 0.0 ? "-" : "",
                      static_cast<long long>(v));
        return buf;
    }
    // otherwise the lowest precision whose text parses back bit-exact
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const RunLog& log, std::ostream& out) {
    out << "step,kind,value\n";
    for (const LogRow& r : log.rows)
        out << r.step << ',' << to_string(r.kind) << ',' << format_double(r.value) << '\n';
}

void write_csv_file(const RunLog& log, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_csv_file: cannot open " + path.string());
    write_csv(log, f);
    if (!f.good()) throw std::runtime_error("write_csv_file: write failed for " + path.string());
}

RunLog read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "step,kind,value")
        throw std::runtime_error("read_csv: bad header '" + line + "'");

    RunLog log;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw std::runtime_error("read_csv: malformed row at line " + std::to_string(line_no));
        LogRow r;
        r.step = std::stoll(line.substr(0, c1));
        r.kind = parse_log_kind(line.substr(c1 + 1, c2 - c1 - 1));
        r.value = std::strtod(line.c_str() + c2 + 1, nullptr);
        log.rows.push_back(r);
    }
    return log;
}

RunLog read_csv_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_csv_file: cannot open " + path.string());
    return read_csv(f);
}

} // namespace qrl::xval
