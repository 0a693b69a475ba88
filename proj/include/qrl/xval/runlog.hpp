#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace qrl::xval {

// Row kinds of a training-run log. epsilon and eta are sampled at the
// validation cadence, loss once per training step, episode_return at each
// episode end, validation_return per greedy evaluation, and a single solved
// row marks early termination.
enum class LogKind { Epsilon, Eta, Loss, EpisodeReturn, ValidationReturn, Solved };

std::string_view to_string(LogKind kind);
LogKind parse_log_kind(std::string_view s); // throws std::invalid_argument

struct LogRow {
    long long step = 0;
    LogKind kind = LogKind::Epsilon;
    double value = 0.0;

    bool operator==(const LogRow&) const = default;
};

struct RunLog {
    std::vector<LogRow> rows;

    void add(long long step, LogKind kind, double value) { rows.push_back({step, kind, value}); }

    std::vector<double> series(LogKind kind) const;
    std::vector<long long> steps_of(LogKind kind) const;
    std::optional<long long> solved_step() const;

    bool operator==(const RunLog&) const = default;
};

// CSV with the exact header "step,kind,value". Values print with enough
// digits to round-trip, so read_csv(write_csv(log)) == log.
void write_csv(const RunLog& log, std::ostream& out);
void write_csv_file(const RunLog& log, const std::filesystem::path& path);
RunLog read_csv(std::istream& in);
RunLog read_csv_file(const std::filesystem::path& path);

// shortest decimal form that parses back to exactly the same double
std::string format_double(double v);

} // namespace qrl::xval
