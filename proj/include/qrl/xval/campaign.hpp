#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qrl/xval/config.hpp"
#include "qrl/xval/runlog.hpp"

namespace qrl::xval {

struct RunSpec {
    HyperParams hp;
    std::uint64_t seed = 0;
};

// Deterministic name, a hash of the canonical config text plus the seed:
// run_<16 hex digits>_s<seed>.csv. Completed files identify themselves by
// name alone, which is what makes campaigns resumable.
std::string run_filename(const HyperParams& hp, std::uint64_t seed);

struct CampaignResult {
    std::vector<std::filesystem::path> files; // one per spec, spec order
    int executed = 0;
    int skipped = 0;
};

// Runs every spec whose output file does not exist yet, up to `parallelism`
// at a time, and writes one run CSV each. Present files are skipped, so a
// rerun after an interruption only executes the missing ones.
CampaignResult run_campaign(const std::vector<RunSpec>& specs,
                            const std::filesystem::path& out_dir, int parallelism);

// All run CSVs of a directory (*.csv, sorted by filename), paired with their
// stem as the series name.
std::vector<std::pair<std::string, RunLog>> load_run_dir(const std::filesystem::path& dir);

// Validation-return series of each run. Every run must report on the same
// cadence: equal spacing, equal first step; throws otherwise. Returns the
// series plus the step labels of the longest run.
struct ValidationTable {
    std::vector<std::vector<double>> returns_per_run;
    std::vector<long long> steps;
};
ValidationTable validation_table(const std::vector<std::pair<std::string, RunLog>>& runs);

enum class PlotKind { ValidationCurve, EpisodeReturns, MeanBand, Efficiency };
PlotKind parse_plot_kind(std::string_view s); // throws std::invalid_argument

// Tidy aggregation CSV: x, series, mean, min, max, n, n_padded. n_padded
// counts the runs whose value at x is carried forward past their own end.
void export_plot_data(const std::vector<std::pair<std::string, RunLog>>& runs, PlotKind kind,
                      std::ostream& out);

} // namespace qrl::xval
