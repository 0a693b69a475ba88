#include "qrl/xval/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "qrl/agent/trainer.hpp"
#include "qrl/rng.hpp"
#include "qrl/xval/stats.hpp"

namespace qrl::xval {

namespace fs = std::filesystem;

std::string run_filename(const HyperParams& hp, std::uint64_t seed) {
    const std::uint64_t h = fnv1a64(serialize_config(hp));
    char buf[64];
    std::snprintf(buf, sizeof buf, "run_%016llx_s%llu.csv",
                  static_cast<unsigned long long>(h), static_cast<unsigned long long>(seed));
    return buf;
}

CampaignResult run_campaign(const std::vector<RunSpec>& specs, const fs::path& out_dir,
                            int parallelism) {
    if (parallelism < 1) throw std::invalid_argument("run_campaign: parallelism must be positive");
    fs::create_directories(out_dir);

    CampaignResult result;
    result.files.resize(specs.size());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        result.files[i] = out_dir / run_filename(specs[i].hp, specs[i].seed);
        if (fs::exists(result.files[i]))
            ++result.skipped;
        else
            todo.push_back(i);
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= todo.size() || failed.load()) return;
            const RunSpec& spec = specs[todo[k]];
            try {
                const RunLog log = agent::run_training(spec.hp, spec.hp.model, spec.seed);
                // write to a temp name first so an interrupted run never
                // leaves a file the resume scan would mistake for complete
                const fs::path final_path = result.files[todo[k]];
                const fs::path tmp_path = final_path.string() + ".tmp";
                write_csv_file(log, tmp_path);
                fs::rename(tmp_path, final_path);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = e.what();
                return;
            }
        }
    };

    const int n_threads = std::min<int>(parallelism, static_cast<int>(todo.size()));
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();

    if (failed.load()) throw std::runtime_error("run_campaign: a run failed: " + first_error);
    result.executed = static_cast<int>(todo.size());
    return result;
}

std::vector<std::pair<std::string, RunLog>> load_run_dir(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw std::runtime_error("load_run_dir: not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<std::pair<std::string, RunLog>> out;
    out.reserve(files.size());
    for (const fs::path& f : files)
        out.emplace_back(f.stem().string(), read_csv_file(f));
    return out;
}

ValidationTable validation_table(const std::vector<std::pair<std::string, RunLog>>& runs) {
    if (runs.empty()) throw std::invalid_argument("validation_table: no runs");

    ValidationTable table;
    long long cadence = 0;
    long long first_step = 0;
    for (const auto& [name, log] : runs) {
        const std::vector<long long> steps = log.steps_of(LogKind::ValidationReturn);
        if (steps.empty())
            throw std::invalid_argument("validation_table: run '" + name + "' has no validation returns");
        const long long start = steps.front();
        long long gap = 0;
        for (std::size_t i = 1; i < steps.size(); ++i) {
            const long long g = steps[i] - steps[i - 1];
            if (gap == 0) gap = g;
            else if (g != gap)
                throw std::invalid_argument("validation_table: run '" + name + "' has uneven validation spacing");
        }
        if (gap == 0) gap = start; // single validation; spacing equals offset
        if (cadence == 0) {
            cadence = gap;
            first_step = start;
        } else if (gap != cadence || start != first_step) {
            throw std::invalid_argument("validation_table: run '" + name +
                                     "' reports on a different validation cadence");
        }
        table.returns_per_run.push_back(log.series(LogKind::ValidationReturn));
        if (steps.size() > table.steps.size()) table.steps = steps;
    }
    return table;
}

PlotKind parse_plot_kind(std::string_view s) {
    if (s == "validation-curve") return PlotKind::ValidationCurve;
    if (s == "episode-returns") return PlotKind::EpisodeReturns;
    if (s == "mean-band") return PlotKind::MeanBand;
    if (s == "efficiency") return PlotKind::Efficiency;
    throw std::invalid_argument("unknown plot kind '" + std::string(s) +
                                "' (validation-curve, episode-returns, mean-band, efficiency)");
}

namespace {

void emit(std::ostream& out, long long x, const std::string& series, double mean, double lo,
          double hi, std::size_t n, std::size_t n_padded) {
    out << x << ',' << series << ',' << format_double(mean) << ',' << format_double(lo) << ','
        << format_double(hi) << ',' << n << ',' << n_padded << '\n';
}

} // namespace

void export_plot_data(const std::vector<std::pair<std::string, RunLog>>& runs, PlotKind kind,
                      std::ostream& out) {
    if (runs.empty()) throw std::invalid_argument("export_plot_data: no runs");
    out << "x,series,mean,min,max,n,n_padded\n";

    switch (kind) {
    case PlotKind::ValidationCurve: {
        for (const auto& [name, log] : runs) {
            const std::vector<long long> steps = log.steps_of(LogKind::ValidationReturn);
            const std::vector<double> vals = log.series(LogKind::ValidationReturn);
            for (std::size_t i = 0; i < vals.size(); ++i)
                emit(out, steps[i], name, vals[i], vals[i], vals[i], 1, 0);
        }
        return;
    }
    case PlotKind::EpisodeReturns: {
        for (const auto& [name, log] : runs) {
            const std::vector<double> vals = log.series(LogKind::EpisodeReturn);
            const std::vector<double> ma = moving_average(vals, 20);
            for (std::size_t i = 0; i < vals.size(); ++i) {
                emit(out, static_cast<long long>(i + 1), name + ":return", vals[i], vals[i], vals[i], 1, 0);
                emit(out, static_cast<long long>(i + 1), name + ":ma20", ma[i], ma[i], ma[i], 1, 0);
            }
        }
        return;
    }
    case PlotKind::MeanBand:
    case PlotKind::Efficiency: {
        const ValidationTable table = validation_table(runs);
        const std::size_t len = table.steps.size();
        std::vector<std::vector<double>> padded = table.returns_per_run;
        std::vector<std::size_t> orig_len(padded.size());
        for (std::size_t r = 0; r < padded.size(); ++r) {
            orig_len[r] = padded[r].size();
            padded[r].resize(len, padded[r].back());
        }

        if (kind == PlotKind::MeanBand) {
            for (std::size_t i = 0; i < len; ++i) {
                double lo = padded[0][i], hi = padded[0][i], sum = 0.0;
                std::size_t n_padded = 0;
                for (std::size_t r = 0; r < padded.size(); ++r) {
                    const double v = padded[r][i];
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                    sum += v;
                    if (i >= orig_len[r]) ++n_padded;
                }
                emit(out, table.steps[i], "validation_return", sum / static_cast<double>(padded.size()),
                     lo, hi, padded.size(), n_padded);
            }
            return;
        }

        // efficiency: t statistic and rejection per validation step at the
        // standard solved threshold
        const EfficiencyResult eff = sample_efficiency(table.returns_per_run, table.steps, 120.0);
        for (std::size_t i = 0; i < eff.points.size(); ++i) {
            std::size_t n_padded = 0;
            for (std::size_t r = 0; r < padded.size(); ++r)
                if (i >= orig_len[r]) ++n_padded;
            const EfficiencyPoint& p = eff.points[i];
            emit(out, p.step, "mean_return", p.mean, p.mean - p.stddev, p.mean + p.stddev,
                 eff.n_runs, n_padded);
            emit(out, p.step, "t_stat", p.t, p.t, p.t, eff.n_runs, n_padded);
            emit(out, p.step, "reject", p.reject ? 1.0 : 0.0, p.reject ? 1.0 : 0.0,
                 p.reject ? 1.0 : 0.0, eff.n_runs, n_padded);
        }
        return;
    }
    }
}

} // namespace qrl::xval
