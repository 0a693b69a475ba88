#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrl/agent/trainer.hpp"
#include "qrl/xval/campaign.hpp"
#include "qrl/xval/config.hpp"
#include "qrl/xval/runlog.hpp"
#include "qrl/xval/stats.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

qrl::xval::ParsedConfig load_config(const fs::path& path, bool unrestricted, bool require_grid) {
    try {
        return qrl::xval::parse_config(read_file(path), unrestricted, require_grid);
    } catch (const qrl::xval::ConfigError& e) {
        std::ostringstream msg;
        msg << path.string() << ":";
        if (e.line > 0) msg << e.line << ":";
        msg << " " << e.what();
        throw std::runtime_error(msg.str());
    }
}

int cmd_train(const fs::path& config_path, std::uint64_t seed, bool per_episode, bool skolik_repro,
              int shots, bool unrestricted, fs::path out) {
    qrl::xval::ParsedConfig cfg = load_config(config_path, unrestricted, true);
    if (per_episode) cfg.hp.train_mode = qrl::xval::TrainMode::PerEpisode;
    if (skolik_repro) cfg.hp.train_mode = qrl::xval::TrainMode::SkolikRepro;

    qrl::agent::RunStats stats;
    const qrl::xval::RunLog log = qrl::agent::run_training(cfg.hp, cfg.hp.model, seed, shots, &stats);

    if (out.empty()) out = qrl::xval::run_filename(cfg.hp, seed);
    qrl::xval::write_csv_file(log, out);

    const std::vector<double> val = log.series(qrl::xval::LogKind::ValidationReturn);
    std::cout << "wrote " << out.string() << "\n"
              << "episodes " << stats.episodes
              << ", training steps " << stats.training_steps
              << ", target updates " << stats.target_updates << "\n";
    if (const auto s = log.solved_step())
        std::cout << "solved at sampling step " << *s << "\n";
    else
        std::cout << "not solved within the step budget\n";
    if (!val.empty()) std::cout << "final validation return " << val.back() << "\n";
    return 0;
}

int cmd_grid(const fs::path& config_path, int seeds, int parallelism, const fs::path& out_dir,
             bool unrestricted) {
    const qrl::xval::ParsedConfig base = load_config(config_path, unrestricted, false);
    const std::vector<qrl::xval::HyperParams> grid = qrl::xval::expand_grid(base);

    std::vector<qrl::xval::RunSpec> specs;
    specs.reserve(grid.size() * static_cast<std::size_t>(seeds));
    for (const qrl::xval::HyperParams& hp : grid)
        for (int s = 0; s < seeds; ++s)
            specs.push_back({hp, static_cast<std::uint64_t>(s)});

    std::cout << grid.size() << " configs x " << seeds << " seeds = " << specs.size()
              << " runs\n";
    const qrl::xval::CampaignResult res = qrl::xval::run_campaign(specs, out_dir, parallelism);
    std::cout << "executed " << res.executed << ", skipped " << res.skipped
              << " (already present in " << out_dir.string() << ")\n";
    return 0;
}

int cmd_stats(const fs::path& runs_dir, double threshold, double alpha) {
    const auto runs = qrl::xval::load_run_dir(runs_dir);
    if (runs.empty()) throw std::runtime_error("no run CSVs in " + runs_dir.string());
    const qrl::xval::ValidationTable table = qrl::xval::validation_table(runs);
    const qrl::xval::EfficiencyResult eff =
        qrl::xval::sample_efficiency(table.returns_per_run, table.steps, threshold, alpha);

    std::cout << "runs " << eff.n_runs << ", threshold " << threshold << ", alpha " << alpha
              << "\n";
    std::cout << "step,mean,stddev,t,reject\n";
    for (const qrl::xval::EfficiencyPoint& p : eff.points)
        std::cout << p.step << ',' << p.mean << ',' << p.stddev << ',' << p.t << ','
                  << (p.reject ? 1 : 0) << '\n';
    if (eff.efficiency_index)
        std::cout << "sample efficiency: step " << eff.points[*eff.efficiency_index].step
                  << " (validation index " << *eff.efficiency_index << ")\n";
    else
        std::cout << "sample efficiency: never (threshold not stably exceeded)\n";
    return 0;
}

int cmd_plot_data(const fs::path& runs_dir, const std::string& kind, const fs::path& out_path) {
    const auto runs = qrl::xval::load_run_dir(runs_dir);
    if (runs.empty()) throw std::runtime_error("no run CSVs in " + runs_dir.string());
    const qrl::xval::PlotKind k = qrl::xval::parse_plot_kind(kind);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + out_path.string());
    qrl::xval::export_plot_data(runs, k, out);
    std::cout << "wrote " << out_path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum and classical deep Q-learning testbed on cart-pole"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "run one training run and write its CSV log");
    fs::path train_config;
    std::uint64_t seed = 0;
    bool per_episode = false, skolik_repro = false, train_unrestricted = false;
    int shots = 0;
    fs::path train_out;
    train->add_option("--config", train_config, "config file")->required();
    train->add_option("--seed", seed, "master seed")->required();
    auto* pe = train->add_flag("--per-episode", per_episode, "train once per episode instead of every 10 steps");
    auto* sk = train->add_flag("--skolik-repro", skolik_repro, "train every 30 sampling steps");
    pe->excludes(sk);
    sk->excludes(pe);
    train->add_option("--shots", shots, "estimate Q-values from this many measurement samples (0 = exact)")
        ->check(CLI::NonNegativeNumber);
    train->add_option("--out", train_out, "output CSV path (default: hash-derived name)");
    train->add_flag("--unrestricted", train_unrestricted, "lift fixed-protocol value checks on the config");

    // grid
    auto* grid = app.add_subcommand("grid", "expand the cross-validation grid and run a campaign");
    fs::path grid_config, grid_out;
    int grid_seeds = 0, parallelism = 1;
    bool grid_unrestricted = false;
    grid->add_option("--config", grid_config, "base config; unset grid keys sweep their full domain")->required();
    grid->add_option("--seeds", grid_seeds, "seeds per config (0 .. K-1)")->required()->check(CLI::PositiveNumber);
    grid->add_option("--parallelism", parallelism, "worker threads")->check(CLI::PositiveNumber);
    grid->add_option("--out", grid_out, "output directory")->required();
    grid->add_flag("--unrestricted", grid_unrestricted, "lift fixed-protocol value checks on the config");

    // stats
    auto* stats = app.add_subcommand("stats", "sample-efficiency t-test over a directory of runs");
    fs::path stats_dir;
    double threshold = 0.0, alpha = 0.05;
    stats->add_option("--runs", stats_dir, "directory of run CSVs")->required();
    stats->add_option("--threshold", threshold, "return threshold the mean must exceed")->required();
    stats->add_option("--alpha", alpha, "significance level");

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "aggregate runs into a tidy plotting CSV");
    fs::path plot_dir, plot_out;
    std::string plot_kind;
    plot->add_option("--runs", plot_dir, "directory of run CSVs")->required();
    plot->add_option("--kind", plot_kind,
                     "validation-curve, episode-returns, mean-band or efficiency")->required();
    plot->add_option("--out", plot_out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) return cmd_train(train_config, seed, per_episode, skolik_repro, shots,
                                     train_unrestricted, train_out);
        if (*grid) return cmd_grid(grid_config, grid_seeds, parallelism, grid_out, grid_unrestricted);
        if (*stats) return cmd_stats(stats_dir, threshold, alpha);
        if (*plot) return cmd_plot_data(plot_dir, plot_kind, plot_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
