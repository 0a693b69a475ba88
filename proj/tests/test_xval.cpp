#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qrl/agent/trainer.hpp"
#include "qrl/xval/campaign.hpp"
#include "qrl/xval/config.hpp"
#include "qrl/xval/runlog.hpp"
#include "qrl/xval/stats.hpp"

using namespace qrl;
using xval::ConfigError;
using xval::HyperParams;
using xval::LogKind;
using xval::ParsedConfig;
using xval::RunLog;

namespace fs = std::filesystem;

namespace {

HyperParams grid_point() {
    HyperParams hp;
    hp.eta_start = 0.01;
    hp.eta_duration = 2000;
    hp.epsilon_duration = 10000;
    hp.gamma = 0.99;
    return hp;
}

// Numerical CDF of Student's t via adaptive Simpson on the density. Slow and
// completely independent of the continued-fraction path under test.
double student_pdf(double u, double df) {
    const double c = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                     0.5 * std::log(df * 3.141592653589793);
    return std::exp(c - (df + 1.0) / 2.0 * std::log1p(u * u / df));
}

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double df, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = student_pdf(lm, df), frm = student_pdf(rm, df);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(a, m, fa, flm, fm, left, df, tol / 2, depth - 1) +
           adaptive_simpson(m, b, fm, frm, fb, right, df, tol / 2, depth - 1);
}

double student_cdf_quadrature(double t, double df) {
    if (t == 0.0) return 0.5;
    const double a = 0.0, b = std::abs(t);
    const double fa = student_pdf(a, df), fb = student_pdf(b, df);
    const double fm = student_pdf(0.5 * (a + b), df);
    const double integral =
        adaptive_simpson(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), df, 1e-13, 40);
    return t > 0.0 ? 0.5 + integral : 0.5 - integral;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("minimal config parses and keeps the shared protocol") {
    const std::string text =
        "# the four swept values\n"
        "eta_start = 0.01\n"
        "eta_duration = 2000\n"
        "epsilon_duration = 10000  # inline comment\n"
        "gamma = 0.99\n";
    const ParsedConfig pc = xval::parse_config(text);
    CHECK(pc.hp == grid_point());
    CHECK(pc.explicit_keys == std::set<std::string>{"eta_start", "eta_duration",
                                                    "epsilon_duration", "gamma"});
    CHECK(pc.hp.eta_end() == doctest::Approx(0.0001).epsilon(1e-15));
}

TEST_CASE("config errors carry the offending line") {
    auto line_of = [](const std::string& text, bool unrestricted = false) {
        try {
            xval::parse_config(text, unrestricted);
        } catch (const ConfigError& e) {
            return e.line;
        }
        return -1;
    };

    CHECK(line_of("eta_start = 0.01\nbogus_key = 3\n") == 2);
    CHECK(line_of("gamma 0.99\n") == 1);
    CHECK(line_of("gamma = \n") == 1);
    CHECK(line_of("gamma = 0.99\ngamma = 0.999\n") == 2);
    CHECK(line_of("eta_end = 0.001\n") == 1);
    CHECK(line_of("gamma = fast\n") == 1);
    CHECK(line_of("\n\n# comment\nGamma = 0.99\n") == 4); // keys are case-sensitive
    // domain violations are errors in restricted mode only
    CHECK(line_of("gamma = 0.95\n") == 1);
    CHECK(line_of("eta_start = 0.05\n") == 1);
    CHECK(line_of("num_steps = 600\n") == 1);
    // unrestricted mode lifts the pin but keeps sanity checks
    CHECK(line_of("gamma = 0.95\neta_start = 0.01\neta_duration = 100\nepsilon_duration = 100\n",
                  true) == -1);
    CHECK(line_of("gamma = 1.4\n", true) == 1);
    CHECK(line_of("eta_duration = 0\n", true) == 1);
    CHECK(line_of("loss = L1\n", true) == 1);
    CHECK(line_of("batch_size = 64\nreplay_capacity = 32\n", true) == 0); // file-level check

    // an incomplete grid block is rejected for runnable configs
    try {
        xval::parse_config("eta_start = 0.01\n");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.line == 0);
        CHECK(std::string(e.what()).find("eta_duration") != std::string::npos);
    }
    CHECK_NOTHROW(xval::parse_config("eta_start = 0.01\n", false, false));
}

TEST_CASE("serialization round-trips every field") {
    HyperParams hp = grid_point();
    hp.model = xval::ModelKind::Classical;
    hp.architecture = 'A';
    hp.encoding = "SD";
    hp.extraction = "GSP";
    hp.layers = 3;
    hp.reuploading = true;
    hp.reparam = true;
    hp.train_mode = xval::TrainMode::SkolikRepro;
    hp.bootstrap_on_truncation = false;

    const std::string text = xval::serialize_config(hp);
    const ParsedConfig back = xval::parse_config(text);
    CHECK(back.hp == hp);
    CHECK(back.explicit_keys.size() == 25);

    // canonical form is stable
    CHECK(xval::serialize_config(back.hp) == text);
}

TEST_CASE("grid expansion enumerates 36 points with the learning rate outermost") {
    const ParsedConfig base = xval::parse_config("", false, false);
    const std::vector<HyperParams> grid = xval::expand_grid(base);
    REQUIRE(grid.size() == 36);

    CHECK(grid[0].eta_start == 0.001);
    CHECK(grid[0].eta_duration == 2000);
    CHECK(grid[0].epsilon_duration == 10000);
    CHECK(grid[0].gamma == 0.99);
    // gamma is the innermost axis
    CHECK(grid[1].gamma == 0.999);
    CHECK(grid[1].epsilon_duration == 10000);
    // then epsilon_duration
    CHECK(grid[2].epsilon_duration == 20000);
    CHECK(grid[2].gamma == 0.99);
    // then eta_duration
    CHECK(grid[6].eta_duration == 4000);
    CHECK(grid[6].epsilon_duration == 10000);
    // eta_start flips last
    CHECK(grid[12].eta_start == 0.01);
    CHECK(grid[35].eta_start == 0.1);
    CHECK(grid[35].eta_duration == 4000);
    CHECK(grid[35].epsilon_duration == 30000);
    CHECK(grid[35].gamma == 0.999);

    std::set<std::string> distinct;
    for (const HyperParams& hp : grid) distinct.insert(xval::serialize_config(hp));
    CHECK(distinct.size() == 36);
}

TEST_CASE("pinning a key collapses its grid axis") {
    const ParsedConfig base = xval::parse_config("gamma = 0.99\n", false, false);
    const std::vector<HyperParams> grid = xval::expand_grid(base);
    CHECK(grid.size() == 18);
    for (const HyperParams& hp : grid) CHECK(hp.gamma == 0.99);

    const ParsedConfig all = xval::parse_config(
        "eta_start = 0.1\neta_duration = 4000\nepsilon_duration = 30000\ngamma = 0.999\n");
    CHECK(xval::expand_grid(all).size() == 1);
}

TEST_CASE("run filenames hash the canonical config") {
    const HyperParams hp = grid_point();
    const std::string a = xval::run_filename(hp, 0);
    CHECK(a == xval::run_filename(hp, 0));
    CHECK(a.substr(0, 4) == "run_");
    CHECK(a.size() == 4 + 16 + 2 + 1 + 4); // run_ hash _s 0 .csv
    CHECK(a.find("_s0.csv") != std::string::npos);
    CHECK(xval::run_filename(hp, 1) != a);

    HyperParams other = hp;
    other.gamma = 0.999;
    CHECK(xval::run_filename(other, 0) != a);
}

TEST_CASE("double formatting survives the round trip") {
    CHECK(xval::format_double(0.5) == "0.5");
    CHECK(xval::format_double(200.0) == "200");
    CHECK(xval::format_double(0.01) == "0.01");
    CHECK(xval::format_double(-0.0) == "-0");

    Rng rng(6);
    for (int i = 0; i < 200; ++i) {
        double v = rng.uniform(-1e6, 1e6);
        if (i % 3 == 0) v = rng.uniform(0, 1e-4);
        if (i % 7 == 0) v = 0.1 + 0.2; // classic non-representable sum
        const std::string s = xval::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("run logs round-trip through CSV") {
    RunLog log;
    log.add(100, LogKind::Epsilon, 1.0);
    log.add(100, LogKind::Eta, 0.001);
    log.add(110, LogKind::Loss, 1.0 / 3.0);
    log.add(150, LogKind::EpisodeReturn, 23.0);
    log.add(200, LogKind::ValidationReturn, 0.505);
    log.add(200, LogKind::Solved, 1.0);

    std::ostringstream out;
    xval::write_csv(log, out);
    const std::string text = out.str();
    CHECK(text.rfind("step,kind,value\n", 0) == 0);
    CHECK(text.find("110,loss,") != std::string::npos);
    CHECK(text.find("150,episode_return,23\n") != std::string::npos);
    CHECK(text.find("200,solved,1\n") != std::string::npos);

    std::istringstream in(text);
    const RunLog back = xval::read_csv(in);
    CHECK(back == log);
    CHECK(back.solved_step() == 200);
    CHECK(back.series(LogKind::Loss) == std::vector<double>{1.0 / 3.0});
    CHECK(back.steps_of(LogKind::ValidationReturn) == std::vector<long long>{200});

    std::istringstream bad("time,kind,value\n1,loss,0.5\n");
    CHECK_THROWS_AS(xval::read_csv(bad), std::runtime_error);
    std::istringstream badkind("step,kind,value\n1,entropy,0.5\n");
    CHECK_THROWS_AS(xval::read_csv(badkind), std::invalid_argument);

    RunLog unsolved;
    unsolved.add(100, LogKind::ValidationReturn, 10.0);
    CHECK_FALSE(unsolved.solved_step().has_value());
}

TEST_CASE("moving average uses a trailing window") {
    const std::vector<double> data{1, 2, 3, 4, 5};
    CHECK(xval::moving_average(data, 2) == std::vector<double>{1.0, 1.5, 2.5, 3.5, 4.5});
    // the window clamps at the start
    const std::vector<double> wide = xval::moving_average(data, 20);
    CHECK(wide[0] == 1.0);
    CHECK(wide[1] == 1.5);
    CHECK(wide[4] == 3.0);
    CHECK(xval::moving_average({}, 20).empty());

    const std::vector<double> flat(50, 7.0);
    for (double v : xval::moving_average(flat, 20)) CHECK(v == 7.0);
}

TEST_CASE("incomplete beta special cases") {
    CHECK(xval::regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(xval::regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1, 1) = x, I_x(a, 1) = x^a, I_x(1, b) = 1 - (1-x)^b
    for (double x : {0.1, 0.37, 0.5, 0.92}) {
        CHECK(xval::regularized_incomplete_beta(1, 1, x) == doctest::Approx(x).epsilon(1e-13));
        CHECK(xval::regularized_incomplete_beta(3, 1, x) ==
              doctest::Approx(x * x * x).epsilon(1e-13));
        CHECK(xval::regularized_incomplete_beta(1, 4, x) ==
              doctest::Approx(1 - std::pow(1 - x, 4)).epsilon(1e-13));
    }
}

TEST_CASE("Student CDF agrees with direct quadrature of the density") {
    CHECK(xval::student_cdf(0.0, 29) == 0.5);
    Rng rng(314);
    for (int i = 0; i < 1000; ++i) {
        const double t = rng.uniform(-6.0, 6.0);
        const double df = rng.uniform(0.5, 60.0);
        const double got = xval::student_cdf(t, df);
        const double want = student_cdf_quadrature(t, df);
        CHECK(std::abs(got - want) < 1e-10);
        // symmetry of the distribution
        CHECK(std::abs(xval::student_cdf(-t, df) - (1.0 - got)) < 1e-13);
    }
}

TEST_CASE("one-sided critical values") {
    // textbook t table, alpha = 0.05
    CHECK(xval::student_critical_one_sided(0.05, 29) == doctest::Approx(1.699127).epsilon(2e-4));
    CHECK(xval::student_critical_one_sided(0.05, 1) == doctest::Approx(6.313752).epsilon(2e-4));
    CHECK(xval::student_critical_one_sided(0.05, 2) == doctest::Approx(2.919986).epsilon(2e-4));
    CHECK(xval::student_critical_one_sided(0.01, 29) == doctest::Approx(2.462021).epsilon(2e-4));
    // the CDF at the returned point recovers 1 - alpha
    const double c = xval::student_critical_one_sided(0.05, 29);
    CHECK(xval::student_cdf(c, 29) == doctest::Approx(0.95).epsilon(1e-10));
}

TEST_CASE("one-sample one-sided t-test") {
    const std::vector<double> s{1.0, 2.0, 3.0};
    const xval::TTestResult r = xval::t_test_one_sided(s, 0.0);
    CHECK(r.mean == doctest::Approx(2.0));
    CHECK(r.stddev == doctest::Approx(1.0));
    CHECK(r.t == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r.reject); // 3.464 > 2.920 at df = 2

    CHECK_FALSE(xval::t_test_one_sided(s, 2.0).reject); // t = 0
    CHECK_FALSE(xval::t_test_one_sided(s, 1.9).reject); // t = 0.346, far below critical

    // zero variance degenerates to a plain comparison
    const std::vector<double> flat{5.0, 5.0, 5.0};
    const xval::TTestResult hi = xval::t_test_one_sided(flat, 4.0);
    CHECK(hi.reject);
    CHECK(std::isinf(hi.t));
    CHECK(hi.t > 0);
    const xval::TTestResult eq = xval::t_test_one_sided(flat, 5.0);
    CHECK_FALSE(eq.reject);
    const xval::TTestResult lo = xval::t_test_one_sided(flat, 6.0);
    CHECK_FALSE(lo.reject);
    CHECK(lo.t < 0);

    CHECK_THROWS_AS(xval::t_test_one_sided(std::vector<double>{1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("sample efficiency on degenerate inputs") {
    const std::vector<long long> steps{100, 200, 300};
    std::vector<std::vector<double>> perfect(5, std::vector<double>{200, 200, 200});
    // zero variance above threshold rejects everywhere
    const xval::EfficiencyResult hit = xval::sample_efficiency(perfect, steps, 196.0);
    REQUIRE(hit.efficiency_index.has_value());
    CHECK(*hit.efficiency_index == 0);
    CHECK(hit.points.size() == 3);
    for (const auto& p : hit.points) CHECK(p.reject);

    std::vector<std::vector<double>> poor(5, std::vector<double>{100, 100, 100});
    CHECK_FALSE(xval::sample_efficiency(poor, steps, 196.0).efficiency_index.has_value());

    // fewer than two runs cannot support a t-test
    CHECK_THROWS_AS(xval::sample_efficiency({std::vector<double>{1.0, 2.0, 3.0}}, steps, 0.0),
                    std::invalid_argument);
}

TEST_CASE("sample efficiency matches a brute-force suffix scan") {
    Rng rng(2718);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n_runs = 6, n_points = 25;
        std::vector<long long> steps(n_points);
        for (std::size_t i = 0; i < n_points; ++i) steps[i] = 100 * static_cast<long long>(i + 1);

        // noisy ramps that cross the threshold somewhere in the middle
        std::vector<std::vector<double>> runs(n_runs);
        for (auto& run : runs) {
            run.resize(n_points);
            const double slope = rng.uniform(6.0, 10.0);
            for (std::size_t i = 0; i < n_points; ++i)
                run[i] = slope * static_cast<double>(i) + rng.uniform(-25.0, 25.0);
        }
        // one run ends early to exercise the padding path
        runs[0].resize(n_points - 7);

        const double threshold = 120.0;
        const xval::EfficiencyResult res = xval::sample_efficiency(runs, steps, threshold);

        // reference: pad by hand, test each index, scan for the stable suffix
        std::vector<std::vector<double>> padded = runs;
        for (auto& run : padded)
            while (run.size() < n_points) run.push_back(run.back());
        std::vector<bool> reject(n_points);
        for (std::size_t i = 0; i < n_points; ++i) {
            std::vector<double> col;
            for (const auto& run : padded) col.push_back(run[i]);
            reject[i] = xval::t_test_one_sided(col, threshold).reject;
            CHECK(res.points[i].reject == reject[i]);
        }
        std::optional<std::size_t> want;
        for (std::size_t i = n_points; i-- > 0;) {
            if (!reject[i]) break;
            want = i;
        }
        CHECK(res.efficiency_index == want);
        if (want) CHECK(res.points[*want].step == steps[*want]);

        // raising the bar never finds an earlier efficiency step
        const xval::EfficiencyResult harder = xval::sample_efficiency(runs, steps, threshold + 40);
        if (harder.efficiency_index && res.efficiency_index)
            CHECK(*harder.efficiency_index >= *res.efficiency_index);
    }
}

TEST_CASE("plot kinds parse by name") {
    CHECK(xval::parse_plot_kind("validation-curve") == xval::PlotKind::ValidationCurve);
    CHECK(xval::parse_plot_kind("episode-returns") == xval::PlotKind::EpisodeReturns);
    CHECK(xval::parse_plot_kind("mean-band") == xval::PlotKind::MeanBand);
    CHECK(xval::parse_plot_kind("efficiency") == xval::PlotKind::Efficiency);
    CHECK_THROWS_AS(xval::parse_plot_kind("histogram"), std::invalid_argument);
}

TEST_CASE("mean-band aggregation, worked by hand") {
    RunLog a, b;
    a.add(100, LogKind::ValidationReturn, 100.0);
    a.add(200, LogKind::ValidationReturn, 200.0);
    b.add(100, LogKind::ValidationReturn, 150.0);
    // run b stops early; its 150 carries forward to x = 200

    const std::vector<std::pair<std::string, RunLog>> runs{{"a", a}, {"b", b}};
    std::ostringstream out;
    xval::export_plot_data(runs, xval::PlotKind::MeanBand, out);
    const std::string text = out.str();
    CHECK(text.rfind("x,series,mean,min,max,n,n_padded\n", 0) == 0);
    CHECK(text.find("100,validation_return,125,100,150,2,0\n") != std::string::npos);
    CHECK(text.find("200,validation_return,175,150,200,2,1\n") != std::string::npos);

    // identical runs collapse the band to the mean
    const std::vector<std::pair<std::string, RunLog>> twins{{"a", a}, {"a2", a}};
    std::ostringstream out2;
    xval::export_plot_data(twins, xval::PlotKind::MeanBand, out2);
    CHECK(out2.str().find("100,validation_return,100,100,100,2,0\n") != std::string::npos);
    CHECK(out2.str().find("200,validation_return,200,200,200,2,0\n") != std::string::npos);
}

TEST_CASE("per-run plot exports") {
    RunLog a;
    a.add(100, LogKind::ValidationReturn, 10.0);
    a.add(150, LogKind::EpisodeReturn, 30.0);
    a.add(180, LogKind::EpisodeReturn, 50.0);
    const std::vector<std::pair<std::string, RunLog>> runs{{"r0", a}};

    std::ostringstream curve;
    xval::export_plot_data(runs, xval::PlotKind::ValidationCurve, curve);
    CHECK(curve.str().find("100,r0,10,10,10,1,0\n") != std::string::npos);

    std::ostringstream ep;
    xval::export_plot_data(runs, xval::PlotKind::EpisodeReturns, ep);
    // x is the 1-based episode index; the smoothed series sits alongside
    CHECK(ep.str().find("1,r0:return,30,") != std::string::npos);
    CHECK(ep.str().find("2,r0:return,50,") != std::string::npos);
    CHECK(ep.str().find("1,r0:ma20,30,") != std::string::npos);
    CHECK(ep.str().find("2,r0:ma20,40,") != std::string::npos);
}

TEST_CASE("validation tables require a shared cadence") {
    RunLog a, b;
    a.add(100, LogKind::ValidationReturn, 1.0);
    a.add(200, LogKind::ValidationReturn, 2.0);
    b.add(100, LogKind::ValidationReturn, 3.0);
    b.add(250, LogKind::ValidationReturn, 4.0);
    CHECK_THROWS_AS(xval::validation_table({{"a", a}, {"b", b}}), std::invalid_argument);

    RunLog c;
    c.add(50, LogKind::ValidationReturn, 3.0);
    CHECK_THROWS_AS(xval::validation_table({{"a", a}, {"c", c}}), std::invalid_argument);

    RunLog d;
    d.add(100, LogKind::ValidationReturn, 5.0);
    const xval::ValidationTable table = xval::validation_table({{"a", a}, {"d", d}});
    CHECK(table.steps == std::vector<long long>{100, 200});
    CHECK(table.returns_per_run ==
          std::vector<std::vector<double>>{{1.0, 2.0}, {5.0}});
}

TEST_CASE("campaigns resume from the file system") {
    const fs::path dir = fresh_dir("qrl_campaign_test");

    HyperParams hp = grid_point();
    hp.model = xval::ModelKind::Classical;
    hp.num_steps = 220;
    hp.train_after = 50;
    hp.eta_duration = 100;
    hp.epsilon_duration = 100;

    HyperParams hp2 = hp;
    hp2.gamma = 0.999;

    const std::vector<xval::RunSpec> specs{{hp, 0}, {hp, 1}, {hp2, 0}};
    const xval::CampaignResult first = xval::run_campaign(specs, dir, 2);
    CHECK(first.executed == 3);
    CHECK(first.skipped == 0);
    REQUIRE(first.files.size() == 3);
    for (const fs::path& f : first.files) CHECK(fs::exists(f));
    CHECK(first.files[0].filename().string() == xval::run_filename(hp, 0));

    // the files hold exactly what a direct run produces
    const RunLog direct = agent::run_training(hp, hp.model, 1);
    CHECK(xval::read_csv_file(first.files[1]) == direct);

    // nothing is recomputed while every file is present
    const xval::CampaignResult second = xval::run_campaign(specs, dir, 2);
    CHECK(second.executed == 0);
    CHECK(second.skipped == 3);

    // deleting one file re-executes exactly that run, bit for bit
    std::ifstream before(first.files[1], std::ios::binary);
    const std::string bytes_before((std::istreambuf_iterator<char>(before)),
                                   std::istreambuf_iterator<char>());
    before.close();
    fs::remove(first.files[1]);
    const xval::CampaignResult third = xval::run_campaign(specs, dir, 2);
    CHECK(third.executed == 1);
    CHECK(third.skipped == 2);
    std::ifstream after(first.files[1], std::ios::binary);
    const std::string bytes_after((std::istreambuf_iterator<char>(after)),
                                  std::istreambuf_iterator<char>());
    CHECK(bytes_after == bytes_before);

    // the loader finds all three, sorted by filename
    const auto loaded = xval::load_run_dir(dir);
    REQUIRE(loaded.size() == 3);
    CHECK(std::is_sorted(loaded.begin(), loaded.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; }));

    fs::remove_all(dir);
}
