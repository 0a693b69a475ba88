#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qrl::xval {

// I_x(a, b), computed with the Lentz continued fraction. Accurate to ~1e-14
// for the a, b this project needs (Student tails).
double regularized_incomplete_beta(double a, double b, double x);

// CDF of Student's t with df degrees of freedom.
double student_cdf(double t, double df);

// Smallest c with CDF(c) = 1 - alpha, found by bisection on the CDF.
double student_critical_one_sided(double alpha, double df);

struct TTestResult {
    double t = 0.0;       // +-inf when the sample variance is zero
    double mean = 0.0;
    double stddev = 0.0;  // n-1 normalization
    bool reject = false;  // H0: population mean <= threshold
};

// One-sided one-sample t-test of "mean exceeds threshold" at level alpha.
// Needs at least two samples. A zero-variance sample degenerates to the
// plain comparison mean > threshold.
TTestResult t_test_one_sided(std::span<const double> samples, double threshold,
                             double alpha = 0.05);

// Trailing mean over up to `window` elements: out[i] averages
// data[max(0, i-window+1) .. i].
std::vector<double> moving_average(std::span<const double> data, int window = 20);

struct EfficiencyPoint {
    long long step = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double t = 0.0;
    bool reject = false;
};

struct EfficiencyResult {
    double threshold = 0.0;
    double alpha = 0.05;
    std::size_t n_runs = 0;
    std::vector<EfficiencyPoint> points;
    // first index from which every later index also rejects; empty when the
    // threshold is never stably exceeded
    std::optional<std::size_t> efficiency_index;
};

// Sample efficiency across agents: per validation index, test whether the
// mean greedy return significantly exceeds the threshold; the efficiency
// step is where rejection starts and never lapses again. Runs that stopped
// early are padded by carrying their final return forward. `steps` labels
// the validation indices (pass the longest run's step column).
EfficiencyResult sample_efficiency(std::vector<std::vector<double>> returns_per_run,
                                   std::span<const long long> steps, double threshold,
                                   double alpha = 0.05);

} // namespace qrl::xval
