#include "qrl/xval/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qrl::xval {

namespace {

// continued fraction for the incomplete beta, modified Lentz
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("betacf: continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0)
        throw std::invalid_argument("regularized_incomplete_beta: a, b must be positive");
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("regularized_incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // the continued fraction converges fast for x < (a+1)/(a+b+2); use the
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the other side
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_cdf(double t, double df) {
    if (df <= 0.0) throw std::invalid_argument("student_cdf: df must be positive");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double half_tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
    return t > 0.0 ? 1.0 - half_tail : half_tail;
}

double student_critical_one_sided(double alpha, double df) {
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("student_critical_one_sided: alpha must lie in (0, 1)");
    const double target = 1.0 - alpha;
    double lo = 0.0;
    double hi = 1.0;
    while (student_cdf(hi, df) < target) hi *= 2.0;
    if (alpha >= 0.5) lo = -hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_cdf(mid, df) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

TTestResult t_test_one_sided(std::span<const double> samples, double threshold, double alpha) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("t_test_one_sided: need at least 2 samples");

    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestResult r;
    r.mean = mean;
    r.stddev = sd;
    if (sd == 0.0) {
        // all samples identical; the test degenerates to a plain comparison
        r.t = mean > threshold ? std::numeric_limits<double>::infinity()
              : mean < threshold ? -std::numeric_limits<double>::infinity()
                                 : 0.0;
        r.reject = mean > threshold;
        return r;
    }
    r.t = (mean - threshold) / (sd / std::sqrt(static_cast<double>(n)));
    const double crit = student_critical_one_sided(alpha, static_cast<double>(n - 1));
    r.reject = r.t > crit;
    return r;
}

std::vector<double> moving_average(std::span<const double> data, int window) {
    if (window < 1) throw std::invalid_argument("moving_average: window must be positive");
    std::vector<double> out(data.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        sum += data[i];
        if (i >= static_cast<std::size_t>(window)) sum -= data[i - window];
        const std::size_t len = std::min<std::size_t>(i + 1, window);
        out[i] = sum / static_cast<double>(len);
    }
    return out;
}

EfficiencyResult sample_efficiency(std::vector<std::vector<double>> returns_per_run,
                                   std::span<const long long> steps, double threshold,
                                   double alpha) {
    if (returns_per_run.size() < 2)
        throw std::invalid_argument("sample_efficiency: need at least 2 runs");
    std::size_t len = 0;
    for (const auto& r : returns_per_run) {
        if (r.empty()) throw std::invalid_argument("sample_efficiency: a run has no validation returns");
        len = std::max(len, r.size());
    }
    if (steps.size() != len)
        throw std::invalid_argument("sample_efficiency: step labels do not match the longest run");
    // early-stopped runs hold their final greedy return
    for (auto& r : returns_per_run)
        r.resize(len, r.back());

    EfficiencyResult res;
    res.threshold = threshold;
    res.alpha = alpha;
    res.n_runs = returns_per_run.size();
    res.points.resize(len);

    std::vector<double> column(returns_per_run.size());
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t r = 0; r < returns_per_run.size(); ++r)
            column[r] = returns_per_run[r][i];
        const TTestResult t = t_test_one_sided(column, threshold, alpha);
        res.points[i] = {steps[i], t.mean, t.stddev, t.t, t.reject};
    }

    // smallest index whose entire suffix rejects
    std::optional<std::size_t> first;
    for (std::size_t i = len; i-- > 0;) {
        if (!res.points[i].reject) break;
        first = i;
    }
    res.efficiency_index = first;
    return res;
}

} // namespace qrl::xval
