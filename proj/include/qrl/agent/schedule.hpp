#pragma once

namespace qrl::agent {

// Piecewise-linear ramp: start before `offset`, end after `offset + duration`,
// linear in between. Time units are whatever the caller counts in (sampling
// steps for epsilon and target syncs, training steps for the learning rate).
struct LinearSchedule {
    double start = 0.0;
    double end = 0.0;
    long long offset = 0;
    long long duration = 1;

    double value(long long t) const {
        if (t <= offset) return start;
        if (t >= offset + duration) return end;
        const double frac = static_cast<double>(t - offset) / static_cast<double>(duration);
        return start + (end - start) * frac;
    }
};

inline double epsilon_at(long long t, long long train_after, long long epsilon_duration,
                         double eps_start = 1.0, double eps_end = 0.01) {
    return LinearSchedule{eps_start, eps_end, train_after, epsilon_duration}.value(t);
}

} // namespace qrl::agent
