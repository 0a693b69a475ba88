#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrl::xval {

enum class ModelKind { Vqc, Classical };
enum class TrainMode { Step, PerEpisode, SkolikRepro };

// Everything a single training run needs. The fixed block matches the
// protocol every experiment shares; the cross-validated block is what the
// grid search sweeps; eta_end is always 1% of eta_start and is therefore a
// derived quantity, not a field.
struct HyperParams {
    // fixed protocol
    long long num_steps = 50000;
    long long train_after = 1000;
    long long train_every = 10;
    long long update_every_start = 30;
    long long update_every_end = 500;
    long long update_every_duration = 35000;
    long long replay_capacity = 50000;
    long long batch_size = 32;
    std::string loss = "L2";
    double epsilon_start = 1.0;
    double epsilon_end = 0.01;
    long long validate_every = 100;

    // cross-validated; no defaults, a run config must pin them
    double eta_start = 0.0;
    long long eta_duration = 0;
    long long epsilon_duration = 0;
    double gamma = 0.0;

    double eta_end() const { return 0.01 * eta_start; }

    // model selection
    ModelKind model = ModelKind::Vqc;
    char architecture = 'B';
    std::string encoding = "SC";
    std::string extraction = "GS";
    long long layers = 5;
    bool reuploading = false;
    bool reparam = false;

    // protocol variants
    TrainMode train_mode = TrainMode::Step;
    bool bootstrap_on_truncation = true;

    bool operator==(const HyperParams&) const = default;
};

struct ConfigError : std::runtime_error {
    int line; // 1-based line of the offending entry, 0 when file-level
    ConfigError(std::string msg, int line_no) : std::runtime_error(std::move(msg)), line(line_no) {}
};

struct ParsedConfig {
    HyperParams hp;
    std::set<std::string> explicit_keys;
};

// Line-based "key = value" format, '#' starts a comment, keys are
// case-sensitive. Unknown keys, malformed lines, duplicate keys and values
// outside their domain raise ConfigError with the line number. `unrestricted`
// keeps type and sanity checks but lifts the fixed-protocol and grid-domain
// pins. With `require_grid_fields` the four cross-validated keys must all be
// present (a runnable config); grid expansion parses without it.
ParsedConfig parse_config(const std::string& text, bool unrestricted = false,
                          bool require_grid_fields = true);

// Canonical form: every key once, fixed order, values formatted so that
// parse(serialize(hp)) round-trips exactly.
std::string serialize_config(const HyperParams& hp);

// Cartesian product over the cross-validated domains
//   eta_start        {0.001, 0.01, 0.1}
//   eta_duration     {2000, 4000}
//   epsilon_duration {10000, 20000, 30000}
//   gamma            {0.99, 0.999}
// in lexicographic order with eta_start outermost. A key pinned explicitly in
// the base config collapses its axis to that single value.
std::vector<HyperParams> expand_grid(const ParsedConfig& base);

} // namespace qrl::xval
