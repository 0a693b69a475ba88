#include "qrl/xval/config.hpp"

#include <array>
#include <cstdlib>
#include <sstream>

#include "qrl/xval/runlog.hpp"

namespace qrl::xval {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

long long parse_ll(const std::string& v, const std::string& key, int line) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("value of '" + key + "' is not an integer: '" + v + "'", line);
    return x;
}

double parse_d(const std::string& v, const std::string& key, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("value of '" + key + "' is not a number: '" + v + "'", line);
    return x;
}

bool parse_flag(const std::string& v, const std::string& key, int line) {
    if (v == "0") return false;
    if (v == "1") return true;
    throw ConfigError("value of '" + key + "' must be 0 or 1", line);
}

void check_domain_ll(long long x, std::initializer_list<long long> domain,
                     const std::string& key, int line) {
    for (long long d : domain)
        if (x == d) return;
    std::ostringstream msg;
    msg << "value " << x << " of '" << key << "' is outside its domain {";
    bool first = true;
    for (long long d : domain) {
        if (!first) msg << ", ";
        msg << d;
        first = false;
    }
    msg << "}";
    throw ConfigError(msg.str(), line);
}

void check_domain_d(double x, std::initializer_list<double> domain,
                    const std::string& key, int line) {
    for (double d : domain)
        if (x == d) return;
    std::ostringstream msg;
    msg << "value " << format_double(x) << " of '" << key << "' is outside its domain {";
    bool first = true;
    for (double d : domain) {
        if (!first) msg << ", ";
        msg << format_double(d);
        first = false;
    }
    msg << "}";
    throw ConfigError(msg.str(), line);
}

const char* const kKeyOrder[] = {
    "num_steps", "train_after", "train_every", "update_every_start", "update_every_end",
    "update_every_duration", "replay_capacity", "batch_size", "loss", "epsilon_start",
    "epsilon_end", "validate_every", "eta_start", "eta_duration", "epsilon_duration",
    "gamma", "model", "architecture", "encoding", "extraction", "layers", "reuploading",
    "reparam", "train_mode", "bootstrap_on_truncation",
};

} // namespace

ParsedConfig parse_config(const std::string& text, bool unrestricted, bool require_grid_fields) {
    ParsedConfig out;
    HyperParams& hp = out.hp;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        if (val.empty()) throw ConfigError("missing value for '" + key + "'", line_no);

        if (key == "eta_end")
            throw ConfigError("'eta_end' is derived (always 0.01 * eta_start) and cannot be set", line_no);
        if (!out.explicit_keys.insert(key).second)
            throw ConfigError("duplicate key '" + key + "'", line_no);

        if (key == "num_steps") {
            hp.num_steps = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.num_steps, {50000}, key, line_no);
            if (hp.num_steps < 1) throw ConfigError("'num_steps' must be positive", line_no);
        } else if (key == "train_after") {
            hp.train_after = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.train_after, {1000}, key, line_no);
            if (hp.train_after < 0) throw ConfigError("'train_after' must be >= 0", line_no);
        } else if (key == "train_every") {
            hp.train_every = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.train_every, {10}, key, line_no);
            if (hp.train_every < 1) throw ConfigError("'train_every' must be positive", line_no);
        } else if (key == "update_every_start") {
            hp.update_every_start = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.update_every_start, {30}, key, line_no);
            if (hp.update_every_start < 1) throw ConfigError("'update_every_start' must be positive", line_no);
        } else if (key == "update_every_end") {
            hp.update_every_end = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.update_every_end, {500}, key, line_no);
            if (hp.update_every_end < 1) throw ConfigError("'update_every_end' must be positive", line_no);
        } else if (key == "update_every_duration") {
            hp.update_every_duration = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.update_every_duration, {35000}, key, line_no);
            if (hp.update_every_duration < 1) throw ConfigError("'update_every_duration' must be positive", line_no);
        } else if (key == "replay_capacity") {
            hp.replay_capacity = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.replay_capacity, {50000}, key, line_no);
            if (hp.replay_capacity < 1) throw ConfigError("'replay_capacity' must be positive", line_no);
        } else if (key == "batch_size") {
            hp.batch_size = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.batch_size, {32}, key, line_no);
            if (hp.batch_size < 1) throw ConfigError("'batch_size' must be positive", line_no);
        } else if (key == "loss") {
            if (val != "L2") throw ConfigError("only the L2 loss is implemented", line_no);
            hp.loss = val;
        } else if (key == "epsilon_start") {
            hp.epsilon_start = parse_d(val, key, line_no);
            if (!unrestricted) check_domain_d(hp.epsilon_start, {1.0}, key, line_no);
            if (hp.epsilon_start < 0.0 || hp.epsilon_start > 1.0)
                throw ConfigError("'epsilon_start' must lie in [0, 1]", line_no);
        } else if (key == "epsilon_end") {
            hp.epsilon_end = parse_d(val, key, line_no);
            if (!unrestricted) check_domain_d(hp.epsilon_end, {0.01}, key, line_no);
            if (hp.epsilon_end < 0.0 || hp.epsilon_end > 1.0)
                throw ConfigError("'epsilon_end' must lie in [0, 1]", line_no);
        } else if (key == "validate_every") {
            hp.validate_every = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.validate_every, {100}, key, line_no);
            if (hp.validate_every < 1) throw ConfigError("'validate_every' must be positive", line_no);
        } else if (key == "eta_start") {
            hp.eta_start = parse_d(val, key, line_no);
            if (!unrestricted) check_domain_d(hp.eta_start, {0.001, 0.01, 0.1}, key, line_no);
            if (hp.eta_start <= 0.0) throw ConfigError("'eta_start' must be positive", line_no);
        } else if (key == "eta_duration") {
            hp.eta_duration = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.eta_duration, {2000, 4000}, key, line_no);
            if (hp.eta_duration < 1) throw ConfigError("'eta_duration' must be positive", line_no);
        } else if (key == "epsilon_duration") {
            hp.epsilon_duration = parse_ll(val, key, line_no);
            if (!unrestricted) check_domain_ll(hp.epsilon_duration, {10000, 20000, 30000}, key, line_no);
            if (hp.epsilon_duration < 1) throw ConfigError("'epsilon_duration' must be positive", line_no);
        } else if (key == "gamma") {
            hp.gamma = parse_d(val, key, line_no);
            if (!unrestricted) check_domain_d(hp.gamma, {0.99, 0.999}, key, line_no);
            if (hp.gamma <= 0.0 || hp.gamma > 1.0)
                throw ConfigError("'gamma' must lie in (0, 1]", line_no);
        } else if (key == "model") {
            if (val == "vqc") hp.model = ModelKind::Vqc;
            else if (val == "classical") hp.model = ModelKind::Classical;
            else throw ConfigError("'model' must be vqc or classical", line_no);
        } else if (key == "architecture") {
            if (val != "A" && val != "B")
                throw ConfigError("'architecture' must be A or B", line_no);
            hp.architecture = val[0];
        } else if (key == "encoding") {
            if (val != "C" && val != "SC" && val != "SD")
                throw ConfigError("'encoding' must be C, SC or SD", line_no);
            hp.encoding = val;
        } else if (key == "extraction") {
            if (val != "LS" && val != "GS" && val != "GSP")
                throw ConfigError("'extraction' must be LS, GS or GSP", line_no);
            hp.extraction = val;
        } else if (key == "layers") {
            hp.layers = parse_ll(val, key, line_no);
            if (hp.layers < 1) throw ConfigError("'layers' must be positive", line_no);
        } else if (key == "reuploading") {
            hp.reuploading = parse_flag(val, key, line_no);
        } else if (key == "reparam") {
            hp.reparam = parse_flag(val, key, line_no);
        } else if (key == "train_mode") {
            if (val == "step") hp.train_mode = TrainMode::Step;
            else if (val == "per_episode") hp.train_mode = TrainMode::PerEpisode;
            else if (val == "skolik_repro") hp.train_mode = TrainMode::SkolikRepro;
            else throw ConfigError("'train_mode' must be step, per_episode or skolik_repro", line_no);
        } else if (key == "bootstrap_on_truncation") {
            hp.bootstrap_on_truncation = parse_flag(val, key, line_no);
        } else {
            throw ConfigError("unknown key '" + key + "'", line_no);
        }
    }

    if (hp.batch_size > hp.replay_capacity)
        throw ConfigError("'batch_size' exceeds 'replay_capacity'", 0);

    if (require_grid_fields) {
        std::string missing;
        for (const char* k : {"eta_start", "eta_duration", "epsilon_duration", "gamma"})
            if (!out.explicit_keys.count(k)) missing += missing.empty() ? k : std::string(", ") + k;
        if (!missing.empty())
            throw ConfigError("missing required cross-validated keys: " + missing, 0);
    }
    return out;
}

std::string serialize_config(const HyperParams& hp) {
    std::ostringstream out;
    for (const char* key : kKeyOrder) {
        const std::string k = key;
        out << k << " = ";
        if (k == "num_steps") out << hp.num_steps;
        else if (k == "train_after") out << hp.train_after;
        else if (k == "train_every") out << hp.train_every;
        else if (k == "update_every_start") out << hp.update_every_start;
        else if (k == "update_every_end") out << hp.update_every_end;
        else if (k == "update_every_duration") out << hp.update_every_duration;
        else if (k == "replay_capacity") out << hp.replay_capacity;
        else if (k == "batch_size") out << hp.batch_size;
        else if (k == "loss") out << hp.loss;
        else if (k == "epsilon_start") out << format_double(hp.epsilon_start);
        else if (k == "epsilon_end") out << format_double(hp.epsilon_end);
        else if (k == "validate_every") out << hp.validate_every;
        else if (k == "eta_start") out << format_double(hp.eta_start);
        else if (k == "eta_duration") out << hp.eta_duration;
        else if (k == "epsilon_duration") out << hp.epsilon_duration;
        else if (k == "gamma") out << format_double(hp.gamma);
        else if (k == "model") out << (hp.model == ModelKind::Vqc ? "vqc" : "classical");
        else if (k == "architecture") out << hp.architecture;
        else if (k == "encoding") out << hp.encoding;
        else if (k == "extraction") out << hp.extraction;
        else if (k == "layers") out << hp.layers;
        else if (k == "reuploading") out << (hp.reuploading ? 1 : 0);
        else if (k == "reparam") out << (hp.reparam ? 1 : 0);
        else if (k == "train_mode")
            out << (hp.train_mode == TrainMode::Step ? "step"
                    : hp.train_mode == TrainMode::PerEpisode ? "per_episode" : "skolik_repro");
        else if (k == "bootstrap_on_truncation") out << (hp.bootstrap_on_truncation ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

std::vector<HyperParams> expand_grid(const ParsedConfig& base) {
    const bool pin_es = base.explicit_keys.count("eta_start") > 0;
    const bool pin_ed = base.explicit_keys.count("eta_duration") > 0;
    const bool pin_pd = base.explicit_keys.count("epsilon_duration") > 0;
    const bool pin_g = base.explicit_keys.count("gamma") > 0;

    const std::vector<double> es = pin_es ? std::vector<double>{base.hp.eta_start}
                                          : std::vector<double>{0.001, 0.01, 0.1};
    const std::vector<long long> ed = pin_ed ? std::vector<long long>{base.hp.eta_duration}
                                             : std::vector<long long>{2000, 4000};
    const std::vector<long long> pd = pin_pd ? std::vector<long long>{base.hp.epsilon_duration}
                                             : std::vector<long long>{10000, 20000, 30000};
    const std::vector<double> g = pin_g ? std::vector<double>{base.hp.gamma}
                                        : std::vector<double>{0.99, 0.999};

    std::vector<HyperParams> out;
    out.reserve(es.size() * ed.size() * pd.size() * g.size());
    for (double a : es)
        for (long long b : ed)
            for (long long c : pd)
                for (double d : g) {
                    HyperParams hp = base.hp;
                    hp.eta_start = a;
                    hp.eta_duration = b;
                    hp.epsilon_duration = c;
                    hp.gamma = d;
                    out.push_back(hp);
                }
    return out;
}

} // namespace qrl::xval
