#include "olpb/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace olpb {

namespace {

struct Token {
    std::string section;
    std::string key;
    std::string value;
    int line;
    int column; // of the value
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        const auto comment = line.find_first_of(";#");
        if (comment != std::string::npos) line = line.substr(0, comment);
        const std::string body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw ConfigError("unterminated section header", lineno, 1);
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty()) throw ConfigError("empty section name", lineno, 1);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", lineno, 1);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", lineno, 1);
        if (value.empty())
            throw ConfigError("missing value for key '" + key + "'", lineno,
                              static_cast<int>(eq) + 2);
        if (section.empty())
            throw ConfigError("key '" + key + "' outside any section", lineno, 1);
        tokens.push_back({section, key, value, lineno, static_cast<int>(eq) + 2});
    }
    return tokens;
}

double parse_double(const Token& t) {
    try {
        std::size_t used = 0;
        const double v = std::stod(t.value, &used);
        if (used != t.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("expected a number for '" + t.key + "', got '" + t.value + "'",
                          t.line, t.column);
    }
}

template <typename T>
std::vector<T> parse_list(const Token& t) {
    std::vector<T> out;
    std::istringstream is(t.value);
    std::string item;
    while (is >> item) {
        try {
            if constexpr (std::is_same_v<T, double>) {
                out.push_back(std::stod(item));
            } else {
                const long long v = std::stoll(item);
                if (v < 0) throw std::invalid_argument("");
                out.push_back(static_cast<T>(v));
            }
        } catch (const std::exception&) {
            throw ConfigError("bad list entry '" + item + "' for '" + t.key + "'", t.line,
                              t.column);
        }
    }
    if (out.empty())
        throw ConfigError("empty list for '" + t.key + "'", t.line, t.column);
    return out;
}

Distribution parse_distribution(const Token& t) {
    std::istringstream is(t.value);
    std::string name;
    is >> name;
    std::vector<double> params;
    double v;
    while (is >> v) params.push_back(v);
    auto need = [&](std::size_t count) {
        if (params.size() != count)
            throw ConfigError("distribution '" + name + "' needs " + std::to_string(count) +
                              " parameter(s)", t.line, t.column);
    };
    if (name == "uniform") {
        need(2);
        return Distribution::Uniform(params[0], params[1]);
    }
    if (name == "exp" || name == "exponential") {
        need(1);
        return Distribution::Exponential(params[0]);
    }
    if (name == "deterministic" || name == "point") {
        need(1);
        return Distribution::Deterministic(params[0]);
    }
    if (name == "none") return Distribution::Deterministic(kInf);
    throw ConfigError("unknown distribution '" + name +
                      "' (expected uniform|exp|deterministic)", t.line, t.column);
}

} // namespace

SimulationConfig parse_simulation_config(const std::string& text) {
    SimulationConfig cfg;
    cfg.spec = MarketSpec::uniform_1_19(1);
    bool bounds_set[5] = {false, false, false, false, false};
    bool have_policy = false;

    for (const Token& t : tokenize(text)) {
        if (t.section == "market") {
            if (t.key == "m") {
                cfg.spec.m = static_cast<int>(parse_double(t));
            } else if (t.key == "reward") {
                cfg.spec.reward_law = parse_distribution(t);
            } else if (t.key == "consumption") {
                cfg.spec.consumption_law = parse_distribution(t);
            } else if (t.key == "impatience") {
                cfg.spec.impatience_law = parse_distribution(t);
            } else if (t.key == "r_bar") {
                cfg.spec.bounds.r_bar = parse_double(t);
                bounds_set[0] = true;
            } else if (t.key == "a_bar") {
                cfg.spec.bounds.a_bar = parse_double(t);
                bounds_set[1] = true;
            } else if (t.key == "a_lower") {
                cfg.spec.bounds.a_lower = parse_double(t);
                bounds_set[2] = true;
            } else if (t.key == "d_lower") {
                cfg.spec.bounds.d_lower = parse_double(t);
                bounds_set[3] = true;
            } else if (t.key == "d_upper") {
                cfg.spec.bounds.d_upper = parse_double(t);
                bounds_set[4] = true;
            } else {
                throw ConfigError("unknown [market] key '" + t.key + "'", t.line, 1);
            }
        } else if (t.section == "policy") {
            if (t.key == "name") {
                try {
                    cfg.policy = policy_from_string(t.value);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(e.what(), t.line, t.column);
                }
                have_policy = true;
            } else {
                throw ConfigError("unknown [policy] key '" + t.key + "'", t.line, 1);
            }
        } else if (t.section == "grid") {
            if (t.key == "n") cfg.n_values = parse_list<std::size_t>(t);
            else if (t.key == "K" || t.key == "k") cfg.K_values = parse_list<int>(t);
            else if (t.key == "lambda") cfg.lambda_values = parse_list<double>(t);
            else if (t.key == "T" || t.key == "t") cfg.T_values = parse_list<double>(t);
            else if (t.key == "gamma") cfg.gamma_values = parse_list<double>(t);
            else throw ConfigError("unknown [grid] key '" + t.key + "'", t.line, 1);
        } else if (t.section == "run") {
            if (t.key == "trials") cfg.trials = static_cast<std::size_t>(parse_double(t));
            else if (t.key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(t));
            else if (t.key == "d0") cfg.d0 = parse_double(t);
            else if (t.key == "workers") cfg.workers = static_cast<int>(parse_double(t));
            else if (t.key == "benchmark") {
                if (t.value == "offline") cfg.use_filtered_benchmark = false;
                else if (t.value == "filtered") cfg.use_filtered_benchmark = true;
                else throw ConfigError("benchmark must be offline|filtered", t.line, t.column);
            } else {
                throw ConfigError("unknown [run] key '" + t.key + "'", t.line, 1);
            }
        } else {
            throw ConfigError("unknown section [" + t.section + "]", t.line, 1);
        }
    }
    if (!have_policy)
        throw std::invalid_argument("config: missing [policy] name");

    // Bounds default to the configured laws when not given explicitly.
    if (!bounds_set[0]) cfg.spec.bounds.r_bar = cfg.spec.reward_law.support_hi();
    if (!bounds_set[1]) cfg.spec.bounds.a_bar = cfg.spec.consumption_law.support_hi();
    if (!bounds_set[2]) cfg.spec.bounds.a_lower = cfg.spec.consumption_law.support_lo();
    if (!bounds_set[3]) cfg.spec.bounds.d_lower = 1.0;
    if (!bounds_set[4]) cfg.spec.bounds.d_upper = std::max(10.0, 2.0 * cfg.d0);
    return cfg;
}

SimulationConfig load_simulation_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_simulation_config(os.str());
}

std::vector<ExperimentCell> SimulationConfig::cells() const {
    std::vector<ExperimentCell> out;
    ExperimentCell base;
    base.policy = policy;
    base.spec = spec;
    base.d0 = d0;
    base.trials = trials;
    base.seed = seed;
    base.use_filtered_benchmark = use_filtered_benchmark;
    base.workers = workers;

    const bool count_based = base.count_based();
    if (count_based) {
        if (n_values.empty())
            throw std::invalid_argument("config: [grid] n is required for " +
                                        to_string(policy));
        const std::vector<int> ks =
            policy == PolicyKind::ahdla ? std::vector<int>{2} : K_values;
        if (ks.empty())
            throw std::invalid_argument("config: [grid] K is required for " +
                                        to_string(policy));
        for (std::size_t n : n_values)
            for (int K : ks) {
                ExperimentCell c = base;
                c.n = n;
                c.K = K;
                c.validate();
                out.push_back(c);
            }
    } else {
        if (lambda_values.empty() || T_values.empty())
            throw std::invalid_argument("config: [grid] lambda and T are required for " +
                                        to_string(policy));
        for (double lambda : lambda_values)
            for (double T : T_values) {
                if (!gamma_values.empty()) {
                    for (double gamma : gamma_values) {
                        ExperimentCell c = base;
                        c.lambda = lambda;
                        c.T = T;
                        c.gamma = gamma;
                        c.K = std::max(
                            2, static_cast<int>(std::lround(T * std::pow(lambda, gamma))));
                        c.validate();
                        out.push_back(c);
                    }
                } else {
                    if (K_values.empty())
                        throw std::invalid_argument("config: [grid] K or gamma required");
                    for (int K : K_values) {
                        ExperimentCell c = base;
                        c.lambda = lambda;
                        c.T = T;
                        c.K = K;
                        c.validate();
                        out.push_back(c);
                    }
                }
            }
    }
    return out;
}

} // namespace olpb
