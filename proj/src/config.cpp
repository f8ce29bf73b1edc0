#include "aqem/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "aqem/errors.hpp"
#include "aqem/persistence.hpp"

namespace aqem {

namespace {

struct KeySpec {
    const char* key;
    const char* kind;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

struct BadValue {
    std::string message;
};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(const std::string& v) {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw BadValue{"expects an integer, got '" + v + "'"};
    }
    return out;
}

int parse_int(const std::string& v) {
    return parse_integer<int>(v);
}

std::size_t parse_count(const std::string& v) {
    if (!v.empty() && v.front() == '-') {
        throw BadValue{"expects a non-negative integer, got '" + v + "'"};
    }
    // Accept 1e6 style counts as long as they are exact integers.
    if (v.find_first_of("eE.") != std::string::npos) {
        double d = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
        if (ec != std::errc() || ptr != v.data() + v.size() || d < 0 || d > 1e18 ||
            d != static_cast<double>(static_cast<std::size_t>(d))) {
            throw BadValue{"expects a non-negative integer, got '" + v + "'"};
        }
        return static_cast<std::size_t>(d);
    }
    return parse_integer<std::size_t>(v);
}

double parse_real(const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw BadValue{"expects a number, got '" + v + "'"};
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") {
        return true;
    }
    if (v == "false" || v == "no" || v == "off" || v == "0") {
        return false;
    }
    throw BadValue{"expects true or false, got '" + v + "'"};
}

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw BadValue{message};
    }
}

std::string bool_text(bool b) {
    return b ? "true" : "false";
}

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = {
        {"problem", "interferometer|walk",
         [](RunConfig& c, const std::string& v) {
             try {
                 c.ladder.problem = parse_problem(v);
             } catch (const ConfigError& e) {
                 throw BadValue{e.what()};
             }
         },
         [](const RunConfig& c) { return std::string(problem_name(c.ladder.problem)); }},
        {"n_min", "integer",
         [](RunConfig& c, const std::string& v) {
             c.ladder.n_min = parse_int(v);
             require(c.ladder.n_min >= 1, "must be at least 1");
         },
         [](const RunConfig& c) { return std::to_string(c.ladder.n_min); }},
        {"n_max", "integer",
         [](RunConfig& c, const std::string& v) {
             c.ladder.n_max = parse_int(v);
             require(c.ladder.n_max >= 1, "must be at least 1");
         },
         [](const RunConfig& c) { return std::to_string(c.ladder.n_max); }},
        {"walk_steps", "integer",
         [](RunConfig& c, const std::string& v) {
             c.ladder.walk_steps = parse_int(v);
             require(c.ladder.walk_steps >= 1, "must be at least 1");
         },
         [](const RunConfig& c) { return std::to_string(c.ladder.walk_steps); }},
        {"walk_start", "balanced|symmetric",
         [](RunConfig& c, const std::string& v) {
             try {
                 c.ladder.walk_start = parse_walker_start(v);
             } catch (const std::exception& e) {
                 throw BadValue{e.what()};
             }
         },
         [](const RunConfig& c) { return std::string(walker_start_name(c.ladder.walk_start)); }},
        {"optimizer", "de|pso",
         [](RunConfig& c, const std::string& v) {
             try {
                 c.ladder.optimizer = parse_optimizer(v);
             } catch (const ConfigError& e) {
                 throw BadValue{e.what()};
             }
         },
         [](const RunConfig& c) { return std::string(optimizer_name(c.ladder.optimizer)); }},
        {"xi", "expression in N",
         [](RunConfig& c, const std::string& v) { c.ladder.budgets.population = BudgetExpr(v); },
         [](const RunConfig& c) { return c.ladder.budgets.population.text(); }},
        {"upsilon", "expression in N",
         [](RunConfig& c, const std::string& v) { c.ladder.budgets.iterations = BudgetExpr(v); },
         [](const RunConfig& c) { return c.ladder.budgets.iterations.text(); }},
        {"k", "expression in N",
         [](RunConfig& c, const std::string& v) { c.ladder.budgets.samples = BudgetExpr(v); },
         [](const RunConfig& c) { return c.ladder.budgets.samples.text(); }},
        {"omega", "expression in N",
         [](RunConfig& c, const std::string& v) { c.ladder.budgets.repetitions = BudgetExpr(v); },
         [](const RunConfig& c) { return c.ladder.budgets.repetitions.text(); }},
        {"de_mu", "number",
         [](RunConfig& c, const std::string& v) {
             c.ladder.de.mutation_scale = parse_real(v);
             require(c.ladder.de.mutation_scale >= 0.0 && c.ladder.de.mutation_scale <= 2.0, "must lie in [0, 2]");
         },
         [](const RunConfig& c) { return format_double(c.ladder.de.mutation_scale); }},
        {"de_gamma", "number",
         [](RunConfig& c, const std::string& v) {
             c.ladder.de.crossover_rate = parse_real(v);
             require(c.ladder.de.crossover_rate >= 0.0 && c.ladder.de.crossover_rate <= 1.0, "must lie in [0, 1]");
         },
         [](const RunConfig& c) { return format_double(c.ladder.de.crossover_rate); }},
        {"pso_alpha", "number",
         [](RunConfig& c, const std::string& v) { c.ladder.pso.exploration = parse_real(v); },
         [](const RunConfig& c) { return format_double(c.ladder.pso.exploration); }},
        {"pso_beta", "number",
         [](RunConfig& c, const std::string& v) { c.ladder.pso.exploitation = parse_real(v); },
         [](const RunConfig& c) { return format_double(c.ladder.pso.exploitation); }},
        {"pso_inertia", "number",
         [](RunConfig& c, const std::string& v) { c.ladder.pso.inertia = parse_real(v); },
         [](const RunConfig& c) { return format_double(c.ladder.pso.inertia); }},
        {"pso_nu", "number or auto",
         [](RunConfig& c, const std::string& v) {
             if (v == "auto") {
                 c.ladder.pso.velocity_clamp.reset();
                 return;
             }
             c.ladder.pso.velocity_clamp = parse_real(v);
             require(*c.ladder.pso.velocity_clamp > 0.0, "must be positive");
         },
         [](const RunConfig& c) {
             return c.ladder.pso.velocity_clamp ? format_double(*c.ladder.pso.velocity_clamp)
                                                : std::string("auto  # 0.25 of each box width");
         }},
        {"pso_neighborhood", "integer or auto",
         [](RunConfig& c, const std::string& v) {
             if (v == "auto") {
                 c.ladder.pso.neighborhood_size.reset();
                 return;
             }
             c.ladder.pso.neighborhood_size = parse_count(v);
             require(*c.ladder.pso.neighborhood_size >= 1, "must be at least 1");
         },
         [](const RunConfig& c) {
             return c.ladder.pso.neighborhood_size ? std::to_string(*c.ladder.pso.neighborhood_size)
                                                   : std::string("auto  # ceil(log2 xi)");
         }},
        {"seed", "integer",
         [](RunConfig& c, const std::string& v) { c.ladder.master_seed = parse_integer<std::uint64_t>(v); },
         [](const RunConfig& c) { return std::to_string(c.ladder.master_seed); }},
        {"report_samples", "integer",
         [](RunConfig& c, const std::string& v) {
             c.ladder.report_samples = parse_count(v);
             require(c.ladder.report_samples >= 1, "must be at least 1");
         },
         [](const RunConfig& c) { return std::to_string(c.ladder.report_samples); }},
        {"selection_samples", "integer",
         [](RunConfig& c, const std::string& v) {
             c.ladder.selection_samples = parse_count(v);
             require(c.ladder.selection_samples >= 1, "must be at least 1");
         },
         [](const RunConfig& c) { return std::to_string(c.ladder.selection_samples); }},
        {"threads", "integer",
         [](RunConfig& c, const std::string& v) { c.ladder.threads = parse_integer<unsigned>(v); },
         [](const RunConfig& c) {
             return c.ladder.threads == 0 ? std::string("0  # all cores") : std::to_string(c.ladder.threads);
         }},
        {"record_wall_time", "boolean",
         [](RunConfig& c, const std::string& v) { c.ladder.record_wall_time = parse_bool(v); },
         [](const RunConfig& c) { return bool_text(c.ladder.record_wall_time); }},
        {"output_dir", "path",
         [](RunConfig& c, const std::string& v) {
             require(!v.empty(), "must not be empty");
             c.output_dir = v;
         },
         [](const RunConfig& c) { return c.output_dir.string(); }},
        {"baseline", "boolean", [](RunConfig& c, const std::string& v) { c.baseline = parse_bool(v); },
         [](const RunConfig& c) { return bool_text(c.baseline); }},
        {"oracle", "boolean", [](RunConfig& c, const std::string& v) { c.oracle = parse_bool(v); },
         [](const RunConfig& c) { return bool_text(c.oracle); }},
        {"oracle_grid", "integer",
         [](RunConfig& c, const std::string& v) {
             c.oracle_grid = parse_count(v);
             require(c.oracle_grid >= 128, "must be at least 128");
         },
         [](const RunConfig& c) { return std::to_string(c.oracle_grid); }},
    };
    return table;
}

std::string unquote(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        return v.substr(1, v.size() - 2);
    }
    return v;
}

std::string where(const std::string& source, int line, const std::string& key) {
    if (line == 0) {
        return source + ": key '" + key + "' (default)";
    }
    return source + ":" + std::to_string(line) + ": key '" + key + "'";
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source, std::ostream& log) {
    RunConfig config;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (line_no == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) {
            raw.erase(0, 3);
        }
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value', got '" + line +
                              "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        const auto& table = key_table();
        const auto spec = std::find_if(table.begin(), table.end(), [&](const KeySpec& s) { return key == s.key; });
        if (spec == table.end()) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (const auto prior = seen.find(key); prior != seen.end()) {
            throw ConfigError(where(source, line_no, key) + " repeats line " + std::to_string(prior->second));
        }
        seen[key] = line_no;
        try {
            spec->set(config, value);
        } catch (const BadValue& e) {
            throw ConfigError(where(source, line_no, key) + " " + e.message);
        } catch (const ConfigError& e) {
            throw ConfigError(where(source, line_no, key) + ": " + e.what());
        }
    }

    const auto line_of = [&](const std::string& key) {
        const auto it = seen.find(key);
        return it == seen.end() ? 0 : it->second;
    };
    const auto& ladder = config.ladder;
    if (ladder.n_max < ladder.n_min) {
        throw ConfigError(where(source, line_of("n_max"), "n_max") + " must be at least n_min = " +
                          std::to_string(ladder.n_min));
    }
    if (ladder.problem == ProblemKind::Interferometer && ladder.n_max > kMaxPhotons) {
        throw ConfigError(where(source, line_of("n_max"), "n_max") + " exceeds the " +
                          std::to_string(kMaxPhotons) + "-photon limit");
    }
    for (int n = ladder.n_min; n <= ladder.n_max; ++n) {
        const struct {
            const char* key;
            const BudgetExpr& expr;
            long long minimum;
        } checks[] = {
            {"xi", ladder.budgets.population, ladder.optimizer == OptimizerKind::DE ? 4 : 1},
            {"upsilon", ladder.budgets.iterations, 1},
            {"k", ladder.budgets.samples, 1},
            {"omega", ladder.budgets.repetitions, 1},
        };
        for (const auto& c : checks) {
            const long long value = c.expr(n);
            if (value < c.minimum) {
                std::string message = where(source, line_of(c.key), c.key) + " = " + c.expr.text() + " gives " +
                                      std::to_string(value) + " at N=" + std::to_string(n) + ", needs at least " +
                                      std::to_string(c.minimum);
                if (c.minimum == 4) {
                    message += " for DE";
                }
                throw ConfigError(message);
            }
        }
        if (ladder.pso.neighborhood_size && ladder.optimizer == OptimizerKind::PSO &&
            *ladder.pso.neighborhood_size > static_cast<std::size_t>(ladder.budgets.population(n))) {
            throw ConfigError(where(source, line_of("pso_neighborhood"), "pso_neighborhood") +
                              " exceeds xi at N=" + std::to_string(n));
        }
    }
    try {
        ladder.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }

    for (const auto& spec : key_table()) {
        if (!seen.count(spec.key)) {
            log << "config: default " << spec.key << " = " << spec.get(config) << '\n';
        }
    }
    return config;
}

RunConfig parse_config(const std::filesystem::path& path, std::ostream& log) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.string(), log);
}

std::string describe(const RunConfig& config) {
    std::string out;
    for (const auto& spec : key_table()) {
        out += std::string(spec.key) + " = " + spec.get(config) + "\n";
    }
    return out;
}

}  // namespace aqem
