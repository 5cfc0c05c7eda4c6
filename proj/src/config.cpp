#include "acfleet/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "acfleet/io.hpp"

namespace acfleet {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double number(const std::string& v, const std::string& key) {
    const auto slash = v.find('/');
    if (slash != std::string::npos) {
        const double num = io::parse_double(trim(v.substr(0, slash)), key);
        const double den = io::parse_double(trim(v.substr(slash + 1)), key);
        if (den == 0.0) throw ConfigError(key + ": zero denominator");
        return num / den;
    }
    return io::parse_double(v, key);
}

std::uint64_t unsigned_int(const std::string& v, const std::string& key) {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    return out;
}

bool boolean(const std::string& v, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::filesystem::path&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto num = [&t](const std::string& key, auto field) {
            t[key] = [key, field](RunConfig& c, const std::string& v, const std::filesystem::path&) {
                field(c) = number(v, key);
            };
        };
        auto path = [&t](const std::string& key, auto field) {
            t[key] = [field](RunConfig& c, const std::string& v, const std::filesystem::path& base) {
                std::filesystem::path p(v);
                field(c) = p.is_relative() && !base.empty() ? base / p : p;
            };
        };
        auto flag = [&t](const std::string& key, auto field) {
            t[key] = [key, field](RunConfig& c, const std::string& v, const std::filesystem::path&) {
                field(c) = boolean(v, key);
            };
        };

        t["seed"] = [](RunConfig& c, const std::string& v, const auto&) { c.seed = unsigned_int(v, "seed"); };

        t["population.n"] = [](RunConfig& c, const std::string& v, const auto&) {
            c.population.n = unsigned_int(v, "population.n");
        };
        num("population.alpha_mean", [](RunConfig& c) -> double& { return c.population.alpha.mean; });
        num("population.beta_mean", [](RunConfig& c) -> double& { return c.population.beta.mean; });
        num("population.p_thermal", [](RunConfig& c) -> double& { return c.population.p_thermal; });
        num("population.eta", [](RunConfig& c) -> double& { return c.population.eta; });
        t["population.delta_shape"] = [](RunConfig& c, const std::string& v, const auto&) {
            try {
                c.population.delta.shape = parse_delta_shape(v);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("population.delta_shape: ") + e.what());
            }
        };
        num("population.delta", [](RunConfig& c) -> double& { return c.population.delta.delta_const; });
        num("population.delta_min", [](RunConfig& c) -> double& { return c.population.delta.delta_min; });
        num("population.delta_max", [](RunConfig& c) -> double& { return c.population.delta.delta_max; });
        num("population.s0_mean", [](RunConfig& c) -> double& { return c.population.init_mean[0]; });
        num("population.theta0_mean", [](RunConfig& c) -> double& { return c.population.init_mean[1]; });
        num("population.var_s0", [](RunConfig& c) -> double& { return c.population.init_cov[0]; });
        t["population.cov_s0_theta0"] = [](RunConfig& c, const std::string& v, const auto&) {
            c.population.init_cov[1] = c.population.init_cov[2] = number(v, "population.cov_s0_theta0");
        };
        num("population.var_theta0", [](RunConfig& c) -> double& { return c.population.init_cov[3]; });
        num("population.on_prob", [](RunConfig& c) -> double& { return c.population.on_prob; });

        num("planning.horizon_h", [](RunConfig& c) -> double& { return c.horizon_h; });
        num("planning.dt_min", [](RunConfig& c) -> double& { return c.dt_min; });
        t["planning.tau_bar"] = [](RunConfig& c, const std::string& v, const auto&) {
            c.tau_bar = number(v, "planning.tau_bar");
        };
        t["planning.tau_bar_position"] = [](RunConfig& c, const std::string& v, const auto&) {
            c.tau_bar_position = number(v, "planning.tau_bar_position");
        };
        t["planning.energy_kwh"] = [](RunConfig& c, const std::string& v, const auto&) {
            c.energy_kwh = number(v, "planning.energy_kwh");
        };
        num("planning.initial_noise_c", [](RunConfig& c) -> double& { return c.planner_initial_noise_c; });
        t["planning.threads"] = [](RunConfig& c, const std::string& v, const auto&) {
            c.threads = static_cast<unsigned>(unsigned_int(v, "planning.threads"));
        };

        num("control.kp", [](RunConfig& c) -> double& { return c.gains.kp; });
        num("control.ki", [](RunConfig& c) -> double& { return c.gains.ki; });
        num("control.kd", [](RunConfig& c) -> double& { return c.gains.kd; });
        num("control.dt_s", [](RunConfig& c) -> double& { return c.dt_ctrl_s; });
        flag("control.enabled", [](RunConfig& c) -> bool& { return c.control_enabled; });
        flag("control.uncontrolled_baseline", [](RunConfig& c) -> bool& { return c.uncontrolled_baseline; });
        flag("control.record_widths", [](RunConfig& c) -> bool& { return c.record_widths; });

        flag("privacy.enabled", [](RunConfig& c) -> bool& { return c.privacy_enabled; });
        num("privacy.epsilon", [](RunConfig& c) -> double& { return c.privacy.epsilon; });
        num("privacy.p", [](RunConfig& c) -> double& { return c.privacy.p; });
        t["privacy.mode"] = [](RunConfig& c, const std::string& v, const auto&) {
            if (v == "bernoulli") {
                c.privacy.mode = Participation::Bernoulli;
            } else if (v == "exact") {
                c.privacy.mode = Participation::ExactCount;
            } else {
                throw ConfigError("privacy.mode: expected bernoulli or exact, got '" + v + "'");
            }
        };
        t["privacy.samples"] = [](RunConfig& c, const std::string& v, const auto&) {
            c.privacy_samples = unsigned_int(v, "privacy.samples");
        };
        flag("privacy.tracking_check", [](RunConfig& c) -> bool& { return c.privacy_tracking_check; });

        t["scenario.kind"] = [](RunConfig& c, const std::string& v, const auto&) {
            if (v != "files") {
                try {
                    parse_scenario_kind(v);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("scenario.kind: ") + e.what());
                }
            }
            c.scenario.kind = v;
        };
        path("scenario.price_csv", [](RunConfig& c) -> std::filesystem::path& { return c.scenario.price_csv; });
        path("scenario.ambient_forecast_csv",
             [](RunConfig& c) -> std::filesystem::path& { return c.scenario.ambient_forecast_csv; });
        path("scenario.ambient_realized_csv",
             [](RunConfig& c) -> std::filesystem::path& { return c.scenario.ambient_realized_csv; });
        num("scenario.temp_price_coupling",
            [](RunConfig& c) -> double& { return c.scenario.synth.temp_price_coupling; });
        num("scenario.realized_bias_c", [](RunConfig& c) -> double& { return c.scenario.synth.realized_bias_c; });
        num("scenario.realized_noise_c", [](RunConfig& c) -> double& { return c.scenario.synth.realized_noise_c; });
        num("scenario.price_jitter", [](RunConfig& c) -> double& { return c.scenario.synth.price_jitter; });
        t["scenario.count"] = [](RunConfig& c, const std::string& v, const auto&) {
            c.scenario.count = unsigned_int(v, "scenario.count");
        };
        t["scenario.set_kinds"] = [](RunConfig& c, const std::string& v, const auto&) {
            auto kinds = list(v);
            for (const auto& k : kinds) {
                try {
                    parse_scenario_kind(k);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("scenario.set_kinds: ") + e.what());
                }
            }
            c.scenario.set_kinds = std::move(kinds);
        };

        t["contracts.homes"] = [](RunConfig& c, const std::string& v, const auto&) {
            c.contract_homes.clear();
            if (v == "all") return;
            for (const auto& item : list(v)) c.contract_homes.push_back(unsigned_int(item, "contracts.homes"));
        };

        path("output.dir", [](RunConfig& c) -> std::filesystem::path& { return c.out_dir; });
        return t;
    }();
    return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

void RunConfig::validate() const {
    try {
        population.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("population: ") + e.what());
    }
    if ((tau_bar ? 1 : 0) + (energy_kwh ? 1 : 0) + (tau_bar_position ? 1 : 0) > 1) {
        throw ConfigError("planning.tau_bar, planning.tau_bar_position and planning.energy_kwh are mutually exclusive");
    }
    if (tau_bar_position && !(*tau_bar_position >= 0.0 && *tau_bar_position <= 1.0)) {
        throw ConfigError("planning.tau_bar_position must lie in [0, 1]");
    }
    if (tau_bar && !(*tau_bar >= 0.0 && *tau_bar <= 1.0)) throw ConfigError("planning.tau_bar must lie in [0, 1]");
    if (energy_kwh && !(*energy_kwh >= 0.0)) throw ConfigError("planning.energy_kwh must be >= 0");
    if (!(horizon_h > 0.0) || !(dt_min > 0.0)) throw ConfigError("planning horizon and step must be positive");
    if (!(planner_initial_noise_c >= 0.0)) throw ConfigError("planning.initial_noise_c must be >= 0");
    if (!(dt_ctrl_s > 0.0) || dt_ctrl_s > dt_min * 60.0) {
        throw ConfigError("control.dt_s must be positive and no larger than the planning step");
    }
    try {
        gains.validate();
        if (privacy_enabled) privacy.validate(population.n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (scenario.kind == "files" && (scenario.price_csv.empty() || scenario.ambient_forecast_csv.empty())) {
        throw ConfigError("scenario.kind = files needs scenario.price_csv and scenario.ambient_forecast_csv");
    }
    if (scenario.set_kinds.empty()) throw ConfigError("scenario.set_kinds must not be empty");
    for (std::size_t id : contract_homes) {
        if (id >= population.n) throw ConfigError("contracts.homes: id " + std::to_string(id) + " out of range");
    }
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = "config line " + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(where + ": unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
        try {
            it->second(cfg, value, base_dir);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text, path.parent_path());
}

}  // namespace acfleet
