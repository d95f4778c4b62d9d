#include "moeadstn/config_io.hpp"

#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "moeadstn/errors.hpp"
#include "moeadstn/io.hpp"
#include "moeadstn/text.hpp"

namespace moeadstn {

namespace {

const std::set<std::string> known_keys = {
    "decomposition", "population_size", "aggregation", "update",     "nr",      "neighborhood_size",
    "delta",         "de_F",            "pm_eta",      "pm_prob",    "partial_update", "restart",
    "restart_period", "budget",         "cht_C",       "cht_alpha"};

std::size_t as_count(const toml::node& n, const std::string& key) {
    auto v = n.value<std::int64_t>();
    if (!v || *v < 0) {
        throw ConfigError("config key '" + key + "' must be a nonnegative integer");
    }
    return static_cast<std::size_t>(*v);
}

double as_real(const toml::node& n, const std::string& key) {
    auto v = n.value<double>();
    if (!v) {
        throw ConfigError("config key '" + key + "' must be a number");
    }
    return *v;
}

std::string as_text(const toml::node& n, const std::string& key) {
    auto v = n.value<std::string>();
    if (!v) {
        throw ConfigError("config key '" + key + "' must be a string");
    }
    return *v;
}

} // namespace

Config parse_config_toml(std::string_view text, const Config& defaults) {
    toml::table tbl;
    try {
        tbl = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "config parse error at line " << e.source().begin.line << ": " << e.description();
        throw ConfigError(msg.str());
    }
    Config c = defaults;
    for (const auto& [k, node] : tbl) {
        const std::string key(k.str());
        if (!known_keys.count(key)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        if (key == "decomposition") {
            const auto v = as_text(node, key);
            if (v == "uniform") c.decomposition = DecompositionKind::uniform;
            else if (v == "sld") c.decomposition = DecompositionKind::sld;
            else if (v == "sobol") c.decomposition = DecompositionKind::sobol;
            else throw ConfigError("decomposition must be uniform, sld or sobol");
        } else if (key == "population_size") {
            c.population_size = as_count(node, key);
        } else if (key == "aggregation") {
            const auto v = as_text(node, key);
            if (v == "wt") c.aggregation = AggregationKind::wt;
            else if (v == "awt") c.aggregation = AggregationKind::awt;
            else throw ConfigError("aggregation must be wt or awt");
        } else if (key == "update") {
            const auto v = as_text(node, key);
            if (v == "restricted") c.update.kind = UpdateKind::restricted;
            else if (v == "best") c.update.kind = UpdateKind::best;
            else throw ConfigError("update must be restricted or best");
        } else if (key == "nr") {
            c.update.nr = as_count(node, key);
        } else if (key == "neighborhood_size") {
            c.neighborhood_size = as_count(node, key);
        } else if (key == "delta") {
            c.delta = as_real(node, key);
        } else if (key == "de_F") {
            c.de_F = as_real(node, key);
        } else if (key == "pm_eta") {
            c.pm_eta = as_real(node, key);
        } else if (key == "pm_prob") {
            c.pm_prob = as_real(node, key);
        } else if (key == "partial_update") {
            if (auto s = node.value<std::string>(); s && *s == "none") {
                c.partial_update.reset();
            } else {
                c.partial_update = as_real(node, key);
            }
        } else if (key == "restart") {
            auto v = node.value<bool>();
            if (!v) {
                throw ConfigError("config key 'restart' must be a boolean");
            }
            c.restart = *v;
        } else if (key == "restart_period") {
            c.restart_period = as_count(node, key);
        } else if (key == "budget") {
            c.budget = as_count(node, key);
        } else if (key == "cht_C") {
            c.cht.C = as_real(node, key);
        } else if (key == "cht_alpha") {
            c.cht.alpha = as_real(node, key);
        }
    }
    c.validate();
    return c;
}

Config read_config_toml(const std::filesystem::path& path, const Config& defaults) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError&) {
        throw ConfigError("cannot read config file " + path.string());
    }
    return parse_config_toml(text, defaults);
}

std::string config_to_toml(const Config& c) {
    // Written by hand so that doubles keep their shortest round-trip form.
    std::ostringstream out;
    out << "decomposition = \"" << to_string(c.decomposition) << "\"\n"
        << "population_size = " << c.population_size << '\n'
        << "aggregation = \"" << to_string(c.aggregation) << "\"\n"
        << "update = \"" << to_string(c.update.kind) << "\"\n"
        << "nr = " << c.update.nr << '\n'
        << "neighborhood_size = " << c.neighborhood_size << '\n';
    auto real = [](double v) {
        std::string s = format_double(v);
        if (s.find_first_of(".eEn") == std::string::npos) {
            s += ".0";
        }
        return s;
    };
    out << "delta = " << real(c.delta) << '\n'
        << "de_F = " << real(c.de_F) << '\n'
        << "pm_eta = " << real(c.pm_eta) << '\n'
        << "pm_prob = " << real(c.pm_prob) << '\n';
    if (c.partial_update) {
        out << "partial_update = " << real(*c.partial_update) << '\n';
    } else {
        out << "partial_update = \"none\"\n";
    }
    out << "restart = " << (c.restart ? "true" : "false") << '\n'
        << "restart_period = " << c.restart_period << '\n'
        << "budget = " << c.budget << '\n'
        << "cht_C = " << real(c.cht.C) << '\n'
        << "cht_alpha = " << real(c.cht.alpha) << '\n';
    return out.str();
}

void write_config_toml(const std::filesystem::path& path, const Config& config) {
    write_text_file(path, config_to_toml(config));
}

} // namespace moeadstn
