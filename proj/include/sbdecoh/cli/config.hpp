// config.hpp - sectioned key = value experiment configuration

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "../bath_model.hpp"
#include "../frequency_grid.hpp"

namespace sbdecoh::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Schema = std::map<std::string, std::set<std::string>>;

class Config {
  public:
    static Config parse(const std::string& text) {
        Config c;
        std::istringstream is(text);
        try {
            boost::property_tree::ini_parser::read_ini(is, c.tree_);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        return c;
    }

    static Config load(const std::string& path) {
        Config c;
        try {
            boost::property_tree::ini_parser::read_ini(path, c.tree_);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        return c;
    }

    // Rejects any section or key not in the schema.
    void check(const Schema& schema) const {
        for (const auto& [section, body] : tree_) {
            if (body.empty() && !body.data().empty())
                throw ConfigError("config: key '" + section + "' outside of any section");
            const auto it = schema.find(section);
            if (it == schema.end()) throw ConfigError("config: unknown section [" + section + "]");
            for (const auto& [key, v] : body) {
                (void)v;
                if (!it->second.count(key)) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
            }
        }
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = tree_.get_child_optional(section);
        return s && s->get_child_optional(boost::property_tree::ptree::path_type(key, '\0'));
    }

    std::string get_string(const std::string& section, const std::string& key, const std::string& def) const {
        if (!has(section, key)) return def;
        return trim(tree_.get_child(section).get_child(boost::property_tree::ptree::path_type(key, '\0')).data());
    }

    double get_double(const std::string& section, const std::string& key, double def) const {
        if (!has(section, key)) return def;
        return to_double(get_string(section, key, ""), section + "." + key);
    }

    int get_int(const std::string& section, const std::string& key, int def) const {
        if (!has(section, key)) return def;
        const auto s = get_string(section, key, "");
        int v = 0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size())
            throw ConfigError("config: " + section + "." + key + " must be an integer, got '" + s + "'");
        return v;
    }

    std::vector<std::string> get_list(const std::string& section, const std::string& key) const {
        std::vector<std::string> out;
        if (!has(section, key)) return out;
        std::stringstream ss(get_string(section, key, ""));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) throw ConfigError("config: empty list entry in " + section + "." + key);
            out.push_back(item);
        }
        return out;
    }

    std::vector<double> get_doubles(const std::string& section, const std::string& key) const {
        std::vector<double> out;
        for (const auto& s : get_list(section, key)) out.push_back(to_double(s, section + "." + key));
        return out;
    }

  private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    static double to_double(const std::string& s, const std::string& what) {
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
            throw ConfigError("config: " + what + " must be a number, got '" + s + "'");
        return v;
    }

    boost::property_tree::ptree tree_;
};

inline const std::set<std::string>& bath_keys() {
    static const std::set<std::string> k{"d", "lambda", "theta"};
    return k;
}

inline const std::set<std::string>& grid_keys() {
    static const std::set<std::string> k{"x_max", "panel_width", "nodes", "order", "tolerance"};
    return k;
}

// [bath]; lambda = 0 only where allow_zero_lambda
inline BathSpec read_bath(const Config& c, bool allow_zero_lambda = false) {
    BathSpec b;
    b.d = c.get_int("bath", "d", 3);
    b.lambda = c.get_double("bath", "lambda", 1.0);
    b.theta = c.get_double("bath", "theta", 0.0);
    if (allow_zero_lambda && b.lambda == 0.0) {
        BathSpec probe = b;
        probe.lambda = 1.0;
        try {
            probe.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        return b;
    }
    try {
        b.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return b;
}

// Grid sized by the problem unless overridden in [grid].
inline FrequencyGrid read_grid(const Config& c, double theta, double tau_max, double dt_min = 0.0) {
    GridOptions opt;
    opt.order = c.get_int("grid", "order", 16);
    opt.x_max = c.get_double("grid", "x_max", 40.0 + 20.0 * theta + (dt_min > 0.0 ? 4.0 / dt_min : 0.0));
    opt.panel_width = c.get_double("grid", "panel_width", tau_max > 0.0 ? std::min(0.25, 8.0 / tau_max) : 0.25);
    opt.tolerance = c.get_double("grid", "tolerance", 1e-10);
    if (c.has("grid", "nodes")) {
        const int n = c.get_int("grid", "nodes", 0);
        if (n < opt.order) throw ConfigError("config: grid.nodes must be >= grid.order");
        opt.panel_width = opt.x_max * opt.order / n;
    }
    try {
        return FrequencyGrid::composite(opt);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

}  // namespace sbdecoh::cli
