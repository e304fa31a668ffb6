#include "fluctlab/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fluctlab {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool known_section(const std::string& name) {
    return name == "process" || name == "experiment" || name == "output" || name == "rng" ||
           name == "measure";
}

double parse_double(const std::string& where, const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError(where + ": not a number: '" + text + "'");
    return v;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

Config Config::parse_text(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::vector<std::pair<std::string, std::string>>* current = nullptr;
    std::string current_name;
    while (std::getline(in, raw)) {
        ++lineno;
        const size_t hash = raw.find_first_of("#;");
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const std::string at = "line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(at + ": unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (!known_section(name)) throw ConfigError(at + ": unknown section [" + name + "]");
            for (const auto& s : c.sections_)
                if (s.first == name) throw ConfigError(at + ": duplicate section [" + name + "]");
            c.sections_.push_back({name, {}});
            current = &c.sections_.back().second;
            current_name = name;
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(at + ": expected key = value");
        if (!current) throw ConfigError(at + ": key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(at + ": empty key");
        if (value.empty()) throw ConfigError(at + ": empty value for '" + key + "'");
        for (const auto& [k, v] : *current)
            if (k == key)
                throw ConfigError(at + ": duplicate key '" + key + "' in [" + current_name + "]");
        current->push_back({key, value});
    }
    return c;
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
    for (const auto& s : sections_)
        if (s.first == section)
            for (const auto& [k, v] : s.second)
                if (k == key) return &v;
    return nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string Config::require(const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) throw ConfigError("missing [" + section + "] " + key);
    return *v;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    const std::string* v = find(section, key);
    return v ? *v : fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const std::string* v = find(section, key);
    return v ? parse_double("[" + section + "] " + key, *v) : fallback;
}

double Config::require_double(const std::string& section, const std::string& key) const {
    return parse_double("[" + section + "] " + key, require(section, key));
}

long long Config::get_int(const std::string& section, const std::string& key,
                          long long fallback) const {
    const std::string* v = find(section, key);
    if (!v) return fallback;
    errno = 0;
    char* end = nullptr;
    const long long n = std::strtoll(v->c_str(), &end, 10);
    if (end == v->c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("[" + section + "] " + key + ": not an integer: '" + *v + "'");
    return n;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
    const std::string* v = find(section, key);
    if (!v) return fallback;
    errno = 0;
    char* end = nullptr;
    const unsigned long long n = std::strtoull(v->c_str(), &end, 10);
    if (end == v->c_str() || *end != '\0' || errno == ERANGE || v->front() == '-')
        throw ConfigError("[" + section + "] " + key + ": not a u64: '" + *v + "'");
    return n;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
    const std::string* v = find(section, key);
    if (!v) return fallback;
    std::vector<double> out;
    std::string item;
    std::istringstream ss(*v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("[" + section + "] " + key + ": empty list entry");
        out.push_back(parse_double("[" + section + "] " + key, item));
    }
    if (out.empty()) throw ConfigError("[" + section + "] " + key + ": empty list");
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    for (auto& s : sections_)
        if (s.first == section) {
            for (auto& [k, v] : s.second)
                if (k == key) {
                    v = value;
                    return;
                }
            s.second.push_back({key, value});
            return;
        }
    sections_.push_back({section, {{key, value}}});
}

namespace {

JumpLaw jumps_from_config(const Config& c) {
    const std::string kind = c.require("process", "jumps");
    if (kind == "exp") return exp_jump(c.require_double("process", "jump_mu"));
    if (kind == "lomax")
        return lomax_jump(c.require_double("process", "jump_a"),
                          c.require_double("process", "jump_scale"));
    if (kind == "pareto-sym")
        return pareto_sym_jump(c.require_double("process", "jump_a"),
                               c.require_double("process", "jump_xmin"));
    if (kind == "unit") return unit_jump();
    throw ConfigError("[process] jumps: unknown kind '" + kind + "'");
}

}  // namespace

ProcessFamily process_from_config(const Config& c) {
    const std::string family = c.require("process", "family");
    if (family == "stable") {
        Stable s;
        s.alpha = c.require_double("process", "alpha");
        s.c = c.get_double("process", "c", 1.0);
        s.delta = c.get_double("process", "delta", 0.0);
        if (!(s.alpha > 0.0) || s.alpha > 2.0 || std::abs(s.delta) > 1.0)
            throw ConfigError("[process] stable: need alpha in (0,2], |delta| <= 1");
        return s;
    }
    if (family == "brownian") {
        BrownianDrift b;
        b.mu = c.get_double("process", "mu", 0.0);
        b.sigma = c.get_double("process", "sigma", 1.0);
        if (!(b.sigma > 0.0)) throw ConfigError("[process] brownian: need sigma > 0");
        return b;
    }
    if (family == "cp") {
        CompoundPoissonDrift f;
        f.rate = c.require_double("process", "rate");
        f.drift = c.get_double("process", "drift", 0.0);
        if (!(f.rate > 0.0)) throw ConfigError("[process] cp: need rate > 0");
        f.jumps = jumps_from_config(c);
        return f;
    }
    throw ConfigError("[process] family: unknown '" + family + "'");
}

std::string process_label(const Config& c) {
    const std::string family = c.require("process", "family");
    std::string label = family;
    auto add = [&](const std::string& key) {
        if (c.has("process", key)) label += " " + key + "=" + c.require("process", key);
    };
    for (const char* key : {"alpha", "c", "delta", "mu", "sigma", "rate", "drift", "jumps",
                            "jump_mu", "jump_a", "jump_scale", "jump_xmin"})
        add(key);
    return label;
}

LevyMeasure measure_from_config(const Config& c, const std::string& section) {
    const std::string kind = c.require(section, "kind");
    if (kind == "exponential")
        return exponential_measure(c.require_double(section, "w_plus"),
                                   c.require_double(section, "mu_plus"),
                                   c.get_double(section, "w_minus", 0.0),
                                   c.get_double(section, "mu_minus", 1.0));
    if (kind == "lomax")
        return lomax_measure(c.require_double(section, "w"), c.require_double(section, "a"),
                             c.require_double(section, "scale"),
                             c.get_int(section, "symmetric", 0) != 0);
    if (kind == "pareto")
        return pareto_measure(c.require_double(section, "w"), c.require_double(section, "a"),
                              c.require_double(section, "xmin"),
                              c.get_int(section, "symmetric", 0) != 0);
    if (kind == "atom")
        return atom_measure(c.require_double(section, "mass"),
                            c.require_double(section, "position"));
    if (kind == "power-small") return power_small_measure(c.require_double(section, "a"));
    throw ConfigError("[" + section + "] kind: unknown '" + kind + "'");
}

}  // namespace fluctlab
