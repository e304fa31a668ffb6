#pragma once
// Flat key/value config documents with [section] headers, plus the process
// and measure schemas every experiment shares. Sections and keys keep file
// order so a config can be embedded in a report exactly as resolved.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fluctlab/models.hpp"

namespace fluctlab {

// any malformed document or missing required key; the driver maps it to
// exit code 1
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class Config {
  public:
    using Section = std::pair<std::string, std::vector<std::pair<std::string, std::string>>>;

    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string require(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    double require_double(const std::string& section, const std::string& key) const;
    long long get_int(const std::string& section, const std::string& key,
                      long long fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    // comma-separated doubles
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

    // creates the section or replaces the key in place; used for the CLI
    // overrides, which therefore show up in the embedded config
    void set(const std::string& section, const std::string& key, const std::string& value);

    const std::vector<Section>& sections() const { return sections_; }

  private:
    const std::string* find(const std::string& section, const std::string& key) const;
    std::vector<Section> sections_;
};

// [process] schema:
//   family = stable      alpha, c, delta
//   family = brownian    mu, sigma
//   family = cp          rate, drift, jumps = exp | lomax | pareto-sym | unit
//                        with jump_mu | jump_a, jump_scale | jump_a, jump_xmin
ProcessFamily process_from_config(const Config& c);
std::string process_label(const Config& c);

// standalone measure schema (kind = exponential | lomax | pareto | atom |
// power-small plus the family parameters), for measure-level experiments
LevyMeasure measure_from_config(const Config& c, const std::string& section);

}  // namespace fluctlab
