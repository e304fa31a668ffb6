#pragma once
// Experiment reports: a versioned JSON document (schema 1) with the resolved
// config embedded and a git-style content hash, plus fixed-schema CSV
// tables. Output is byte-stable: no timestamps, fixed float formatting, and
// the same bytes for the same config and seed regardless of worker count.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fluctlab/config.hpp"

namespace fluctlab {

using Json = nlohmann::ordered_json;

// %.12g with canonical nan/inf spellings; the CSV float format
std::string format_double(double v);

struct Csv {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::initializer_list<double> row);
    std::string serialize() const;
};

// SHA-1 of the git blob encoding "blob <len>\0<content>"
std::string git_blob_sha1(const std::string& content);

// resolved config as an object of sections in file order, values verbatim
Json config_json(const Config& c);

struct WrittenReport {
    std::string json_path;
    std::string hash;
    std::vector<std::string> csv_paths;
};

// writes <prefix>-report.json plus <prefix>-<table>.csv per table into
// out_dir (created if missing); the content hash covers the document without
// its "content_hash" field and is then embedded
WrittenReport write_report(const std::string& out_dir, const std::string& prefix,
                           const std::string& experiment, const Config& resolved,
                           const Json& results, bool pass,
                           const std::vector<std::pair<std::string, Csv>>& tables,
                           const std::vector<std::string>& checks);

}  // namespace fluctlab
