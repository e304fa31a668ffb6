#include "fluctlab/report.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace fluctlab {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void Csv::add_row(std::initializer_list<double> row) { rows.emplace_back(row); }

std::string Csv::serialize() const {
    std::string out;
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

namespace {

// SHA-1, straight from the spec; enough for content addressing
struct Sha1 {
    std::array<std::uint32_t, 5> h{0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                                   0xC3D2E1F0u};
    std::array<std::uint8_t, 64> block{};
    std::uint64_t total = 0;
    size_t fill = 0;

    static std::uint32_t rol(std::uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }

    void compress() {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(block[4 * i]) << 24) | (std::uint32_t(block[4 * i + 1]) << 16) |
                   (std::uint32_t(block[4 * i + 2]) << 8) | std::uint32_t(block[4 * i + 3]);
        for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t t = rol(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rol(b, 30);
            b = a;
            a = t;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    void update(const void* data, size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        total += n;
        while (n > 0) {
            const size_t take = std::min(n, block.size() - fill);
            std::memcpy(block.data() + fill, p, take);
            fill += take;
            p += take;
            n -= take;
            if (fill == block.size()) {
                compress();
                fill = 0;
            }
        }
    }

    std::string hex() {
        const std::uint64_t bits = total * 8;
        const std::uint8_t one = 0x80;
        update(&one, 1);
        const std::uint8_t zero = 0;
        while (fill != 56) update(&zero, 1);
        for (int i = 7; i >= 0; --i) {
            const std::uint8_t b = static_cast<std::uint8_t>(bits >> (8 * i));
            update(&b, 1);
        }
        std::string out;
        for (std::uint32_t word : h) {
            char buf[9];
            std::snprintf(buf, sizeof buf, "%08x", word);
            out += buf;
        }
        return out;
    }
};

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace

std::string git_blob_sha1(const std::string& content) {
    Sha1 s;
    const std::string header = "blob " + std::to_string(content.size());
    s.update(header.data(), header.size() + 1);  // include the NUL
    s.update(content.data(), content.size());
    return s.hex();
}

Json config_json(const Config& c) {
    Json out = Json::object();
    for (const auto& [name, entries] : c.sections()) {
        Json sec = Json::object();
        for (const auto& [k, v] : entries) sec[k] = v;
        out[name] = sec;
    }
    return out;
}

WrittenReport write_report(const std::string& out_dir, const std::string& prefix,
                           const std::string& experiment, const Config& resolved,
                           const Json& results, bool pass,
                           const std::vector<std::pair<std::string, Csv>>& tables,
                           const std::vector<std::string>& checks) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    WrittenReport wr;

    Json j;
    j["schema"] = 1;
    j["experiment"] = experiment;
    j["config"] = config_json(resolved);
    j["results"] = results;
    j["checks"] = checks;
    j["pass"] = pass;
    Json tbl = Json::object();
    for (const auto& [name, csv] : tables) {
        const std::string fname = prefix + "-" + name + ".csv";
        tbl[name] = fname;
        const fs::path p = fs::path(out_dir) / fname;
        write_text(p, csv.serialize());
        wr.csv_paths.push_back(p.string());
    }
    j["tables"] = tbl;

    wr.hash = git_blob_sha1(j.dump(2) + "\n");
    j["content_hash"] = wr.hash;
    const fs::path jp = fs::path(out_dir) / (prefix + "-report.json");
    write_text(jp, j.dump(2) + "\n");
    wr.json_path = jp.string();
    return wr;
}

}  // namespace fluctlab
