#include "statage/io.hpp"

#include <fstream>
#include <iterator>
#include <set>

#include "statage/error.hpp"

namespace statage::io {

namespace {

using nlohmann::json;

// Field reader collecting diagnostics rather than stopping at the first problem.
class FieldReader {
public:
    FieldReader(const json& j, Defaults defaults, std::vector<std::string> known)
        : j_(j), defaults_(defaults), known_(known.begin(), known.end()) {
        if (!j_.is_object()) {
            issues_.push_back("config: expected a JSON object");
            return;
        }
        for (const auto& [key, value] : j_.items()) {
            if (!known_.count(key)) issues_.push_back(key + ": unknown key");
        }
    }

    bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return missing(key, fallback);
        const auto& v = j_.at(key);
        if (!v.is_number()) {
            issues_.push_back(key + ": expected a number");
            return fallback;
        }
        return v.get<double>();
    }

    int integer(const std::string& key, int fallback) {
        if (!has(key)) return static_cast<int>(missing(key, fallback));
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) {
            issues_.push_back(key + ": expected an integer");
            return fallback;
        }
        return v.get<int>();
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) {
            if (defaults_ == Defaults::none) issues_.push_back(key + ": missing required field");
            return fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_array()) {
            issues_.push_back(key + ": expected an array of numbers");
            return fallback;
        }
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) {
                issues_.push_back(key + ": expected an array of numbers");
                return fallback;
            }
            out.push_back(x.get<double>());
        }
        return out;
    }

    void add(std::string issue) { issues_.push_back(std::move(issue)); }
    std::vector<std::string>& issues() { return issues_; }

private:
    double missing(const std::string& key, double fallback) {
        if (defaults_ == Defaults::none) issues_.push_back(key + ": missing required field");
        return fallback;
    }

    const json& j_;
    Defaults defaults_;
    std::set<std::string> known_;
    std::vector<std::string> issues_;
};

}  // namespace

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path + ": cannot open file"});
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({path + ": malformed JSON (" + e.what() + ")"});
    }
}

fading::FadingParams load_fading_params(const nlohmann::json& j, Defaults defaults) {
    FieldReader r(j, defaults,
                  {"p_bar_w", "bandwidth_hz", "packet_bits", "tx_time_s", "coherence_time_s", "gamma_min", "gamma_max",
                   "grid_points"});
    const fading::FadingParams d;
    fading::FadingParams p;
    p.p_bar_w = r.number("p_bar_w", d.p_bar_w);
    p.bandwidth_hz = r.number("bandwidth_hz", d.bandwidth_hz);
    p.packet_bits = r.number("packet_bits", d.packet_bits);
    p.tx_time_s = r.number("tx_time_s", d.tx_time_s);
    p.coherence_time_s = r.number("coherence_time_s", d.coherence_time_s);
    p.gamma_min = r.number("gamma_min", d.gamma_min);
    p.gamma_max = r.number("gamma_max", d.gamma_max);
    p.grid_points = r.integer("grid_points", d.grid_points);
    if (r.issues().empty()) {
        try {
            fading::FadingConfig check(p);
            if (!(p.tx_time_s < p.coherence_time_s)) r.add("tx_time_s: must be below coherence_time_s (tau < T)");
        } catch (const ConfigError& e) {
            for (const auto& s : e.diagnostics()) r.add(s);
        }
    }
    if (!r.issues().empty()) throw ConfigError(std::move(r.issues()));
    return p;
}

tdma::TdmaConfig load_tdma_config(const nlohmann::json& j, Defaults defaults) {
    FieldReader r(j, defaults, {"k", "c_per_s", "frame_s", "rhos"});
    const tdma::TdmaConfig d;
    tdma::TdmaConfig c;
    c.c_per_s = r.number("c_per_s", d.c_per_s);
    c.frame_s = r.number("frame_s", d.frame_s);
    c.rhos = r.numbers("rhos", d.rhos);
    if (r.has("k")) {
        c.k = r.integer("k", d.k);
    } else {
        c.k = static_cast<int>(c.rhos.size());
    }
    if (r.issues().empty()) {
        try {
            c.validate();
        } catch (const ConfigError& e) {
            for (const auto& s : e.diagnostics()) r.add(s);
        }
    }
    if (!r.issues().empty()) throw ConfigError(std::move(r.issues()));
    return c;
}

nlohmann::json to_json(const fading::FadingParams& p) {
    return json{{"p_bar_w", p.p_bar_w},         {"bandwidth_hz", p.bandwidth_hz},
                {"packet_bits", p.packet_bits}, {"tx_time_s", p.tx_time_s},
                {"coherence_time_s", p.coherence_time_s}, {"gamma_min", p.gamma_min},
                {"gamma_max", p.gamma_max},     {"grid_points", p.grid_points}};
}

nlohmann::json to_json(const tdma::TdmaConfig& c) {
    return json{{"k", c.k}, {"c_per_s", c.c_per_s}, {"frame_s", c.frame_s}, {"rhos", c.rhos}};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header)
    : path_(path), columns_(header.size()), file_(std::fopen(path.c_str(), "w")) {
    if (!file_) throw Error(path + ": cannot open for writing");
    row(header);
}

CsvWriter::~CsvWriter() {
    if (file_) std::fclose(file_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error(path_ + ": row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) std::fputc(',', file_);
        std::fputs(cells[i].c_str(), file_);
    }
    std::fputc('\n', file_);
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(path + ": cannot open for hashing");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return hex64(fnv1a(bytes));
}

nlohmann::json to_json(const RunManifest& m) {
    return json{{"command_line", m.command_line}, {"config_hash", m.config_hash}, {"seed", m.seed},
                {"version", m.version},           {"outputs", m.outputs},         {"output_fnv1a", m.output_hashes}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
    RunManifest m;
    try {
        m.command_line = j.at("command_line").get<std::vector<std::string>>();
        m.config_hash = j.at("config_hash").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.version = j.at("version").get<std::string>();
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        if (j.contains("output_fnv1a")) m.output_hashes = j.at("output_fnv1a").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ConfigError({std::string("manifest: ") + e.what()});
    }
    return m;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw Error(path + ": cannot open for writing");
    out << j.dump(2) << '\n';
}

}  // namespace statage::io
