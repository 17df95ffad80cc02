#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "statage/fading.hpp"
#include "statage/tdma.hpp"

namespace statage::io {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Defaults { table2, none };

/// Parses a JSON file; malformed input raises ConfigError naming the file.
nlohmann::json read_json_file(const std::string& path);

/// Fading parameters from a JSON object. Omitted fields take the reference
/// values (Defaults::table2) or are reported missing (Defaults::none);
/// unknown keys and invalid values are reported field by field.
fading::FadingParams load_fading_params(const nlohmann::json& j, Defaults defaults = Defaults::table2);

/// TDMA configuration from a JSON object; k is inferred from rhos when absent.
tdma::TdmaConfig load_tdma_config(const nlohmann::json& j, Defaults defaults = Defaults::table2);

nlohmann::json to_json(const fading::FadingParams& p);
nlohmann::json to_json(const tdma::TdmaConfig& c);

/// Shortest round-trip decimal form (%.17g).
std::string format_double(double v);

/// CSV file with a fixed header; numeric cells use format_double.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::string> header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
    std::size_t columns_;
    std::FILE* file_;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& data);
std::string hex64(std::uint64_t v);
/// FNV-1a of a file's bytes, hex.
std::string file_hash(const std::string& path);

struct RunManifest {
    std::vector<std::string> command_line;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version = kToolVersion;
    std::vector<std::string> outputs;
    std::vector<std::string> output_hashes;  // FNV-1a of each output, hex
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace statage::io
