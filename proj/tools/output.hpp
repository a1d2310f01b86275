#pragma once

#include <chrono>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "raris/config.hpp"
#include "raris/diag.hpp"
#include "raris/estimate.hpp"
#include "raris/ktune.hpp"

namespace raris::tool {

using nlohmann::json;

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

json to_json(const ExperimentConfig& cfg);
json to_json(const EstimateSummary& s, const ExperimentConfig& cfg);
json to_json(const DiagReport& r);
json to_json(const KScan& scan);

std::string iso_timestamp(std::chrono::system_clock::time_point tp);
std::string sha256_file(const std::filesystem::path& p);

/// Writes `text` to `path`; "-" means stdout. Throws IoError.
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const json& j);

/// Collects output files and writes a manifest listing them with digests.
class Manifest {
public:
    Manifest(std::string command, json config, std::uint64_t seed);
    void add_output(const std::string& path);
    void write(const std::string& path) const;
    json to_json() const;

private:
    std::string command_;
    json config_;
    std::uint64_t seed_;
    std::chrono::system_clock::time_point started_;
    std::vector<std::string> outputs_;
};

std::string weights_csv(const EstimateSummary& s);

}  // namespace raris::tool
