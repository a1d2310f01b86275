#include "output.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

namespace raris::tool {

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const ExperimentConfig& cfg) {
    return json{{"dist", cfg.dist},
                {"n", cfg.n},
                {"a_n", cfg.a_n},
                {"k", cfg.k},
                {"M", cfg.M},
                {"L", cfg.L},
                {"nc", cfg.n_c},
                {"seed", cfg.seed},
                {"tilt_mode", to_string(cfg.tilt_mode)},
                {"ci_mode", to_string(cfg.ci_mode)},
                {"method", to_string(cfg.method)},
                {"endpoint_sampling", to_string(cfg.endpoint_sampling)},
                {"workers", cfg.workers}};
}

json to_json(const EstimateSummary& s, const ExperimentConfig& cfg) {
    return json{{"method", to_string(s.method)},
                {"dist", cfg.dist},
                {"n", cfg.n},
                {"a_n", cfg.a_n},
                {"k", cfg.k},
                {"M", cfg.M},
                {"L", s.L},
                {"seed", cfg.seed},
                {"p_hat", s.p_hat},
                {"var_hat", s.var_hat},
                {"re_hat", num(s.re_hat)},
                {"hit_rate", s.hit_rate},
                {"clamp_count", s.clamp_count},
                {"fallback_count", s.fallback_count},
                {"wall_seconds", s.wall_seconds}};
}

json to_json(const DiagReport& r) {
    return json{{"name", r.name},
                {"statistic", num(r.statistic)},
                {"threshold", r.threshold},
                {"pass", r.pass},
                {"samples_used", r.samples_used},
                {"notes", r.notes}};
}

json to_json(const KScan& scan) {
    return json{{"j_values", scan.j_values},
                {"stats", scan.stats},
                {"selected_k", scan.selected_k},
                {"threshold", num(scan.threshold)},
                {"no_departure", scan.no_departure},
                {"first_departure", scan.first_departure < 0 ? json(nullptr) : json(scan.first_departure)},
                {"clamp_count", scan.clamp_count}};
}

std::string iso_timestamp(std::chrono::system_clock::time_point tp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string sha256_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

Manifest::Manifest(std::string command, json config, std::uint64_t seed)
    : command_(std::move(command)), config_(std::move(config)), seed_(seed),
      started_(std::chrono::system_clock::now()) {}

void Manifest::add_output(const std::string& path) {
    if (path != "-") outputs_.push_back(path);
}

json Manifest::to_json() const {
    json outs = json::array();
    for (const auto& p : outputs_) outs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    return json{{"tool_version", RARIS_VERSION},
                {"command", command_},
                {"full_config", config_},
                {"master_seed", seed_},
                {"started_at", iso_timestamp(started_)},
                {"finished_at", iso_timestamp(std::chrono::system_clock::now())},
                {"outputs", outs}};
}

void Manifest::write(const std::string& path) const { write_json(path, to_json()); }

std::string weights_csv(const EstimateSummary& s) {
    std::ostringstream os;
    os << "replicate_index,log_weight,hit,endpoint\n" << std::setprecision(17);
    for (const auto& r : s.records) {
        os << r.index << ',' << r.log_weight << ',' << (r.hit ? 1 : 0) << ',';
        if (std::isnan(r.endpoint)) {
            os << "";
        } else {
            os << r.endpoint;
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace raris::tool
