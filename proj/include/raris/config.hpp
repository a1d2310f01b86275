#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace raris {

enum class Method { naive, cis, atis };
enum class TiltMode { exact, first_order };
enum class NormalizerMode { closed, mc, quadrature };
/// How an ATIS replicate picks its endpoint: one of the shared mixture
/// endpoints (draws come exactly from the mixture density) or a fresh draw
/// from the endpoint law.
enum class EndpointSampling { mixture, fresh };

std::string to_string(Method m);
std::string to_string(TiltMode m);
std::string to_string(NormalizerMode m);
std::string to_string(EndpointSampling m);
Method parse_method(const std::string& s);
TiltMode parse_tilt_mode(const std::string& s);
NormalizerMode parse_normalizer_mode(const std::string& s);
EndpointSampling parse_endpoint_sampling(const std::string& s);

/// Fully resolved parameters of one estimation run.
struct ExperimentConfig {
    std::string dist = "normal";
    int n = 100;
    double a_n = 0.0;
    int k = 1;
    int M = 30;
    std::int64_t L = 1000;
    int n_c = 1000;
    std::uint64_t seed = 1;
    TiltMode tilt_mode = TiltMode::exact;
    NormalizerMode ci_mode = NormalizerMode::closed;
    Method method = Method::atis;
    EndpointSampling endpoint_sampling = EndpointSampling::mixture;
    int workers = 1;
};

/// Checks every bound; throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

/// Default worker count: $RARIS_WORKERS when set and positive, else 1.
int default_workers();

/// Resolves an ExperimentConfig from command-line style arguments (without the
/// program / subcommand name). `--config FILE` reads flat `key = value` lines
/// whose keys are the long flag names; flags given on the command line win.
/// Required: --a. Throws ConfigError on unknown flags, bound violations and
/// missing fields.
ExperimentConfig parse_config(const std::vector<std::string>& args);

}  // namespace raris
