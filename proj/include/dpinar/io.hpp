#pragma once

#include "dpinar/eval.hpp"
#include "dpinar/forecast.hpp"
#include "dpinar/gibbs.hpp"
#include "dpinar/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dpinar {

inline constexpr const char* tool_version = "0.1.0";

/// Shortest round-trip decimal representation.
std::string format_double(double v);

struct RunConfig {
    PriorConfig priors;
    int n_iterations = 12000;
    int burn_in = 2000;
    int thinning = 2;
    // Elicitation targets; zero means "derive from the series" (k_max = T-1,
    // lambda_max = max observed count).
    int k_min = 1;
    int k_max = 0;
    double lambda_max = 0.0;
    int holdout = 42;
    int horizon = 1;
    std::uint64_t master_seed = 0;

    SamplerConfig sampler_config(std::uint64_t seed) const {
        SamplerConfig config;
        config.n_iterations = n_iterations;
        config.burn_in = burn_in;
        config.thinning = thinning;
        config.seed = seed;
        return config;
    }
};

RunConfig read_config(const std::string& path);
void write_config(const std::string& path, const RunConfig& config);

/// FNV-1a over the canonical serialized form of the config.
std::uint64_t config_hash(const RunConfig& config);

/// Single-series format: one count per line, optional non-numeric header.
CountSeries ingest_single(const std::string& path);

/// Long format: `series_id,epoch_index,count` rows, epochs contiguous from 1.
std::map<std::string, CountSeries> ingest_long(const std::string& path);

/// Write `content` via a temp file + rename so readers never see a partial file.
void atomic_write(const std::string& path, const std::string& content);

std::string artifact_header(std::uint64_t cfg_hash, std::uint64_t seed);

std::string render_series(const CountSeries& series, const std::string& header);
std::string render_draws(const PosteriorDraws& draws, const SamplerConfig& config,
                         const std::string& header);
std::string render_forecast(const ForecastDistribution& forecast, int n_draws,
                            const std::string& header);
std::string render_eval_report(const EvalReport& report, const std::string& header);
std::string render_comparison(const std::vector<ComparisonRecord>& records,
                              const std::string& header);

/// Posterior summary: means of alpha/tau and the cluster-count histogram.
std::string render_fit_diagnostics(const PosteriorDraws& draws, const std::string& header);

}  // namespace dpinar
