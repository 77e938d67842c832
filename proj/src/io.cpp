#include "dpinar/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dpinar {

std::string format_double(double v) {
    char buffer[64];
    auto result = std::to_chars(buffer, buffer + sizeof buffer, v);
    return std::string(buffer, result.ptr);
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void ingest_error(const std::string& path, int line, const std::string& message) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + message);
}

bool parse_int(const std::string& text, long& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    auto result = std::from_chars(t.data(), t.data() + t.size(), out);
    return result.ec == std::errc() && result.ptr == t.data() + t.size();
}

std::string serialize_config(const RunConfig& config) {
    std::ostringstream out;
    out << "priors.a_alpha = " << format_double(config.priors.a_alpha) << "\n";
    out << "priors.b_alpha = " << format_double(config.priors.b_alpha) << "\n";
    out << "priors.a_tau = " << format_double(config.priors.a_tau) << "\n";
    out << "priors.b_tau = " << format_double(config.priors.b_tau) << "\n";
    out << "priors.a_g0 = " << format_double(config.priors.a_g0) << "\n";
    out << "priors.b_g0 = " << format_double(config.priors.b_g0) << "\n";
    out << "sampler.n_iterations = " << config.n_iterations << "\n";
    out << "sampler.burn_in = " << config.burn_in << "\n";
    out << "sampler.thinning = " << config.thinning << "\n";
    out << "elicitation.k_min = " << config.k_min << "\n";
    out << "elicitation.k_max = " << config.k_max << "\n";
    out << "elicitation.lambda_max = " << format_double(config.lambda_max) << "\n";
    out << "eval.holdout = " << config.holdout << "\n";
    out << "eval.horizon = " << config.horizon << "\n";
    out << "seed = " << config.master_seed << "\n";
    return out.str();
}

}  // namespace

RunConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);

    RunConfig config;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) ingest_error(path, line_number, "expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        try {
            if (key == "priors.a_alpha") config.priors.a_alpha = std::stod(value);
            else if (key == "priors.b_alpha") config.priors.b_alpha = std::stod(value);
            else if (key == "priors.a_tau") config.priors.a_tau = std::stod(value);
            else if (key == "priors.b_tau") config.priors.b_tau = std::stod(value);
            else if (key == "priors.a_g0") config.priors.a_g0 = std::stod(value);
            else if (key == "priors.b_g0") config.priors.b_g0 = std::stod(value);
            else if (key == "sampler.n_iterations") config.n_iterations = std::stoi(value);
            else if (key == "sampler.burn_in") config.burn_in = std::stoi(value);
            else if (key == "sampler.thinning") config.thinning = std::stoi(value);
            else if (key == "elicitation.k_min") config.k_min = std::stoi(value);
            else if (key == "elicitation.k_max") config.k_max = std::stoi(value);
            else if (key == "elicitation.lambda_max") config.lambda_max = std::stod(value);
            else if (key == "eval.holdout") config.holdout = std::stoi(value);
            else if (key == "eval.horizon") config.horizon = std::stoi(value);
            else if (key == "seed") config.master_seed = std::stoull(value);
            else ingest_error(path, line_number, "unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            ingest_error(path, line_number, "bad value for " + key + ": " + value);
        } catch (const std::out_of_range&) {
            ingest_error(path, line_number, "value out of range for " + key + ": " + value);
        }
    }
    return config;
}

void write_config(const std::string& path, const RunConfig& config) {
    atomic_write(path, serialize_config(config));
}

std::uint64_t config_hash(const RunConfig& config) {
    const std::string text = serialize_config(config);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

CountSeries ingest_single(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file: " + path);

    std::vector<int> counts;
    std::string line;
    int line_number = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        long value;
        if (!parse_int(stripped, value)) {
            if (first_content_line) {  // optional header
                first_content_line = false;
                continue;
            }
            ingest_error(path, line_number, "not an integer count: '" + stripped + "'");
        }
        first_content_line = false;
        if (value < 0) ingest_error(path, line_number, "negative count not allowed");
        counts.push_back(static_cast<int>(value));
    }
    if (counts.size() < 2) throw std::runtime_error(path + ": series too short (need T >= 2)");
    return CountSeries(counts);
}

std::map<std::string, CountSeries> ingest_long(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file: " + path);

    std::map<std::string, std::vector<int>> grouped;
    std::string line;
    int line_number = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        const auto c1 = stripped.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : stripped.find(',', c1 + 1);
        if (c2 == std::string::npos)
            ingest_error(path, line_number, "expected series_id,epoch_index,count");
        const std::string id = trim(stripped.substr(0, c1));
        long epoch, count;
        if (!parse_int(stripped.substr(c1 + 1, c2 - c1 - 1), epoch)) {
            if (first_content_line) {  // optional header
                first_content_line = false;
                continue;
            }
            ingest_error(path, line_number, "epoch_index is not an integer");
        }
        first_content_line = false;
        if (!parse_int(stripped.substr(c2 + 1), count))
            ingest_error(path, line_number, "count is not an integer");
        if (count < 0) ingest_error(path, line_number, "negative count not allowed");

        auto& counts = grouped[id];
        if (epoch != static_cast<long>(counts.size()) + 1)
            ingest_error(path, line_number,
                         "epoch gap in series '" + id + "': expected " +
                             std::to_string(counts.size() + 1) + ", got " + std::to_string(epoch));
        counts.push_back(static_cast<int>(count));
    }
    if (grouped.empty()) throw std::runtime_error(path + ": no series found");

    std::map<std::string, CountSeries> result;
    for (auto& [id, counts] : grouped) {
        if (counts.size() < 2)
            throw std::runtime_error(path + ": series '" + id + "' too short (need T >= 2)");
        result.emplace(id, CountSeries(counts));
    }
    return result;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + temp);
        out << content;
    }
    if (std::rename(temp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + temp + " to " + path);
}

std::string artifact_header(std::uint64_t cfg_hash, std::uint64_t seed) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(cfg_hash));
    return std::string("# dpinar ") + tool_version + " config_hash=" + hex +
           " seed=" + std::to_string(seed) + "\n";
}

std::string render_series(const CountSeries& series, const std::string& header) {
    std::ostringstream out;
    out << header;
    for (int i = 0; i < series.length(); ++i) out << series.counts[i] << "\n";
    return out.str();
}

std::string render_draws(const PosteriorDraws& draws, const SamplerConfig& config,
                         const std::string& header) {
    std::ostringstream out;
    out << header;
    out << "iteration alpha tau k";
    const int n_rates = draws.size() > 0 ? static_cast<int>(draws.draws[0].lambdas.size()) : 0;
    for (int t = 2; t <= n_rates + 1; ++t) out << " lambda_" << t;
    out << "\n";
    for (int n = 0; n < draws.size(); ++n) {
        const auto& draw = draws.draws[n];
        const int iteration = config.burn_in + (n + 1) * config.thinning;
        out << iteration << " " << format_double(draw.alpha) << " " << format_double(draw.tau)
            << " " << draws.cluster_counts[n];
        for (int i = 0; i < n_rates; ++i) out << " " << format_double(draw.lambdas[i]);
        out << "\n";
    }
    return out.str();
}

std::string render_forecast(const ForecastDistribution& forecast, int n_draws,
                            const std::string& header) {
    std::ostringstream out;
    out << header;
    out << "# h " << forecast.horizon << "\n";
    out << "# n_draws " << n_draws << "\n";
    out << "# point_forecast " << forecast.point_forecast << "\n";
    out << "# tail_mass " << format_double(forecast.tail_mass) << "\n";
    out << "count probability\n";
    for (int y = 0; y < forecast.pmf.size(); ++y)
        out << y << " " << format_double(forecast.pmf[y]) << "\n";
    return out.str();
}

std::string render_eval_report(const EvalReport& report, const std::string& header) {
    std::ostringstream out;
    out << header;
    out << "# model " << report.model << "\n";
    out << "# horizon " << report.horizon << "\n";
    out << "target truth forecast deviation\n";
    for (const auto& record : report.records)
        out << record.target << " " << record.truth << " " << record.forecast << " "
            << record.deviation << "\n";
    out << "summary mad " << format_double(report.mad) << "\n";
    return out.str();
}

std::string render_comparison(const std::vector<ComparisonRecord>& records,
                              const std::string& header) {
    std::ostringstream out;
    out << header;
    out << "series dp_mad inar1_mad winner\n";
    for (const auto& record : records) {
        const char* winner =
            record.winner == 1 ? "dp" : (record.winner == -1 ? "inar1" : "tie");
        out << record.label << " " << format_double(record.dp_mad) << " "
            << format_double(record.baseline_mad) << " " << winner << "\n";
    }
    out << "summary dp_win_fraction " << format_double(dp_win_fraction(records)) << "\n";
    return out.str();
}

std::string render_fit_diagnostics(const PosteriorDraws& draws, const std::string& header) {
    double alpha_mean = 0.0, tau_mean = 0.0;
    std::map<int, int> k_histogram;
    for (int n = 0; n < draws.size(); ++n) {
        alpha_mean += draws.draws[n].alpha;
        tau_mean += draws.draws[n].tau;
        ++k_histogram[draws.cluster_counts[n]];
    }
    alpha_mean /= draws.size();
    tau_mean /= draws.size();

    std::ostringstream out;
    out << header;
    out << "n_draws " << draws.size() << "\n";
    out << "alpha_mean " << format_double(alpha_mean) << "\n";
    out << "tau_mean " << format_double(tau_mean) << "\n";
    out << "k_histogram\n";
    for (const auto& [k, count] : k_histogram) out << k << " " << count << "\n";
    return out.str();
}

}  // namespace dpinar
