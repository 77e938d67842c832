#include "dpinar/core.hpp"
#include "dpinar/elicitation.hpp"
#include "dpinar/eval.hpp"
#include "dpinar/forecast.hpp"
#include "dpinar/gibbs.hpp"
#include "dpinar/io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

using namespace dpinar;

struct CommonArgs {
    std::string input;
    std::string config_path;
    std::string out;
    std::string format = "single";
    std::string series_id;
    std::optional<std::uint64_t> seed;
    std::optional<int> iterations, burn_in, thin, horizon, holdout;
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig config;
    if (!args.config_path.empty()) config = read_config(args.config_path);
    if (args.seed) config.master_seed = *args.seed;
    if (args.iterations) config.n_iterations = *args.iterations;
    if (args.burn_in) config.burn_in = *args.burn_in;
    if (args.thin) config.thinning = *args.thin;
    if (args.horizon) config.horizon = *args.horizon;
    if (args.holdout) config.holdout = *args.holdout;
    config.priors.validate();
    return config;
}

std::map<std::string, CountSeries> load_series(const CommonArgs& args) {
    if (args.format == "long") {
        auto collection = ingest_long(args.input);
        if (!args.series_id.empty()) {
            auto it = collection.find(args.series_id);
            if (it == collection.end())
                throw std::runtime_error("series '" + args.series_id + "' not found in " + args.input);
            return {{it->first, it->second}};
        }
        return collection;
    }
    return {{"series", ingest_single(args.input)}};
}

CountSeries load_one_series(const CommonArgs& args) {
    auto collection = load_series(args);
    if (collection.size() != 1)
        throw std::runtime_error("multiple series in input; pick one with --series");
    return collection.begin()->second;
}

ElicitationTargets targets_for(const RunConfig& config, const CountSeries& series) {
    ElicitationTargets targets;
    targets.series_length = series.length();
    targets.k_min = config.k_min;
    targets.k_max = config.k_max > 0 ? config.k_max : series.length() - 1;
    targets.lambda_max = config.lambda_max > 0.0 ? config.lambda_max
                                                 : static_cast<double>(series.max_count());
    targets.validate();
    return targets;
}

int run_elicit(const CommonArgs& args) {
    RunConfig config = load_config(args);
    const CountSeries series = load_one_series(args);
    const ElicitationTargets targets = targets_for(config, series);

    const auto [a_tau, b_tau] = elicit_tau_prior(targets);
    const auto [a_g0, b_g0] = elicit_base_measure(targets);
    config.priors.a_tau = a_tau;
    config.priors.b_tau = b_tau;
    config.priors.a_g0 = a_g0;
    config.priors.b_g0 = b_g0;
    config.k_max = targets.k_max;
    config.lambda_max = targets.lambda_max;

    std::cout << "a_tau " << format_double(a_tau) << "\n"
              << "b_tau " << format_double(b_tau) << "\n"
              << "a_g0 " << format_double(a_g0) << "\n"
              << "b_g0 " << format_double(b_g0) << "\n";

    const std::string out =
        !args.out.empty() ? args.out
                          : (!args.config_path.empty() ? args.config_path : "dpinar.conf");
    write_config(out, config);
    return 0;
}

int run_fit(const CommonArgs& args, const std::string& model) {
    const RunConfig config = load_config(args);
    const CountSeries series = load_one_series(args);
    const SamplerConfig sampler = config.sampler_config(config.master_seed);

    const PosteriorDraws draws = model == "inar1"
                                     ? fit_baseline_inar1(series, config.priors, sampler)
                                     : run_sampler(series, config.priors, sampler);

    const std::string header = artifact_header(config_hash(config), config.master_seed);
    const std::string out = !args.out.empty() ? args.out : "draws.txt";
    atomic_write(out, render_draws(draws, sampler, header));
    atomic_write(out + ".diagnostics", render_fit_diagnostics(draws, header));
    std::cout << "wrote " << out << " (" << draws.size() << " draws)\n";
    return 0;
}

int run_forecast(const CommonArgs& args, const std::string& model) {
    const RunConfig config = load_config(args);
    const CountSeries series = load_one_series(args);
    const SamplerConfig sampler = config.sampler_config(config.master_seed);

    ForecastDistribution forecast;
    PosteriorDraws draws;
    if (model == "inar1") {
        draws = fit_baseline_inar1(series, config.priors, sampler);
        forecast = predictive_pmf_homogeneous(draws, series, config.horizon);
    } else {
        draws = run_sampler(series, config.priors, sampler);
        Rng rng(derive_seed(config.master_seed, 0xf0f0u, 0u));
        forecast = predictive_pmf(draws, series, config.horizon, config.priors, rng);
    }

    const std::string header = artifact_header(config_hash(config), config.master_seed);
    const std::string out = !args.out.empty() ? args.out : "forecast.txt";
    atomic_write(out, render_forecast(forecast, draws.size(), header));
    std::cout << "wrote " << out << " (point forecast " << forecast.point_forecast << ")\n";
    return 0;
}

int run_evaluate(const CommonArgs& args, const std::string& model) {
    const RunConfig config = load_config(args);
    const auto collection = load_series(args);
    const SamplerConfig sampler = config.sampler_config(config.master_seed);
    const std::string header = artifact_header(config_hash(config), config.master_seed);
    const std::string out = !args.out.empty() ? args.out : "eval.txt";

    if (model == "both") {
        std::vector<ComparisonRecord> records;
        for (const auto& [id, series] : collection) {
            const EvalPlan plan = make_plan(series.length(), config.holdout, config.horizon);
            const EvalReport dp = evaluate(series, plan, ModelKind::dp, config.priors, sampler);
            const EvalReport base =
                evaluate(series, plan, ModelKind::baseline, config.priors, sampler);
            records.push_back(compare(dp, base, id));
            if (collection.size() == 1) {
                atomic_write(out + ".dp", render_eval_report(dp, header));
                atomic_write(out + ".inar1", render_eval_report(base, header));
            }
        }
        atomic_write(out, render_comparison(records, header));
        std::cout << "wrote " << out << "\n";
        return 0;
    }

    const CountSeries series = collection.size() == 1
                                   ? collection.begin()->second
                                   : throw std::runtime_error("pick one series with --series");
    const EvalPlan plan = make_plan(series.length(), config.holdout, config.horizon);
    const ModelKind kind = model == "inar1" ? ModelKind::baseline : ModelKind::dp;
    const EvalReport report = evaluate(series, plan, kind, config.priors, sampler);
    atomic_write(out, render_eval_report(report, header));
    std::cout << "wrote " << out << " (MAD " << format_double(report.mad) << ")\n";
    return 0;
}

int run_simulate(const CommonArgs& args, int length, double alpha, double rate,
                 std::optional<int> y1) {
    const RunConfig config = load_config(args);
    const std::uint64_t seed = args.seed ? *args.seed : config.master_seed;
    const VectorXd rates = VectorXd::Constant(length - 1, rate);
    const CountSeries series = simulate(length, alpha, rates, seed, y1);

    const std::string header = artifact_header(config_hash(config), seed);
    const std::string out = !args.out.empty() ? args.out : "simulated.txt";
    atomic_write(out, render_series(series, header));
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DP-INAR(1) semiparametric count time series modeling"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string model = "dp";
    int sim_length = 100;
    double sim_alpha = 0.3, sim_rate = 5.0;
    std::optional<int> sim_y1;

    const auto add_common = [&](CLI::App* cmd, bool needs_input) {
        auto* input = cmd->add_option("--input", args.input, "input series file");
        if (needs_input) input->required();
        cmd->add_option("--config", args.config_path, "config file");
        cmd->add_option("--out", args.out, "output file");
        cmd->add_option("--seed", args.seed, "master seed override");
        cmd->add_option("--format", args.format, "input format: single | long")
            ->check(CLI::IsMember({"single", "long"}));
        cmd->add_option("--series", args.series_id, "series id (long format)");
        cmd->add_option("--iterations", args.iterations, "Gibbs iterations");
        cmd->add_option("--burn-in", args.burn_in, "burn-in iterations");
        cmd->add_option("--thin", args.thin, "thinning interval");
        cmd->add_option("--horizon", args.horizon, "forecast horizon h");
        cmd->add_option("--holdout", args.holdout, "holdout length");
    };

    auto* elicit = app.add_subcommand("elicit", "elicit prior hyperparameters");
    add_common(elicit, true);

    auto* fit = app.add_subcommand("fit", "run the Gibbs sampler");
    add_common(fit, true);
    fit->add_option("--model", model, "dp | inar1")->check(CLI::IsMember({"dp", "inar1"}));

    auto* forecast = app.add_subcommand("forecast", "h-step predictive distribution");
    add_common(forecast, true);
    forecast->add_option("--model", model, "dp | inar1")->check(CLI::IsMember({"dp", "inar1"}));

    auto* evaluate = app.add_subcommand("evaluate", "rolling-origin evaluation");
    add_common(evaluate, true);
    evaluate->add_option("--model", model, "dp | inar1 | both")
        ->check(CLI::IsMember({"dp", "inar1", "both"}));

    auto* simulate = app.add_subcommand("simulate", "generate a synthetic series");
    add_common(simulate, false);
    simulate->add_option("--length", sim_length, "series length T");
    simulate->add_option("--alpha", sim_alpha, "thinning probability");
    simulate->add_option("--rate", sim_rate, "constant innovation rate");
    simulate->add_option("--y1", sim_y1, "fixed first count (default: Poisson draw)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (elicit->parsed()) return run_elicit(args);
        if (fit->parsed()) return run_fit(args, model);
        if (forecast->parsed()) return run_forecast(args, model);
        if (evaluate->parsed()) return run_evaluate(args, model == "dp" && !evaluate->count("--model")
                                                              ? std::string("both")
                                                              : model);
        if (simulate->parsed()) return run_simulate(args, sim_length, sim_alpha, sim_rate, sim_y1);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
