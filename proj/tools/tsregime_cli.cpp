// tsregime: command-line front end for the regime-switching analysis library.

#include "tsr/csv.hpp"
#include "tsr/error.hpp"
#include "tsr/linearity.hpp"
#include "tsr/pipeline.hpp"
#include "tsr/serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using tsr::json;

struct SeriesInput {
    std::string prices;
    std::string series;
    std::size_t window = tsr::kDefaultVolatilityWindow;
    std::string estimator = "stddev";
};

void add_series_input(CLI::App* cmd, SeriesInput& in) {
    auto* p = cmd->add_option("--input", in.prices, "date,close price CSV (transformed to realized volatility)");
    auto* s = cmd->add_option("--series", in.series, "CSV with a 'value' column, used as is");
    p->excludes(s);
    cmd->add_option("--window", in.window, "volatility window")->check(CLI::PositiveNumber);
    cmd->add_option("--estimator", in.estimator, "volatility estimator")->check(CLI::IsMember({"stddev", "rms"}));
}

struct LoadedSeries {
    std::vector<double> values;
    std::vector<tsr::Date> dates;
};

LoadedSeries load_series(const SeriesInput& in) {
    LoadedSeries out;
    if (!in.series.empty()) {
        out.values = tsr::read_value_csv(in.series);
        return out;
    }
    if (in.prices.empty()) throw tsr::Error(tsr::ErrorKind::InvalidArgument, "one of --input or --series is required");
    const auto prices = tsr::ingest(in.prices);
    const auto est = in.estimator == "rms" ? tsr::VolatilityEstimator::RootMeanSquare
                                           : tsr::VolatilityEstimator::SampleStdDev;
    out.values = tsr::realized_volatility(tsr::log_returns(prices), in.window, est).values;
    const auto d = prices.timestamps();
    if (!d.empty()) out.dates.assign(d.begin() + static_cast<std::ptrdiff_t>(in.window), d.end());
    return out;
}

void emit(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        tsr::write_json(path, j);
    }
}

tsr::ThresholdVariable parse_threshold(const std::string& text) {
    if (text == "time") return tsr::ThresholdVariable::time();
    if (text.rfind("lag:", 0) == 0) {
        const auto d = std::stoul(text.substr(4));
        if (d == 0) throw tsr::Error(tsr::ErrorKind::InvalidArgument, "lag delay must be >= 1");
        return tsr::ThresholdVariable::lagged(d);
    }
    throw tsr::Error(tsr::ErrorKind::InvalidArgument, "threshold must be 'time' or 'lag:<d>'");
}

void print_error(std::string_view kind, std::string_view message) {
    json j{{"error", {{"kind", kind}, {"message", message}}}};
    std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structural-break tests and regime-switching autoregressions for financial time series"};
    app.require_subcommand(1);

    // ingest
    std::string ingest_path;
    auto* ingest = app.add_subcommand("ingest", "Validate a date,close CSV and summarise it");
    ingest->add_option("input", ingest_path, "price CSV")->required();

    // transform
    SeriesInput tr_in;
    std::string tr_out = ".";
    auto* transform = app.add_subcommand("transform", "Write log returns and realized volatility");
    transform->add_option("--input", tr_in.prices, "price CSV")->required();
    transform->add_option("--window", tr_in.window, "volatility window")->check(CLI::PositiveNumber);
    transform->add_option("--estimator", tr_in.estimator)->check(CLI::IsMember({"stddev", "rms"}));
    transform->add_option("--output-dir", tr_out);

    // test-unitroot
    std::string ur_input, ur_date, ur_spec = "trend_break", ur_out;
    std::size_t ur_index = 0;
    double ur_sig = 0.05;
    auto* unitroot = app.add_subcommand("test-unitroot", "Break-detrended Phillips-Perron test on prices");
    unitroot->add_option("--input", ur_input, "price CSV")->required();
    auto* ur_d = unitroot->add_option("--break-date", ur_date, "break date YYYY-MM-DD");
    auto* ur_i = unitroot->add_option("--break-index", ur_index, "break position T_B (1-based)");
    ur_d->excludes(ur_i);
    unitroot->add_option("--spec", ur_spec)->check(CLI::IsMember({"trend_break", "null_break"}));
    unitroot->add_option("--significance", ur_sig);
    unitroot->add_option("--output", ur_out, "JSON path (stdout if omitted)");

    // test-linearity
    SeriesInput lin_in;
    std::size_t lin_order = 1;
    double lin_sig = 0.05;
    std::string lin_out;
    auto* linearity = app.add_subcommand("test-linearity", "Taylor-expansion linearity tests against STAR");
    add_series_input(linearity, lin_in);
    linearity->add_option("--order", lin_order, "AR order");
    linearity->add_option("--significance", lin_sig);
    linearity->add_option("--output", lin_out, "JSON path (stdout if omitted)");

    // select-order
    SeriesInput so_in;
    std::size_t so_max = 20;
    std::string so_out;
    auto* select = app.add_subcommand("select-order", "AIC/BIC table for AR(0..max)");
    add_series_input(select, so_in);
    select->add_option("--max-order", so_max);
    select->add_option("--output", so_out);

    // fit
    SeriesInput fit_in;
    std::string fit_kind, fit_threshold = "time", fit_out = ".", fit_id;
    tsr::ModelRequest fit_req;
    std::optional<double> fit_min_fraction;
    std::uint64_t fit_seed = 1;
    auto* fit = app.add_subcommand("fit", "Fit one model and write its record and fitted values");
    fit->add_option("kind", fit_kind)->required()->check(CLI::IsMember({"ar", "setar", "lstar", "estar", "nnet"}));
    add_series_input(fit, fit_in);
    fit->add_option("--order", fit_req.order);
    fit->add_option("--regimes", fit_req.regimes);
    fit->add_option("--threshold", fit_threshold, "time or lag:<d>");
    fit->add_option("--min-fraction", fit_min_fraction);
    fit->add_option("--gamma-lo", fit_req.gamma_grid.lo);
    fit->add_option("--gamma-hi", fit_req.gamma_grid.hi);
    fit->add_option("--gamma-step", fit_req.gamma_grid.step);
    fit->add_option("--gamma-points", fit_req.gamma_grid.coarse_points);
    fit->add_flag("--exact-grid", fit_req.gamma_grid.exact, "evaluate every lo + i*step gamma");
    fit->add_option("--gamma-init", fit_req.gamma_init);
    fit->add_option("--hidden", fit_req.hidden);
    fit->add_option("--restarts", fit_req.nnet.restarts);
    fit->add_option("--max-iters", fit_req.nnet.max_iters);
    fit->add_flag("--skip", fit_req.nnet.skip_connections, "direct input-to-output weights");
    fit->add_flag("--standardize", fit_req.nnet.standardize_inputs);
    fit->add_option("--seed", fit_seed);
    fit->add_option("--id", fit_id, "model id used in file names");
    fit->add_option("--output-dir", fit_out);

    // compare
    SeriesInput cmp_in;
    std::vector<std::string> cmp_models;
    std::string cmp_out = ".";
    auto* cmp = app.add_subcommand("compare", "Score fitted model records on a common sample");
    add_series_input(cmp, cmp_in);
    cmp->add_option("--model", cmp_models, "model JSON (repeatable)")->required();
    cmp->add_option("--output-dir", cmp_out);

    // run
    std::string run_config;
    tsr::PipelineConfig run_cfg;
    std::string run_input, run_date, run_out;
    std::optional<std::size_t> run_index, run_window, run_max_order;
    std::optional<double> run_sig;
    std::optional<std::uint64_t> run_seed;
    auto* run = app.add_subcommand("run", "Full pipeline: transform, tests, fits, comparison");
    run->add_option("--config", run_config, "JSON config file");
    run->add_option("--input", run_input);
    run->add_option("--break-date", run_date);
    run->add_option("--break-index", run_index);
    run->add_option("--window", run_window);
    run->add_option("--ar-max-order", run_max_order);
    run->add_option("--significance", run_sig);
    run->add_option("--seed", run_seed);
    run->add_option("--output-dir", run_out);

    // simulate
    std::string sim_model, sim_out;
    std::size_t sim_length = 500;
    double sim_sd = 1.0;
    std::uint64_t sim_seed = 1;
    auto* sim = app.add_subcommand("simulate", "Simulate a path from a regime model record");
    sim->add_option("--model", sim_model)->required();
    sim->add_option("--length", sim_length);
    sim->add_option("--noise-sd", sim_sd);
    sim->add_option("--seed", sim_seed);
    sim->add_option("--output", sim_out, "CSV path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("UsageError", e.what());
        return 2;
    }

    try {
        if (*ingest) {
            const auto prices = tsr::ingest(ingest_path);
            json j{{"observations", prices.size()}, {"label", prices.label()}};
            if (prices.has_dates()) {
                j["first_date"] = tsr::format_iso_date(prices.timestamps().front());
                j["last_date"] = tsr::format_iso_date(prices.timestamps().back());
            }
            std::cout << j.dump(2) << '\n';
        } else if (*transform) {
            const auto prices = tsr::ingest(tr_in.prices);
            const auto returns = tsr::log_returns(prices);
            const auto est = tr_in.estimator == "rms" ? tsr::VolatilityEstimator::RootMeanSquare
                                                      : tsr::VolatilityEstimator::SampleStdDev;
            const auto vol = tsr::realized_volatility(returns, tr_in.window, est);
            const auto d = prices.timestamps();
            tsr::emit_plot_data(returns.values, d.empty() ? d : d.subspan(1),
                                std::filesystem::path(tr_out) / "returns.csv");
            tsr::emit_plot_data(vol.values, d.empty() ? d : d.subspan(tr_in.window),
                                std::filesystem::path(tr_out) / "volatility.csv");
        } else if (*unitroot) {
            const auto prices = tsr::ingest(ur_input);
            tsr::PipelineConfig cfg;
            if (!ur_date.empty()) cfg.break_date = ur_date;
            if (ur_i->count() > 0) cfg.break_index = ur_index;
            if (!cfg.break_date && !cfg.break_index) {
                throw tsr::Error(tsr::ErrorKind::InvalidArgument, "one of --break-date or --break-index is required");
            }
            const std::size_t tb = tsr::resolve_break_index(cfg, prices);
            const auto spec = ur_spec == "null_break" ? tsr::BreakSpecification::NullBreak
                                                      : tsr::BreakSpecification::TrendBreak;
            const auto detrend = tsr::perron_detrend(prices, tb, spec);
            const auto pp = tsr::phillips_perron(detrend.residuals);
            emit(tsr::to_json(detrend, pp, ur_sig), ur_out);
        } else if (*linearity) {
            const auto s = load_series(lin_in);
            tsr::LinearityOptions opts;
            opts.ar_order = lin_order;
            opts.significance = lin_sig;
            const auto zero = tsr::terasvirta_zero_order(s.values, opts);
            const auto first = tsr::terasvirta_first_order(s.values, opts);
            json j{{"schema_version", tsr::kSchemaVersion},
                   {"zero_order", tsr::to_json(zero)},
                   {"first_order", tsr::to_json(first)},
                   {"verdict", tsr::to_string(first.verdict)}};
            emit(j, lin_out);
        } else if (*select) {
            const auto s = load_series(so_in);
            emit(tsr::to_json(tsr::select_ar_order(s.values, so_max)), so_out);
        } else if (*fit) {
            const auto s = load_series(fit_in);
            fit_req.kind = fit_kind;
            fit_req.id = fit_id.empty() ? fit_kind : fit_id;
            fit_req.threshold_variable = parse_threshold(fit_threshold);
            fit_req.min_fraction = fit_min_fraction;
            const auto model = tsr::fit_model(fit_req, s.values, fit_seed);
            const std::filesystem::path dir(fit_out);
            tsr::write_json(dir / ("model_" + fit_req.id + ".json"), tsr::to_json(model));
            tsr::emit_fitted_csv(model, s.values, s.dates, dir / ("fitted_" + fit_req.id + ".csv"));
        } else if (*cmp) {
            const auto s = load_series(cmp_in);
            std::vector<tsr::Candidate> candidates;
            for (const auto& path : cmp_models) {
                std::ifstream in(path);
                if (!in) throw tsr::Error(tsr::ErrorKind::IoError, "cannot open " + path);
                json j;
                try {
                    in >> j;
                } catch (const json::exception& e) {
                    throw tsr::Error(tsr::ErrorKind::ParseError, path + ": " + e.what());
                }
                candidates.push_back({std::filesystem::path(path).stem().string(), tsr::model_from_json(j)});
            }
            const auto report = tsr::compare(candidates, s.values);
            const std::filesystem::path dir(cmp_out);
            tsr::write_json(dir / "comparison.json", tsr::to_json(report));
            tsr::write_text(dir / "comparison.txt", tsr::format_comparison_table(report));
            std::cout << tsr::format_comparison_table(report);
        } else if (*run) {
            tsr::PipelineConfig cfg = run_config.empty() ? tsr::config_from_json(json::object())
                                                         : tsr::load_config(run_config);
            if (!run_input.empty()) cfg.input_path = run_input;
            if (!run_date.empty()) {
                cfg.break_date = run_date;
                cfg.break_index.reset();
            }
            if (run_index) {
                cfg.break_index = *run_index;
                cfg.break_date.reset();
            }
            if (run_window) cfg.volatility_window = *run_window;
            if (run_max_order) cfg.ar_max_order = *run_max_order;
            if (run_sig) cfg.significance = *run_sig;
            if (run_seed) cfg.seed = *run_seed;
            if (!run_out.empty()) cfg.output_dir = run_out;
            tsr::apply_env_overrides(cfg);
            const auto result = tsr::run_pipeline(cfg);
            std::cout << tsr::format_comparison_table(result.comparison);
        } else if (*sim) {
            std::ifstream in(sim_model);
            if (!in) throw tsr::Error(tsr::ErrorKind::IoError, "cannot open " + sim_model);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw tsr::Error(tsr::ErrorKind::ParseError, sim_model + ": " + e.what());
            }
            const auto model = tsr::model_from_json(j);
            const auto* rm = std::get_if<tsr::RegimeModel>(&model);
            if (!rm) throw tsr::Error(tsr::ErrorKind::InvalidArgument, "simulate needs an ar/setar/lstar/estar model");
            const auto path = tsr::simulate(*rm, sim_length, sim_sd, sim_seed);
            if (sim_out.empty()) {
                std::cout << "index,date,value\n";
                for (std::size_t i = 0; i < path.size(); ++i) std::cout << i << ",," << path[i] << '\n';
            } else {
                tsr::emit_plot_data(path, {}, sim_out);
            }
        }
    } catch (const tsr::Error& e) {
        print_error(tsr::to_string(e.kind()), e.message());
        return 1;
    } catch (const std::exception& e) {
        print_error("InternalError", e.what());
        return 1;
    }
    return 0;
}
