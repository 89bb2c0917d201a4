#include "tsr/pipeline.hpp"

#include "tsr/csv.hpp"
#include "tsr/error.hpp"
#include "tsr/linearity.hpp"
#include "tsr/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tsr {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string date_at(std::span<const Date> dates, std::size_t i) {
    return i < dates.size() ? format_iso_date(dates[i]) : std::string{};
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    return out;
}

template <typename F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& e) {
        throw Error(e.kind(), "stage '" + name + "': " + e.message());
    } catch (const std::filesystem::filesystem_error& e) {
        throw Error(ErrorKind::IoError, "stage '" + name + "': " + e.what());
    }
}

ThresholdVariable threshold_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "time") return ThresholdVariable::time();
        throw Error(ErrorKind::InvalidArgument, "threshold variable must be 'time' or {\"lag\": d}");
    }
    return ThresholdVariable::lagged(j.at("lag").get<std::size_t>());
}

}  // namespace

void PipelineConfig::validate() const {
    if (volatility_window < 2) throw Error(ErrorKind::InvalidArgument, "volatility_window must be >= 2");
    if (!(significance > 0.0 && significance <= 0.5)) {
        throw Error(ErrorKind::InvalidArgument, "significance must lie in (0, 0.5]");
    }
    if (break_date.has_value() == break_index.has_value()) {
        throw Error(ErrorKind::InvalidArgument, "exactly one of break_date or break_index is required");
    }
    if (input_path.empty()) throw Error(ErrorKind::InvalidArgument, "input path is required");
    if (models.empty()) throw Error(ErrorKind::InvalidArgument, "at least one model is required");
    for (std::size_t i = 0; i < models.size(); ++i) {
        for (std::size_t j = i + 1; j < models.size(); ++j) {
            if (models[i].id == models[j].id) throw Error(ErrorKind::InvalidArgument, "duplicate model id " + models[i].id);
        }
    }
}

std::vector<ModelRequest> default_models() {
    std::vector<ModelRequest> models;
    ModelRequest ar;
    ar.id = "linear";
    ar.kind = "ar";
    models.push_back(ar);

    ModelRequest lstar2;
    lstar2.id = "lstar2";
    lstar2.kind = "lstar";
    lstar2.regimes = 2;
    models.push_back(lstar2);

    ModelRequest setar3;
    setar3.id = "setar3";
    setar3.kind = "setar";
    setar3.regimes = 3;
    models.push_back(setar3);

    ModelRequest lstar3 = lstar2;
    lstar3.id = "lstar3";
    lstar3.regimes = 3;
    models.push_back(lstar3);

    ModelRequest nnet;
    nnet.id = "nnet";
    nnet.kind = "nnet";
    nnet.order = 1;
    nnet.hidden = 2;
    // Plain gradient descent stalls on raw volatility-scale lags; centring and
    // scaling the inputs leaves the function class and weight count unchanged.
    nnet.nnet.standardize_inputs = true;
    models.push_back(nnet);
    return models;
}

ModelRequest model_request_from_json(const json& j) {
    ModelRequest r;
    r.kind = j.at("kind").get<std::string>();
    r.id = j.value("id", r.kind);
    r.order = j.value("order", r.order);
    r.regimes = j.value("regimes", r.regimes);
    if (j.contains("threshold")) r.threshold_variable = threshold_from_json(j["threshold"]);
    if (j.contains("min_fraction")) r.min_fraction = j["min_fraction"].get<double>();
    if (j.contains("gamma_grid")) {
        const auto& g = j["gamma_grid"];
        r.gamma_grid.lo = g.value("lo", r.gamma_grid.lo);
        r.gamma_grid.hi = g.value("hi", r.gamma_grid.hi);
        r.gamma_grid.step = g.value("step", r.gamma_grid.step);
        r.gamma_grid.exact = g.value("exact", r.gamma_grid.exact);
        r.gamma_grid.coarse_points = g.value("coarse_points", r.gamma_grid.coarse_points);
    }
    r.gamma_init = j.value("gamma_init", r.gamma_init);
    r.hidden = j.value("hidden", r.hidden);
    r.nnet.restarts = j.value("restarts", r.nnet.restarts);
    r.nnet.max_iters = j.value("max_iters", r.nnet.max_iters);
    r.nnet.init_scale = j.value("init_scale", r.nnet.init_scale);
    r.nnet.skip_connections = j.value("skip", r.nnet.skip_connections);
    r.nnet.standardize_inputs = j.value("standardize", r.nnet.standardize_inputs);
    return r;
}

PipelineConfig config_from_json(const json& j) {
    try {
        PipelineConfig c;
        if (j.contains("input")) c.input_path = j["input"].get<std::string>();
        if (j.contains("break_date")) c.break_date = j["break_date"].get<std::string>();
        if (j.contains("break_index")) c.break_index = j["break_index"].get<std::size_t>();
        c.volatility_window = j.value("volatility_window", c.volatility_window);
        if (j.value("volatility_estimator", std::string("stddev")) == "rms") {
            c.volatility_estimator = VolatilityEstimator::RootMeanSquare;
        }
        c.ar_max_order = j.value("ar_max_order", c.ar_max_order);
        c.significance = j.value("significance", c.significance);
        if (j.value("unitroot_specification", std::string("trend_break")) == "null_break") {
            c.unitroot_specification = BreakSpecification::NullBreak;
        }
        if (j.contains("linearity_order")) c.linearity_order = j["linearity_order"].get<std::size_t>();
        if (j.contains("models")) {
            for (const auto& m : j["models"]) c.models.push_back(model_request_from_json(m));
        } else {
            c.models = default_models();
        }
        c.seed = j.value("seed", c.seed);
        if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
    }
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
    }
    return config_from_json(j);
}

void apply_env_overrides(PipelineConfig& config) {
    if (const char* dir = std::getenv("TSREGIME_OUTPUT_DIR"); dir && *dir) config.output_dir = dir;
    if (const char* seed = std::getenv("TSREGIME_SEED"); seed && *seed) {
        char* end = nullptr;
        const auto v = std::strtoull(seed, &end, 10);
        if (end == seed || *end != '\0') throw Error(ErrorKind::InvalidArgument, "TSREGIME_SEED is not an integer");
        config.seed = v;
    }
}

FittedModel fit_model(const ModelRequest& r, std::span<const double> series, std::uint64_t seed) {
    if (r.kind == "ar") return fit_ar(series, r.order);
    if (r.kind == "setar") {
        SetarOptions o;
        o.order = r.order;
        o.n_regimes = r.regimes;
        o.threshold_variable = r.threshold_variable;
        o.min_fraction = r.min_fraction;
        return fit_setar(series, o);
    }
    if (r.kind == "lstar" || r.kind == "estar") {
        if (r.regimes < 2) throw Error(ErrorKind::InvalidArgument, "STAR models need at least 2 regimes");
        StarOptions o;
        o.order = r.order;
        o.n_transitions = r.regimes - 1;
        o.transition = r.kind == "lstar" ? TransitionKind::Logistic : TransitionKind::Exponential;
        o.threshold_variable = r.threshold_variable;
        o.gamma_grid = r.gamma_grid;
        o.gamma_init = r.gamma_init;
        o.min_fraction = r.min_fraction;
        return fit_star(series, o);
    }
    if (r.kind == "nnet") {
        NnetTrainConfig cfg = r.nnet;
        cfg.seed = seed;
        return train_nnet_ar(series, r.order, r.hidden, cfg).model;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown model kind '" + r.kind + "'");
}

std::size_t resolve_break_index(const PipelineConfig& config, const PriceSeries& prices) {
    if (config.break_index) return *config.break_index;
    const auto date = parse_iso_date(config.break_date.value_or(""));
    if (!date) throw Error(ErrorKind::InvalidArgument, "break date must be YYYY-MM-DD");
    const auto idx = prices.index_of(*date);
    if (!idx) throw Error(ErrorKind::BreakOutOfRange, "break date " + *config.break_date + " not in the price series");
    return *idx + 1;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void emit_plot_data(std::span<const double> values, std::span<const Date> dates, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "index,date,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << i << ',' << date_at(dates, i) << ',' << fmt(values[i]) << '\n';
    }
    write_text(path, out.str());
}

void emit_plot_data(const RegimeModel& model, std::span<const double> series, std::span<const Date> dates,
                    const std::filesystem::path& path) {
    const FittedValues fv = one_step_fitted(model, series, model.start);
    std::ostringstream out;
    out << "index,date,actual,fitted,residual,regime";
    for (std::size_t j = 0; j < fv.weights.size(); ++j) out << ",weight_" << j + 1;
    out << '\n';
    for (std::size_t i = 0; i < fv.fitted.size(); ++i) {
        const std::size_t t = fv.start + i;
        out << t << ',' << date_at(dates, t) << ',' << fmt(series[t]) << ',' << fmt(fv.fitted[i]) << ','
            << fmt(fv.residuals[i]) << ',' << fv.regime[i];
        for (const auto& w : fv.weights) out << ',' << fmt(w[i]);
        out << '\n';
    }
    write_text(path, out.str());
}

void emit_fitted_csv(const FittedModel& model, std::span<const double> series, std::span<const Date> dates,
                     const std::filesystem::path& path) {
    if (const auto* rm = std::get_if<RegimeModel>(&model)) {
        emit_plot_data(*rm, series, dates, path);
        return;
    }
    const std::size_t start = required_history(model);
    const std::vector<double> fitted = predict(model, series, start);
    std::ostringstream out;
    out << "index,date,actual,fitted,residual\n";
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        const std::size_t t = start + i;
        out << t << ',' << date_at(dates, t) << ',' << fmt(series[t]) << ',' << fmt(fitted[i]) << ','
            << fmt(series[t] - fitted[i]) << '\n';
    }
    write_text(path, out.str());
}

std::vector<double> read_value_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::EmptyFile, path.string() + " is empty");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            header.push_back(cell);
        }
    }
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "value") col = i;
    }
    if (col == header.size()) throw Error(ErrorKind::ParseError, "line 1: no 'value' column");
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        for (std::size_t i = 0; i <= col; ++i) {
            if (!std::getline(ss, cell, ',')) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": missing value");
        }
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || !std::isfinite(v)) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": unparsable value '" + cell + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) throw Error(ErrorKind::EmptyFile, path.string() + " has no data rows");
    return values;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    stage("config", [&] { config.validate(); });
    PipelineResult result;
    const auto& dir = config.output_dir;
    auto record = [&](const std::filesystem::path& p) { result.artifacts.push_back(p); };

    const PriceSeries prices = stage("ingest", [&] { return ingest(config.input_path); });
    const std::size_t break_index = stage("break", [&] { return resolve_break_index(config, prices); });

    const auto dates = prices.timestamps();
    const ReturnSeries returns = stage("transform", [&] { return log_returns(prices); });
    const VolatilitySeries vol = stage("transform", [&] {
        return realized_volatility(returns, config.volatility_window, config.volatility_estimator);
    });
    const auto return_dates = dates.empty() ? dates : dates.subspan(1);
    const auto vol_dates = dates.empty() ? dates : dates.subspan(config.volatility_window);
    stage("transform", [&] {
        emit_plot_data(returns.values, return_dates, dir / "returns.csv");
        emit_plot_data(vol.values, vol_dates, dir / "volatility.csv");
    });
    record(dir / "returns.csv");
    record(dir / "volatility.csv");

    stage("unitroot", [&] {
        const PerronDetrendResult detrend = perron_detrend(prices, break_index, config.unitroot_specification);
        const PhillipsPerronResult pp = phillips_perron(detrend.residuals);
        json j = to_json(detrend, pp, config.significance);
        if (!dates.empty()) j["break_date"] = format_iso_date(dates[break_index - 1]);
        write_json(dir / "unitroot.json", j);
    });
    record(dir / "unitroot.json");

    const std::span<const double> x = vol.values;
    const OrderSelection orders = stage("order_selection", [&] {
        const std::size_t max_order = std::min(config.ar_max_order, x.size() / 4);
        return select_ar_order(x, max_order);
    });
    stage("order_selection", [&] { write_json(dir / "order_selection.json", to_json(orders)); });
    record(dir / "order_selection.json");

    stage("linearity", [&] {
        LinearityOptions opts;
        opts.ar_order = config.linearity_order.value_or(std::max<std::size_t>(1, orders.best_aic));
        opts.significance = config.significance;
        const auto zero = terasvirta_zero_order(x, opts);
        const auto first = terasvirta_first_order(x, opts);
        json j;
        j["schema_version"] = kSchemaVersion;
        j["zero_order"] = to_json(zero);
        j["first_order"] = to_json(first);
        j["verdict"] = to_string(first.verdict);
        write_json(dir / "linearity.json", j);
    });
    record(dir / "linearity.json");

    std::vector<Candidate> candidates;
    for (const auto& req : config.models) {
        stage("fit " + req.id, [&] {
            FittedModel model = fit_model(req, x, config.seed);
            write_json(dir / ("model_" + req.id + ".json"), to_json(model));
            emit_fitted_csv(model, x, vol_dates, dir / ("fitted_" + req.id + ".csv"));
            candidates.push_back({req.id, std::move(model)});
        });
        record(dir / ("model_" + req.id + ".json"));
        record(dir / ("fitted_" + req.id + ".csv"));
    }

    stage("compare", [&] {
        if (candidates.size() == 1) {
            // A single model is still scored so the report always exists.
            const auto& c = candidates.front();
            const std::size_t start = required_history(c.model);
            const ModelScore s = score_candidate(c, x, start);
            result.comparison.scores = {s};
            result.comparison.best_by_aic = result.comparison.best_by_bic = result.comparison.best_by_mape = c.id;
            result.comparison.common_sample = s.n_obs;
            result.comparison.start = start;
        } else {
            result.comparison = compare(candidates, x);
        }
        write_json(dir / "comparison.json", to_json(result.comparison));
        write_text(dir / "comparison.txt", format_comparison_table(result.comparison));
    });
    record(dir / "comparison.json");
    record(dir / "comparison.txt");
    return result;
}

}  // namespace tsr
