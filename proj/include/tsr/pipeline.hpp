#pragma once

#include "tsr/model_selection.hpp"
#include "tsr/neural_ar.hpp"
#include "tsr/regime_models.hpp"
#include "tsr/series.hpp"
#include "tsr/stationarity.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsr {

/// One model to fit in the pipeline. `kind` is ar, setar, lstar, estar or nnet.
struct ModelRequest {
    std::string id;
    std::string kind = "ar";
    std::size_t order = 1;
    std::size_t regimes = 2;  ///< SETAR regimes, or STAR transitions + 1
    ThresholdVariable threshold_variable = ThresholdVariable::time();
    std::optional<double> min_fraction;
    GammaGrid gamma_grid{};
    double gamma_init = 3.0;
    std::size_t hidden = 2;
    NnetTrainConfig nnet{};
};

struct PipelineConfig {
    std::filesystem::path input_path;
    std::optional<std::string> break_date;
    std::optional<std::size_t> break_index;
    std::size_t volatility_window = kDefaultVolatilityWindow;
    VolatilityEstimator volatility_estimator = VolatilityEstimator::SampleStdDev;
    std::size_t ar_max_order = 20;
    double significance = 0.05;
    BreakSpecification unitroot_specification = BreakSpecification::TrendBreak;
    /// AR order for the linearity tests; defaults to max(1, AIC choice).
    std::optional<std::size_t> linearity_order;
    std::vector<ModelRequest> models;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";

    /// Throws InvalidArgument on any violated constraint.
    void validate() const;
};

/// Linear AR(1), 2-regime LSTAR, 3-regime SETAR on time, 3-regime LSTAR and a
/// 1-2-1 network.
std::vector<ModelRequest> default_models();

/// Reads a JSON config; missing keys keep their defaults.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);
/// Applies TSREGIME_OUTPUT_DIR and TSREGIME_SEED when set.
void apply_env_overrides(PipelineConfig& config);

ModelRequest model_request_from_json(const nlohmann::json& j);

/// Fits one requested model on `series`.
FittedModel fit_model(const ModelRequest& request, std::span<const double> series, std::uint64_t seed);

/// Resolves the configured break to T_B on the 1-based time axis (the break
/// date's own position), validating it against the series.
std::size_t resolve_break_index(const PipelineConfig& config, const PriceSeries& prices);

struct PipelineResult {
    std::vector<std::filesystem::path> artifacts;
    ComparisonReport comparison;
};

/// Ingest, transform, unit-root and linearity tests, model fits and the
/// comparison report, all written under config.output_dir. Errors are
/// rethrown with the failing stage named.
PipelineResult run_pipeline(const PipelineConfig& config);

/// `index,date,value` CSV; dates column left empty when `dates` is empty.
void emit_plot_data(std::span<const double> values, std::span<const Date> dates,
                    const std::filesystem::path& path);

/// `index,date,actual,fitted,residual,regime[,weight_1..]` CSV for a regime
/// model's in-sample fit.
void emit_plot_data(const RegimeModel& model, std::span<const double> series, std::span<const Date> dates,
                    const std::filesystem::path& path);

/// `index,date,actual,fitted,residual` for any fitted model from `start`.
void emit_fitted_csv(const FittedModel& model, std::span<const double> series, std::span<const Date> dates,
                     const std::filesystem::path& path);

/// Reads the `value` column of a CSV with a header row (as written by emit_plot_data).
std::vector<double> read_value_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace tsr
