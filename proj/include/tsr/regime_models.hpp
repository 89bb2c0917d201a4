#pragma once

#include "tsr/nls.hpp"
#include "tsr/transitions.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tsr {

enum class ModelKind { Ar, Setar, Lstar, Estar };

const char* to_string(ModelKind kind) noexcept;

/// What the regime thresholds are compared against: calendar time (the 1-based
/// position of the observation in the series) or a lagged value X[t - delay].
struct ThresholdVariable {
    enum class Kind { Time, LaggedValue };
    Kind kind = Kind::Time;
    std::size_t delay = 1;

    static ThresholdVariable time() { return {Kind::Time, 0}; }
    static ThresholdVariable lagged(std::size_t delay) { return {Kind::LaggedValue, delay}; }

    /// Value for the observation at zero-based index t.
    double value(std::span<const double> series, std::size_t t) const {
        return kind == Kind::Time ? static_cast<double>(t + 1) : series[t - delay];
    }
    std::size_t history() const noexcept { return kind == Kind::Time ? 0 : delay; }
};

struct TransitionError {
    double gamma = 0.0;
    double c = 0.0;
};

/// Unified record for AR, SETAR and STAR fits.
///
/// For AR and SETAR, `regimes` holds one (intercept, lag_1..lag_p) vector per
/// regime ordered from the lowest threshold-variable values upward. For
/// LSTAR/ESTAR the model is additive: `regimes[0]` is the linear block and
/// `regimes[i]` is weighted by `transitions[i - 1]`.
struct RegimeModel {
    ModelKind kind = ModelKind::Ar;
    std::size_t order = 0;
    std::vector<Eigen::VectorXd> regimes;
    std::vector<Eigen::VectorXd> standard_errors;
    std::vector<double> thresholds;
    std::vector<TransitionSpec> transitions;
    std::vector<TransitionError> transition_errors;
    ThresholdVariable threshold_variable = ThresholdVariable::time();

    double rss = 0.0;
    std::size_t start = 0;  ///< zero-based index of the first fitted observation
    std::vector<double> fitted;
    std::vector<double> residuals;
    std::vector<double> regime_proportions;
    bool converged = true;

    std::size_t n_params() const noexcept;
    std::size_t required_history() const noexcept;
    std::size_t n_regimes() const noexcept;
    /// Index of the hard regime an observation with threshold value z falls in
    /// (values equal to a threshold go to the upper side).
    std::size_t regime_of(double z) const noexcept;
};

RegimeModel fit_ar(std::span<const double> series, std::size_t order,
                   std::optional<std::size_t> start = std::nullopt);

struct OrderScore {
    std::size_t order = 0;
    double rss = 0.0;
    double aic = 0.0;
    double bic = 0.0;
};

struct OrderSelection {
    std::vector<OrderScore> table;
    std::size_t n_obs = 0;
    std::size_t best_aic = 0;
    std::size_t best_bic = 0;
};

/// Scores AR(0..max_order) on the common sample that drops the first
/// max_order observations.
OrderSelection select_ar_order(std::span<const double> series, std::size_t max_order);

struct SetarOptions {
    std::size_t order = 1;
    std::size_t n_regimes = 2;
    ThresholdVariable threshold_variable = ThresholdVariable::time();
    /// Minimum share of observations per regime; defaults to 0.15 (2 regimes)
    /// or 0.10 (3 regimes).
    std::optional<double> min_fraction;
};

/// Exhaustive threshold search over observed threshold-variable values with
/// regime-wise least squares; global RSS minimum, ties to the smallest thresholds.
RegimeModel fit_setar(std::span<const double> series, const SetarOptions& options = {});

struct GammaGrid {
    double lo = 1.0;
    double hi = 200.0;
    double step = 0.002;
    /// false: `coarse_points` log-spaced values in [lo, hi]; true: lo, lo + step, ..., hi.
    bool exact = false;
    std::size_t coarse_points = 200;

    std::vector<double> values(double gamma_init) const;
};

struct StarOptions {
    std::size_t order = 1;
    std::size_t n_transitions = 1;
    TransitionKind transition = TransitionKind::Logistic;
    ThresholdVariable threshold_variable = ThresholdVariable::time();
    GammaGrid gamma_grid{};
    /// Always evaluated in the grid in addition to the grid points.
    double gamma_init = 3.0;
    std::optional<double> min_fraction;
    bool refine = true;
    NlsOptions nls{};
};

/// Two-stage STAR estimation: a (gamma, c) grid with the remaining
/// coefficients solved by least squares, then joint nonlinear least squares
/// from the best grid point. Two transitions are searched sequentially (the
/// second conditional on the first) before the joint refinement.
RegimeModel fit_star(std::span<const double> series, const StarOptions& options = {});

inline RegimeModel fit_lstar(std::span<const double> series, StarOptions options = {}) {
    options.transition = TransitionKind::Logistic;
    return fit_star(series, options);
}

inline RegimeModel fit_estar(std::span<const double> series, StarOptions options = {}) {
    options.transition = TransitionKind::Exponential;
    return fit_star(series, options);
}

struct FittedValues {
    std::size_t start = 0;
    std::vector<double> fitted;
    std::vector<double> residuals;
    std::vector<std::size_t> regime;
    /// One column per transition (STAR models only).
    std::vector<std::vector<double>> weights;
};

/// In-sample one-step-ahead predictions for observations start..N-1.
FittedValues one_step_fitted(const RegimeModel& model, std::span<const double> series,
                             std::optional<std::size_t> start = std::nullopt);

/// Iterates the model with N(0, noise_sd^2) innovations after a 100-step
/// burn-in (zero initial history). Time-threshold models see the first
/// returned observation at time 1. Throws ExplosivePath past |X| > 1e8.
std::vector<double> simulate(const RegimeModel& model, std::size_t length, double noise_sd,
                             std::uint64_t seed);

inline constexpr std::size_t kSimulationBurnIn = 100;

/// Logistic STAR carrying the same regime coefficients and thresholds as a
/// two-regime SETAR, with the given smoothness.
RegimeModel setar_as_lstar(const RegimeModel& setar, double gamma);

}  // namespace tsr
