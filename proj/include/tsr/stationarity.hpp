#pragma once

#include "tsr/ols.hpp"
#include "tsr/series.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tsr {

/// Break regressors on the 1-based time axis t = 1..length. Element i of each
/// vector corresponds to t = i + 1.
struct BreakDummies {
    std::vector<double> d_tb;  ///< 1 at t = T_B + 1
    std::vector<double> du;    ///< 1 for t > T_B
    std::vector<double> dt;    ///< t - T_B for t > T_B
};

/// Requires 1 < break_index < length, else BreakOutOfRange.
BreakDummies build_dummies(std::size_t length, std::size_t break_index);

enum class BreakSpecification {
    NullBreak,   ///< unit root with drift, level shift: dp_t on (1, D(TB)_t, DU_t)
    TrendBreak,  ///< trend-stationary, intercept and slope change: p_t on (1, t, DU_t, DT_t)
};

struct PerronDetrendResult {
    BreakSpecification specification = BreakSpecification::TrendBreak;
    /// NullBreak: (mu1, d, mu2 - mu1). TrendBreak: (mu1, beta1, mu2 - mu1, beta2 - beta1).
    Eigen::VectorXd coefficients;
    Eigen::VectorXd standard_errors;
    std::vector<double> residuals;
    std::size_t break_index = 0;
};

/// `break_index` is T_B on the 1-based time axis: DU_t switches on at
/// observation T_B + 1 (zero-based index T_B).
PerronDetrendResult perron_detrend(std::span<const double> prices, std::size_t break_index,
                                   BreakSpecification specification);
inline PerronDetrendResult perron_detrend(const PriceSeries& prices, std::size_t break_index,
                                          BreakSpecification specification) {
    return perron_detrend(prices.values(), break_index, specification);
}

struct PhillipsPerronResult {
    double z_statistic = 0.0;
    double p_value = 1.0;
    std::size_t bandwidth = 0;
    double long_run_variance = 0.0;
    double rho = 0.0;
    std::size_t n_obs = 0;
    /// Interpolated critical values at 1%, 5% and 10%.
    std::array<double, 3> critical_values{};
};

/// floor(4 * (n / 100)^(2/9))
std::size_t pp_bandwidth(std::size_t n);

/// Critical value of the no-deterministic-term Dickey-Fuller tau distribution
/// at lower-tail probability `prob` (one of the tabulated levels), interpolated
/// linearly in 1/n between tabulated sample sizes.
double df_critical_value(double prob, std::size_t n);

/// p-value by log-linear interpolation of the tabulated probabilities against
/// the critical values at sample size n; clamped to [0.01, 0.99] outside the table.
double df_pvalue(double statistic, std::size_t n);

/// Z_t test on already detrended residuals: e_t regressed on e_{t-1} with no
/// deterministic terms, Newey-West long-run variance with a Bartlett kernel.
PhillipsPerronResult phillips_perron(std::span<const double> residuals);

}  // namespace tsr
