#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsr {

using Date = std::chrono::year_month_day;

/// Daily closing prices. Construction validates that every value is strictly
/// positive and that timestamps (when present) are strictly increasing.
class PriceSeries {
public:
    PriceSeries(std::vector<Date> timestamps, std::vector<double> values, std::string label = {});
    /// Index-only series; timestamps are left empty.
    explicit PriceSeries(std::vector<double> values, std::string label = {});

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const Date> timestamps() const noexcept { return timestamps_; }
    bool has_dates() const noexcept { return !timestamps_.empty(); }
    const std::string& label() const noexcept { return label_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Zero-based index of `date`, or nullopt when the date is not in the series.
    std::optional<std::size_t> index_of(const Date& date) const;

private:
    std::vector<Date> timestamps_;
    std::vector<double> values_;
    std::string label_;
};

struct ReturnSeries {
    std::vector<double> values;
    std::size_t origin_length = 0;
};

enum class VolatilityEstimator {
    SampleStdDev,  ///< mean-centred, divisor window - 1
    RootMeanSquare ///< uncentred, divisor window
};

struct VolatilitySeries {
    std::vector<double> values;
    std::size_t window = 0;
};

ReturnSeries log_returns(const PriceSeries& prices);

inline constexpr std::size_t kDefaultVolatilityWindow = 60;

VolatilitySeries realized_volatility(std::span<const double> returns,
                                     std::size_t window = kDefaultVolatilityWindow,
                                     VolatilityEstimator estimator = VolatilityEstimator::SampleStdDev);

inline VolatilitySeries realized_volatility(const ReturnSeries& returns,
                                            std::size_t window = kDefaultVolatilityWindow,
                                            VolatilityEstimator estimator = VolatilityEstimator::SampleStdDev) {
    return realized_volatility(std::span<const double>(returns.values), window, estimator);
}

/// Regression design for an autoregression of the given order.
///
/// Row r corresponds to the observation at index r + order and holds
/// (1, X[t-1], ..., X[t-order], extras(r, ...)). `extra_columns`, when given,
/// must have exactly series.size() - order rows.
struct LagDesign {
    Eigen::MatrixXd design;
    Eigen::VectorXd response;
    std::size_t order = 0;
};

LagDesign lag_design(std::span<const double> series, std::size_t order,
                     const Eigen::MatrixXd* extra_columns = nullptr);

}  // namespace tsr
