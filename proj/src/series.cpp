#include "tsr/series.hpp"

#include "tsr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tsr {

namespace {

void check_prices(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error(ErrorKind::TooShort, "price series needs at least 2 observations, got " +
                                             std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw Error(ErrorKind::NonPositivePrice,
                        "price at index " + std::to_string(i) + " is not strictly positive");
        }
    }
}

}  // namespace

PriceSeries::PriceSeries(std::vector<Date> timestamps, std::vector<double> values, std::string label)
    : timestamps_(std::move(timestamps)), values_(std::move(values)), label_(std::move(label)) {
    check_prices(values_);
    if (timestamps_.size() != values_.size()) {
        throw Error(ErrorKind::DimensionMismatch, "timestamps and values differ in length");
    }
    for (std::size_t i = 1; i < timestamps_.size(); ++i) {
        if (!(std::chrono::sys_days(timestamps_[i - 1]) < std::chrono::sys_days(timestamps_[i]))) {
            throw Error(ErrorKind::InvalidArgument,
                        "timestamps not strictly increasing at index " + std::to_string(i));
        }
    }
}

PriceSeries::PriceSeries(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
    check_prices(values_);
}

std::optional<std::size_t> PriceSeries::index_of(const Date& date) const {
    const auto it = std::lower_bound(timestamps_.begin(), timestamps_.end(), date,
                                     [](const Date& a, const Date& b) {
                                         return std::chrono::sys_days(a) < std::chrono::sys_days(b);
                                     });
    if (it == timestamps_.end() || *it != date) return std::nullopt;
    return static_cast<std::size_t>(it - timestamps_.begin());
}

ReturnSeries log_returns(const PriceSeries& prices) {
    const auto p = prices.values();
    ReturnSeries out;
    out.origin_length = p.size();
    out.values.resize(p.size() - 1);
    for (std::size_t t = 0; t + 1 < p.size(); ++t) {
        out.values[t] = std::log(p[t + 1]) - std::log(p[t]);
    }
    return out;
}

VolatilitySeries realized_volatility(std::span<const double> returns, std::size_t window,
                                     VolatilityEstimator estimator) {
    if (window < 2) {
        throw Error(ErrorKind::WindowTooSmall, "window must be at least 2");
    }
    if (returns.size() < window) {
        throw Error(ErrorKind::WindowTooLarge, "window " + std::to_string(window) + " exceeds " +
                                                   std::to_string(returns.size()) + " returns");
    }
    VolatilitySeries out;
    out.window = window;
    out.values.resize(returns.size() - window + 1);
    const auto w = static_cast<double>(window);
    for (std::size_t t = 0; t < out.values.size(); ++t) {
        const auto block = returns.subspan(t, window);
        double ss = 0.0;
        if (estimator == VolatilityEstimator::SampleStdDev) {
            const double mean = std::accumulate(block.begin(), block.end(), 0.0) / w;
            for (double r : block) ss += (r - mean) * (r - mean);
            out.values[t] = std::sqrt(ss / (w - 1.0));
        } else {
            for (double r : block) ss += r * r;
            out.values[t] = std::sqrt(ss / w);
        }
    }
    return out;
}

LagDesign lag_design(std::span<const double> series, std::size_t order,
                     const Eigen::MatrixXd* extra_columns) {
    if (order >= series.size()) {
        throw Error(ErrorKind::OrderTooLarge, "order " + std::to_string(order) +
                                                  " needs more than " + std::to_string(series.size()) +
                                                  " observations");
    }
    const auto rows = static_cast<Eigen::Index>(series.size() - order);
    const Eigen::Index extras = extra_columns ? extra_columns->cols() : 0;
    if (extra_columns && extra_columns->rows() != rows) {
        throw Error(ErrorKind::DimensionMismatch, "extra columns must have one row per observation");
    }
    LagDesign out;
    out.order = order;
    out.design.resize(rows, static_cast<Eigen::Index>(order) + 1 + extras);
    out.response.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(r) + order;
        out.design(r, 0) = 1.0;
        for (std::size_t lag = 1; lag <= order; ++lag) {
            out.design(r, static_cast<Eigen::Index>(lag)) = series[t - lag];
        }
        out.response(r) = series[t];
    }
    if (extras > 0) {
        out.design.rightCols(extras) = *extra_columns;
    }
    return out;
}

}  // namespace tsr
