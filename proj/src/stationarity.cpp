#include "tsr/stationarity.hpp"

#include "tsr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tsr {

namespace {

// Fuller's tau table, no constant, no trend.
constexpr std::array<double, 8> kProbs{0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr std::array<double, 6> kSizes{25, 50, 100, 250, 500, 0 /* infinity */};
constexpr double kTable[6][8] = {
    {-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16},
    {-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08},
    {-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
};

std::array<double, 8> critical_row(std::size_t n) {
    const double inv_n = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);
    auto inv = [](std::size_t i) { return kSizes[i] == 0 ? 0.0 : 1.0 / kSizes[i]; };
    std::array<double, 8> out{};
    if (inv_n >= inv(0)) {
        std::copy(std::begin(kTable[0]), std::end(kTable[0]), out.begin());
        return out;
    }
    for (std::size_t i = 0; i + 1 < kSizes.size(); ++i) {
        const double hi = inv(i), lo = inv(i + 1);
        if (inv_n <= hi && inv_n >= lo) {
            const double w = hi == lo ? 0.0 : (inv_n - lo) / (hi - lo);
            for (std::size_t j = 0; j < out.size(); ++j) {
                out[j] = w * kTable[i][j] + (1.0 - w) * kTable[i + 1][j];
            }
            return out;
        }
    }
    std::copy(std::begin(kTable[5]), std::end(kTable[5]), out.begin());
    return out;
}

}  // namespace

BreakDummies build_dummies(std::size_t length, std::size_t break_index) {
    if (!(break_index > 1 && break_index < length)) {
        throw Error(ErrorKind::BreakOutOfRange, "break index " + std::to_string(break_index) +
                                                    " must satisfy 1 < T_B < " + std::to_string(length));
    }
    BreakDummies d;
    d.d_tb.assign(length, 0.0);
    d.du.assign(length, 0.0);
    d.dt.assign(length, 0.0);
    for (std::size_t i = 0; i < length; ++i) {
        const std::size_t t = i + 1;
        if (t == break_index + 1) d.d_tb[i] = 1.0;
        if (t > break_index) {
            d.du[i] = 1.0;
            d.dt[i] = static_cast<double>(t - break_index);
        }
    }
    return d;
}

PerronDetrendResult perron_detrend(std::span<const double> prices, std::size_t break_index,
                                   BreakSpecification specification) {
    const std::size_t n = prices.size();
    if (break_index < 2 || n < break_index + 5) {
        throw Error(ErrorKind::BreakOutOfRange, "break index " + std::to_string(break_index) +
                                                    " needs 1 < T_B and at least 5 later observations");
    }
    const BreakDummies dummies = build_dummies(n, break_index);

    PerronDetrendResult out;
    out.specification = specification;
    out.break_index = break_index;
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    if (specification == BreakSpecification::TrendBreak) {
        x.resize(static_cast<Eigen::Index>(n), 4);
        y.resize(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            x(r, 0) = 1.0;
            x(r, 1) = static_cast<double>(i + 1);
            x(r, 2) = dummies.du[i];
            x(r, 3) = dummies.dt[i];
            y(r) = prices[i];
        }
    } else {
        // p_t - p_{t-1} for t = 2..n
        x.resize(static_cast<Eigen::Index>(n - 1), 3);
        y.resize(static_cast<Eigen::Index>(n - 1));
        for (std::size_t i = 1; i < n; ++i) {
            const auto r = static_cast<Eigen::Index>(i - 1);
            x(r, 0) = 1.0;
            x(r, 1) = dummies.d_tb[i];
            x(r, 2) = dummies.du[i];
            y(r) = prices[i] - prices[i - 1];
        }
    }
    const OlsFit fit = ols_fit(x, y);
    out.coefficients = fit.coefficients;
    out.standard_errors = fit.standard_errors;
    out.residuals.assign(fit.residuals.data(), fit.residuals.data() + fit.residuals.size());
    return out;
}

std::size_t pp_bandwidth(std::size_t n) {
    return static_cast<std::size_t>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

double df_critical_value(double prob, std::size_t n) {
    const auto row = critical_row(n);
    for (std::size_t j = 0; j < kProbs.size(); ++j) {
        if (std::abs(kProbs[j] - prob) < 1e-12) return row[j];
    }
    throw Error(ErrorKind::InvalidArgument, "probability level is not tabulated");
}

double df_pvalue(double statistic, std::size_t n) {
    const auto row = critical_row(n);
    if (statistic <= row.front()) return kProbs.front();
    if (statistic >= row.back()) return kProbs.back();
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
        if (statistic <= row[j + 1]) {
            const double w = (statistic - row[j]) / (row[j + 1] - row[j]);
            return std::exp((1.0 - w) * std::log(kProbs[j]) + w * std::log(kProbs[j + 1]));
        }
    }
    return kProbs.back();
}

PhillipsPerronResult phillips_perron(std::span<const double> residuals) {
    const std::size_t total = residuals.size();
    if (total < 20) {
        throw Error(ErrorKind::SeriesTooShort, "Phillips-Perron needs at least 20 observations");
    }
    const std::size_t n = total - 1;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 1; t < total; ++t) {
        sxx += residuals[t - 1] * residuals[t - 1];
        sxy += residuals[t] * residuals[t - 1];
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::RankDeficient, "residuals are identically zero");
    const double rho = sxy / sxx;

    std::vector<double> u(n);
    double ssr = 0.0;
    for (std::size_t t = 1; t < total; ++t) {
        u[t - 1] = residuals[t] - rho * residuals[t - 1];
        ssr += u[t - 1] * u[t - 1];
    }
    const double nd = static_cast<double>(n);
    const double s2 = ssr / (nd - 1.0);
    const double se_rho = std::sqrt(s2 / sxx);
    const double t_rho = (rho - 1.0) / se_rho;

    const std::size_t lags = pp_bandwidth(total);
    const double gamma0 = ssr / nd;
    double lrv = gamma0;
    for (std::size_t j = 1; j <= lags && j < n; ++j) {
        double g = 0.0;
        for (std::size_t t = j; t < n; ++t) g += u[t] * u[t - j];
        g /= nd;
        lrv += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(lags + 1)) * g;
    }
    const double lambda = std::sqrt(lrv);

    PhillipsPerronResult out;
    out.rho = rho;
    out.n_obs = n;
    out.bandwidth = lags;
    out.long_run_variance = lrv;
    out.z_statistic = std::sqrt(gamma0 / lrv) * t_rho -
                      (lrv - gamma0) / (2.0 * lambda) * (nd * se_rho / std::sqrt(s2));
    out.p_value = df_pvalue(out.z_statistic, n);
    out.critical_values = {df_critical_value(0.01, n), df_critical_value(0.05, n),
                           df_critical_value(0.10, n)};
    return out;
}

}  // namespace tsr
