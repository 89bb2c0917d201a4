#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace tsr {

struct OlsFit {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd standard_errors;
    Eigen::VectorXd residuals;
    double rss = 0.0;
    std::size_t n_obs = 0;
    std::size_t n_params = 0;

    std::size_t df_residual() const noexcept { return n_obs - n_params; }
    double sigma2() const noexcept { return rss / static_cast<double>(df_residual()); }
    Eigen::VectorXd fitted(const Eigen::VectorXd& response) const { return response - residuals; }
};

inline constexpr double kMaxConditionNumber = 1e12;

/// Least squares via Householder QR on an internally standardised copy of the
/// design. A column that is constant across rows is treated as the intercept;
/// when one exists every other column is mean-centred before scaling.
/// Coefficients and standard errors are mapped back to the caller's units.
/// Throws RankDeficient when the standardised design's condition number
/// exceeds kMaxConditionNumber.
OlsFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& response);

}  // namespace tsr
