#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>

namespace tsr {

/// Maps a parameter vector to the residual vector (observed - model).
using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

struct NlsOptions {
    double relative_tolerance = 1e-8;
    int max_iterations = 500;
    double initial_damping = 1e-3;
    double damping_factor = 10.0;
    double max_damping = 1e16;
};

struct NlsFit {
    Eigen::VectorXd coefficients;
    /// +inf for parameters the data do not identify (zero Jacobian column).
    Eigen::VectorXd standard_errors;
    Eigen::VectorXd residuals;
    double rss = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Central-difference Jacobian of `f` at `theta`, step 1e-6 * (1 + |theta_j|).
Eigen::MatrixXd numeric_jacobian(const ResidualFunction& f, const Eigen::VectorXd& theta);

/// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling).
///
/// Steps are projected onto `bounds` when given. A step is accepted only if it
/// lowers the RSS; otherwise damping grows by `damping_factor` until it
/// exceeds `max_damping`, at which point the current point is taken as
/// stationary. Iteration stops when the accepted step lowers the RSS by less
/// than `relative_tolerance` (relative), or after `max_iterations`.
/// Throws SingularJacobian if no finite step can be formed even at maximum
/// damping, NonFiniteResidual if the model is not finite at `init`.
NlsFit nls_fit(const ResidualFunction& residuals, const Eigen::VectorXd& init,
               const std::optional<Box>& bounds = std::nullopt, const NlsOptions& options = {});

}  // namespace tsr
