#include "tsr/nls.hpp"

#include "tsr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsr {

namespace {

Eigen::VectorXd project(Eigen::VectorXd theta, const std::optional<Box>& bounds) {
    if (bounds) theta = theta.cwiseMax(bounds->lower).cwiseMin(bounds->upper);
    return theta;
}

Eigen::VectorXd standard_errors(const Eigen::MatrixXd& jac, double sigma2) {
    const Eigen::Index k = jac.cols();
    Eigen::VectorXd se = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity());
    std::vector<Eigen::Index> live;
    Eigen::VectorXd norms = jac.colwise().norm();
    const double max_norm = norms.maxCoeff();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (norms(j) > 1e-300 && norms(j) > 1e-14 * max_norm) live.push_back(j);
    }
    if (live.empty()) return se;
    Eigen::MatrixXd js(jac.rows(), static_cast<Eigen::Index>(live.size()));
    for (std::size_t i = 0; i < live.size(); ++i) {
        js.col(static_cast<Eigen::Index>(i)) = jac.col(live[i]) / norms(live[i]);
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(js, Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cutoff = 1e-12 * s(0);
    Eigen::VectorXd inv_s2 = Eigen::VectorXd::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) inv_s2(i) = 1.0 / (s(i) * s(i));
    }
    const Eigen::MatrixXd& v = svd.matrixV();
    for (std::size_t i = 0; i < live.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        bool identified = true;
        double var = 0.0;
        for (Eigen::Index m = 0; m < s.size(); ++m) {
            if (inv_s2(m) == 0.0 && std::abs(v(row, m)) > 1e-8) identified = false;
            var += v(row, m) * v(row, m) * inv_s2(m);
        }
        if (identified) se(live[i]) = std::sqrt(sigma2 * var) / norms(live[i]);
    }
    return se;
}

}  // namespace

Eigen::MatrixXd numeric_jacobian(const ResidualFunction& f, const Eigen::VectorXd& theta) {
    const Eigen::Index k = theta.size();
    Eigen::MatrixXd jac;
    for (Eigen::Index j = 0; j < k; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(theta(j)));
        Eigen::VectorXd up = theta, down = theta;
        up(j) += h;
        down(j) -= h;
        const Eigen::VectorXd col = (f(up) - f(down)) / (2.0 * h);
        if (j == 0) jac.resize(col.size(), k);
        jac.col(j) = col;
    }
    return jac;
}

NlsFit nls_fit(const ResidualFunction& residuals, const Eigen::VectorXd& init,
               const std::optional<Box>& bounds, const NlsOptions& options) {
    NlsFit fit;
    Eigen::VectorXd theta = project(init, bounds);
    Eigen::VectorXd r = residuals(theta);
    if (!r.allFinite()) throw Error(ErrorKind::NonFiniteResidual, "model is not finite at the initial point");
    if (r.size() <= theta.size()) {
        throw Error(ErrorKind::InvalidArgument, "nls needs more observations than parameters");
    }
    double rss = r.squaredNorm();
    double damping = options.initial_damping;

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        fit.iterations = iter;
        const Eigen::MatrixXd jac = numeric_jacobian(residuals, theta);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;
        Eigen::VectorXd diag = jtj.diagonal();
        const double floor = std::max(diag.maxCoeff() * 1e-12, 1e-300);
        diag = diag.cwiseMax(floor);

        bool accepted = false;
        bool any_finite_step = false;
        double new_rss = rss;
        Eigen::VectorXd new_theta, new_r;
        while (damping <= options.max_damping) {
            Eigen::MatrixXd lhs = jtj;
            lhs.diagonal() += damping * diag;
            const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
            if (!step.allFinite()) {
                damping *= options.damping_factor;
                continue;
            }
            any_finite_step = true;
            new_theta = project(theta + step, bounds);
            if ((new_theta - theta).norm() <= 1e-15 * (theta.norm() + 1e-15)) break;
            new_r = residuals(new_theta);
            if (new_r.allFinite()) {
                new_rss = new_r.squaredNorm();
                if (new_rss < rss) {
                    accepted = true;
                    break;
                }
            }
            damping *= options.damping_factor;
        }
        if (!any_finite_step) {
            throw Error(ErrorKind::SingularJacobian, "no finite step at maximum damping");
        }
        if (!accepted) {
            fit.converged = true;
            break;
        }
        const double decrease = (rss - new_rss) / std::max(rss, std::numeric_limits<double>::min());
        theta = std::move(new_theta);
        r = std::move(new_r);
        rss = new_rss;
        damping = std::max(damping / options.damping_factor, 1e-12);
        if (decrease < options.relative_tolerance) {
            fit.converged = true;
            break;
        }
    }

    fit.coefficients = theta;
    fit.residuals = r;
    fit.rss = rss;
    const double dof = static_cast<double>(r.size() - theta.size());
    fit.standard_errors = standard_errors(numeric_jacobian(residuals, theta), rss / dof);
    return fit;
}

}  // namespace tsr
