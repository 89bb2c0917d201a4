#include "tsr/ols.hpp"

#include "tsr/error.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace tsr {

OlsFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
    const Eigen::Index n = design.rows();
    const Eigen::Index k = design.cols();
    if (response.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "design has " + std::to_string(n) +
                                                      " rows but response has " +
                                                      std::to_string(response.size()));
    }
    if (k == 0 || n <= k) {
        throw Error(ErrorKind::InvalidArgument, "ols needs rows > columns >= 1 (rows " +
                                                    std::to_string(n) + ", columns " +
                                                    std::to_string(k) + ")");
    }
    if (!design.allFinite() || !response.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "design or response contains non-finite values");
    }

    std::optional<Eigen::Index> intercept;
    for (Eigen::Index j = 0; j < k && !intercept; ++j) {
        const double v = design(0, j);
        if (v != 0.0 && (design.col(j).array() == v).all()) intercept = j;
    }

    Eigen::VectorXd centre = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(k);
    Eigen::MatrixXd z(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        if (intercept && j == *intercept) {
            scale(j) = design(0, j);
            z.col(j).setOnes();
            continue;
        }
        if (intercept) centre(j) = design.col(j).mean();
        const Eigen::VectorXd c = design.col(j).array() - centre(j);
        const double s = std::sqrt(c.squaredNorm() / static_cast<double>(n));
        if (!(s > 0.0)) {
            throw Error(ErrorKind::RankDeficient, "column " + std::to_string(j) +
                                                      " is constant or zero");
        }
        scale(j) = s;
        z.col(j) = c / s;
    }

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    const auto& sv = svd.singularValues();
    const double smin = sv(k - 1);
    if (!(smin > 0.0) || sv(0) / smin > kMaxConditionNumber) {
        throw Error(ErrorKind::RankDeficient, "design condition number exceeds 1e12");
    }

    const Eigen::VectorXd gamma = qr.solve(response);

    // b = T * gamma with T diagonal apart from the intercept row.
    Eigen::MatrixXd transform = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) transform(j, j) = 1.0 / scale(j);
    if (intercept) {
        const Eigen::Index i0 = *intercept;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (j != i0) transform(i0, j) = -centre(j) / scale(j) / scale(i0);
        }
    }

    OlsFit fit;
    fit.n_obs = static_cast<std::size_t>(n);
    fit.n_params = static_cast<std::size_t>(k);
    fit.coefficients = transform * gamma;
    fit.residuals = response - z * gamma;
    fit.rss = fit.residuals.squaredNorm();

    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd a = transform * r_inv;
    fit.standard_errors = (fit.sigma2() * a.rowwise().squaredNorm()).array().sqrt();
    return fit;
}

}  // namespace tsr
