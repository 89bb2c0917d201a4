#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tsr {

/// Single-hidden-layer autoregressive network with logistic hidden units:
///   X_t = b0 + sum_j b_j g(c_0j + sum_i c_ij X_{t-i}) [+ sum_i s_i X_{t-i}]
/// Inputs are optionally affinely standardised before entering the network.
struct NnetArModel {
    std::size_t n_inputs = 1;  ///< m, the lag order
    std::size_t n_hidden = 1;  ///< D
    double output_bias = 0.0;
    Eigen::VectorXd output_weights;  ///< D
    Eigen::VectorXd hidden_biases;   ///< D
    Eigen::MatrixXd hidden_weights;  ///< m x D
    std::optional<Eigen::VectorXd> skip_weights;  ///< m, direct input-to-output
    Eigen::VectorXd input_center;    ///< m, zeros unless standardised
    Eigen::VectorXd input_scale;     ///< m, ones unless standardised

    /// (m + 1) D + (D + 1) [+ m with skip connections]
    std::size_t weight_count() const noexcept;

    /// Zero network of the given shape.
    static NnetArModel zeros(std::size_t m, std::size_t d, bool skip = false);

    /// Flattened weights: b0, b_1..D, c_01..0D, c (column-major, m x D), skip.
    Eigen::VectorXd pack() const;
    void unpack(const Eigen::VectorXd& weights);
};

/// `lags[i]` is X_{t-1-i}. Throws DimensionMismatch unless lags.size() == m.
double forward(const NnetArModel& model, std::span<const double> lags);

/// Row r of the lag matrix holds (X_{t-1}, ..., X_{t-m}) for target r.
struct NnetDesign {
    Eigen::MatrixXd lags;
    Eigen::VectorXd targets;
};
NnetDesign nnet_design(std::span<const double> series, std::size_t m, std::optional<std::size_t> start = std::nullopt);

/// Gradient of 0.5 * sum (target - forward)^2, shaped like the model.
NnetArModel gradient(const NnetArModel& model, const Eigen::MatrixXd& lags, const Eigen::VectorXd& targets);

double half_rss(const NnetArModel& model, const Eigen::MatrixXd& lags, const Eigen::VectorXd& targets);

struct NnetTrainConfig {
    std::size_t restarts = 20;
    std::size_t max_iters = 2000;
    std::uint64_t seed = 1;
    double init_scale = 0.5;
    double relative_tolerance = 1e-8;
    bool skip_connections = false;
    bool standardize_inputs = false;
};

struct NnetTrainResult {
    NnetArModel model;
    double rss = 0.0;
    std::size_t iterations = 0;
    std::size_t best_restart = 0;
    std::vector<double> restart_rss;  ///< +inf for restarts aborted on a non-finite loss
};

/// Full-batch gradient descent with Armijo backtracking from `restarts`
/// uniform initialisations; the lowest final RSS wins (earliest restart on ties).
NnetTrainResult train_nnet_ar(std::span<const double> series, std::size_t m, std::size_t d,
                              const NnetTrainConfig& config = {});

}  // namespace tsr
