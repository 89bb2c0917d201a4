#include "tsr/neural_ar.hpp"

#include "tsr/error.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <string>
#include <thread>

namespace tsr {

namespace {

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void check_design(const NnetArModel& model, const Eigen::MatrixXd& lags, const Eigen::VectorXd& targets) {
    if (lags.cols() != static_cast<Eigen::Index>(model.n_inputs) || lags.rows() != targets.size()) {
        throw Error(ErrorKind::DimensionMismatch, "lag matrix must be n x m with one target per row");
    }
}

Eigen::MatrixXd standardized(const NnetArModel& model, const Eigen::MatrixXd& lags) {
    return (lags.rowwise() - model.input_center.transpose()).array().rowwise() /
           model.input_scale.transpose().array();
}

}  // namespace

std::size_t NnetArModel::weight_count() const noexcept {
    return (n_inputs + 1) * n_hidden + (n_hidden + 1) + (skip_weights ? n_inputs : 0);
}

NnetArModel NnetArModel::zeros(std::size_t m, std::size_t d, bool skip) {
    if (m == 0 || d == 0) throw Error(ErrorKind::InvalidArgument, "network needs m >= 1 and D >= 1");
    NnetArModel model;
    model.n_inputs = m;
    model.n_hidden = d;
    const auto mi = static_cast<Eigen::Index>(m);
    const auto di = static_cast<Eigen::Index>(d);
    model.output_weights = Eigen::VectorXd::Zero(di);
    model.hidden_biases = Eigen::VectorXd::Zero(di);
    model.hidden_weights = Eigen::MatrixXd::Zero(mi, di);
    if (skip) model.skip_weights = Eigen::VectorXd::Zero(mi);
    model.input_center = Eigen::VectorXd::Zero(mi);
    model.input_scale = Eigen::VectorXd::Ones(mi);
    return model;
}

Eigen::VectorXd NnetArModel::pack() const {
    Eigen::VectorXd w(static_cast<Eigen::Index>(weight_count()));
    const auto d = static_cast<Eigen::Index>(n_hidden);
    const auto m = static_cast<Eigen::Index>(n_inputs);
    Eigen::Index at = 0;
    w(at++) = output_bias;
    w.segment(at, d) = output_weights;
    at += d;
    w.segment(at, d) = hidden_biases;
    at += d;
    w.segment(at, m * d) = hidden_weights.reshaped();
    at += m * d;
    if (skip_weights) w.segment(at, m) = *skip_weights;
    return w;
}

void NnetArModel::unpack(const Eigen::VectorXd& w) {
    if (w.size() != static_cast<Eigen::Index>(weight_count())) {
        throw Error(ErrorKind::DimensionMismatch, "weight vector has the wrong length");
    }
    const auto d = static_cast<Eigen::Index>(n_hidden);
    const auto m = static_cast<Eigen::Index>(n_inputs);
    Eigen::Index at = 0;
    output_bias = w(at++);
    output_weights = w.segment(at, d);
    at += d;
    hidden_biases = w.segment(at, d);
    at += d;
    hidden_weights = w.segment(at, m * d).reshaped(m, d);
    at += m * d;
    if (skip_weights) *skip_weights = w.segment(at, m);
}

double forward(const NnetArModel& model, std::span<const double> lags) {
    if (lags.size() != model.n_inputs) {
        throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(model.n_inputs) + " lags, got " +
                                                      std::to_string(lags.size()));
    }
    const auto m = static_cast<Eigen::Index>(model.n_inputs);
    Eigen::VectorXd u(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        u(i) = (lags[static_cast<std::size_t>(i)] - model.input_center(i)) / model.input_scale(i);
    }
    double out = model.output_bias;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(model.n_hidden); ++j) {
        out += model.output_weights(j) * logistic(model.hidden_biases(j) + model.hidden_weights.col(j).dot(u));
    }
    if (model.skip_weights) out += model.skip_weights->dot(u);
    return out;
}

NnetDesign nnet_design(std::span<const double> series, std::size_t m, std::optional<std::size_t> start) {
    const std::size_t s = start.value_or(m);
    if (m == 0 || s < m || s >= series.size()) {
        throw Error(ErrorKind::SeriesTooShort, "series too short for the network's lag order");
    }
    const auto n = static_cast<Eigen::Index>(series.size() - s);
    NnetDesign d;
    d.lags.resize(n, static_cast<Eigen::Index>(m));
    d.targets.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const std::size_t t = s + static_cast<std::size_t>(r);
        for (std::size_t i = 0; i < m; ++i) d.lags(r, static_cast<Eigen::Index>(i)) = series[t - 1 - i];
        d.targets(r) = series[t];
    }
    return d;
}

namespace {

struct Pass {
    Eigen::VectorXd residuals;
    Eigen::MatrixXd hidden;  // n x D activations
    Eigen::MatrixXd inputs;  // standardised lags
};

Pass run_forward(const NnetArModel& model, const Eigen::MatrixXd& lags, const Eigen::VectorXd& targets) {
    Pass p;
    p.inputs = standardized(model, lags);
    Eigen::MatrixXd pre = p.inputs * model.hidden_weights;
    pre.rowwise() += model.hidden_biases.transpose();
    p.hidden = pre.unaryExpr([](double x) { return logistic(x); });
    Eigen::VectorXd out = (p.hidden * model.output_weights).array() + model.output_bias;
    if (model.skip_weights) out += p.inputs * *model.skip_weights;
    p.residuals = targets - out;
    return p;
}

}  // namespace

double half_rss(const NnetArModel& model, const Eigen::MatrixXd& lags, const Eigen::VectorXd& targets) {
    check_design(model, lags, targets);
    return 0.5 * run_forward(model, lags, targets).residuals.squaredNorm();
}

NnetArModel gradient(const NnetArModel& model, const Eigen::MatrixXd& lags, const Eigen::VectorXd& targets) {
    check_design(model, lags, targets);
    const Pass p = run_forward(model, lags, targets);
    const Eigen::VectorXd& e = p.residuals;

    NnetArModel g = model;
    g.output_bias = -e.sum();
    g.output_weights = -(p.hidden.transpose() * e);
    // delta_rj = -e_r * b_j * h_rj (1 - h_rj)
    Eigen::MatrixXd delta = p.hidden.array() * (1.0 - p.hidden.array());
    delta = (delta.array().rowwise() * model.output_weights.transpose().array()).colwise() * (-e).array();
    g.hidden_biases = delta.colwise().sum().transpose();
    g.hidden_weights = p.inputs.transpose() * delta;
    if (model.skip_weights) g.skip_weights = -(p.inputs.transpose() * e);
    return g;
}

namespace {

struct RestartOutcome {
    NnetArModel model;
    double rss = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
};

RestartOutcome train_once(const NnetArModel& shape, const NnetDesign& design, const NnetTrainConfig& config,
                          std::uint64_t restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> init(-config.init_scale, config.init_scale);

    NnetArModel model = shape;
    Eigen::VectorXd w(static_cast<Eigen::Index>(model.weight_count()));
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = init(rng);
    model.unpack(w);

    RestartOutcome out;
    double loss = half_rss(model, design.lags, design.targets);
    if (!std::isfinite(loss)) return out;
    double step = 1.0;
    std::size_t iter = 0;
    for (; iter < config.max_iters; ++iter) {
        const Eigen::VectorXd grad = gradient(model, design.lags, design.targets).pack();
        const double g2 = grad.squaredNorm();
        if (!std::isfinite(g2)) return out;
        if (g2 == 0.0) break;
        const Eigen::VectorXd w0 = model.pack();
        bool accepted = false;
        double new_loss = loss;
        step *= 2.0;
        for (int shrink = 0; shrink < 80; ++shrink) {
            NnetArModel trial = model;
            trial.unpack(w0 - step * grad);
            new_loss = half_rss(trial, design.lags, design.targets);
            if (std::isfinite(new_loss) && new_loss <= loss - 1e-4 * step * g2) {
                model = std::move(trial);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        const double change = (loss - new_loss) / std::max(loss, std::numeric_limits<double>::min());
        loss = new_loss;
        if (change < config.relative_tolerance) {
            ++iter;
            break;
        }
    }
    out.model = std::move(model);
    out.rss = 2.0 * loss;
    out.iterations = iter;
    return out;
}

}  // namespace

NnetTrainResult train_nnet_ar(std::span<const double> series, std::size_t m, std::size_t d,
                              const NnetTrainConfig& config) {
    NnetArModel shape = NnetArModel::zeros(m, d, config.skip_connections);
    if (series.size() <= m + shape.weight_count()) {
        throw Error(ErrorKind::SeriesTooShort, "series too short for " + std::to_string(shape.weight_count()) +
                                                   " network weights");
    }
    if (config.restarts == 0) throw Error(ErrorKind::InvalidArgument, "need at least one restart");
    const NnetDesign design = nnet_design(series, m);
    if (config.standardize_inputs) {
        shape.input_center = design.lags.colwise().mean().transpose();
        const Eigen::VectorXd sd =
            ((design.lags.rowwise() - shape.input_center.transpose()).colwise().squaredNorm() /
             static_cast<double>(design.lags.rows()))
                .cwiseSqrt()
                .transpose();
        for (Eigen::Index i = 0; i < sd.size(); ++i) shape.input_scale(i) = sd(i) > 0.0 ? sd(i) : 1.0;
    }

    const auto policy = std::thread::hardware_concurrency() > 1 ? std::launch::async : std::launch::deferred;
    std::vector<std::future<RestartOutcome>> jobs;
    for (std::size_t r = 0; r < config.restarts; ++r) {
        jobs.push_back(std::async(policy, train_once, std::cref(shape), std::cref(design),
                                  std::cref(config), static_cast<std::uint64_t>(r)));
    }
    NnetTrainResult result;
    bool found = false;
    for (std::size_t r = 0; r < jobs.size(); ++r) {
        RestartOutcome o = jobs[r].get();
        result.restart_rss.push_back(o.rss);
        if (std::isfinite(o.rss) && (!found || o.rss < result.rss)) {
            found = true;
            result.model = std::move(o.model);
            result.rss = o.rss;
            result.iterations = o.iterations;
            result.best_restart = r;
        }
    }
    if (!found) throw Error(ErrorKind::NonFiniteLoss, "every restart produced a non-finite loss");
    return result;
}

}  // namespace tsr
