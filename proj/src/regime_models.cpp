#include "tsr/regime_models.hpp"

#include "tsr/detail/parallel.hpp"
#include "tsr/error.hpp"
#include "tsr/model_selection.hpp"
#include "tsr/ols.hpp"
#include "tsr/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace tsr {

const char* to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Ar: return "ar";
        case ModelKind::Setar: return "setar";
        case ModelKind::Lstar: return "lstar";
        case ModelKind::Estar: return "estar";
    }
    return "ar";
}

std::size_t RegimeModel::n_params() const noexcept {
    const std::size_t k = order + 1;
    switch (kind) {
        case ModelKind::Ar: return k;
        case ModelKind::Setar: return regimes.size() * k + thresholds.size();
        case ModelKind::Lstar:
        case ModelKind::Estar: return regimes.size() * k + 2 * transitions.size();
    }
    return k;
}

std::size_t RegimeModel::required_history() const noexcept {
    if (kind == ModelKind::Ar) return order;
    return std::max(order, threshold_variable.history());
}

std::size_t RegimeModel::n_regimes() const noexcept {
    return kind == ModelKind::Ar ? 1 : thresholds.size() + 1;
}

std::size_t RegimeModel::regime_of(double z) const noexcept {
    std::size_t r = 0;
    for (double c : thresholds) {
        if (z >= c) ++r;
    }
    return r;
}

namespace {

double lag_dot(const Eigen::VectorXd& coef, std::span<const double> series, std::size_t t) {
    double v = coef(0);
    for (Eigen::Index lag = 1; lag < coef.size(); ++lag) {
        v += coef(lag) * series[t - static_cast<std::size_t>(lag)];
    }
    return v;
}

double predict_one(const RegimeModel& m, std::span<const double> series, std::size_t t,
                   std::size_t* regime, std::vector<double>* weights) {
    switch (m.kind) {
        case ModelKind::Ar:
            if (regime) *regime = 0;
            return lag_dot(m.regimes[0], series, t);
        case ModelKind::Setar: {
            const std::size_t r = m.regime_of(m.threshold_variable.value(series, t));
            if (regime) *regime = r;
            return lag_dot(m.regimes[r], series, t);
        }
        case ModelKind::Lstar:
        case ModelKind::Estar: {
            const double z = m.threshold_variable.value(series, t);
            if (regime) *regime = m.regime_of(z);
            double v = lag_dot(m.regimes[0], series, t);
            for (std::size_t i = 0; i < m.transitions.size(); ++i) {
                const double g = transition_weight(m.transitions[i], z);
                if (weights) (*weights)[i] = g;
                v += g * lag_dot(m.regimes[i + 1], series, t);
            }
            return v;
        }
    }
    return 0.0;
}

void check_history(std::span<const double> series, std::size_t start, std::size_t order) {
    if (series.size() <= start + order + 1) {
        throw Error(ErrorKind::SeriesTooShort, "series of length " + std::to_string(series.size()) +
                                                   " too short for the requested model");
    }
}

/// Rows t = start..N-1 of the lag design and the threshold variable.
struct Sample {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    std::vector<double> z;
    std::size_t start = 0;
};

Sample make_sample(std::span<const double> series, std::size_t order, std::size_t start,
                   const ThresholdVariable& tv) {
    const LagDesign full = lag_design(series, order);
    const auto skip = static_cast<Eigen::Index>(start - order);
    Sample s;
    s.start = start;
    s.x = full.design.bottomRows(full.design.rows() - skip);
    s.y = full.response.tail(full.response.size() - skip);
    s.z.resize(series.size() - start);
    for (std::size_t t = start; t < series.size(); ++t) s.z[t - start] = tv.value(series, t);
    return s;
}

/// Sorted view of a sample by threshold value (stable, so ties keep time order)
/// plus the split positions where the threshold value strictly increases.
struct SortedSplits {
    std::vector<std::size_t> order;   // row indices sorted by z
    std::vector<std::size_t> splits;  // positions i with z[order[i]] > z[order[i-1]]
    std::vector<double> zs;           // sorted z
};

SortedSplits sort_splits(const std::vector<double>& z) {
    SortedSplits s;
    s.order.resize(z.size());
    std::iota(s.order.begin(), s.order.end(), std::size_t{0});
    std::stable_sort(s.order.begin(), s.order.end(), [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
    s.zs.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) s.zs[i] = z[s.order[i]];
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (s.zs[i] > s.zs[i - 1]) s.splits.push_back(i);
    }
    return s;
}

std::size_t min_regime_size(std::size_t n, double fraction, std::size_t k) {
    const auto by_fraction = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
    return std::max(by_fraction, k + 1);
}

/// Regime-wise RSS from prefix sums of cross products over the sorted sample.
class SegmentRss {
public:
    SegmentRss(const Sample& s, const std::vector<std::size_t>& order) : k_(s.x.cols()) {
        const auto n = static_cast<Eigen::Index>(order.size());
        Eigen::RowVectorXd mean = s.x.colwise().mean();
        mean(0) = 0.0;
        const double ymean = s.y.mean();
        xx_.assign(static_cast<std::size_t>(n + 1), Eigen::MatrixXd::Zero(k_, k_));
        xy_.assign(static_cast<std::size_t>(n + 1), Eigen::VectorXd::Zero(k_));
        yy_.assign(static_cast<std::size_t>(n + 1), 0.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto row = static_cast<Eigen::Index>(order[static_cast<std::size_t>(i)]);
            const Eigen::VectorXd x = (s.x.row(row) - mean).transpose();
            const double y = s.y(row) - ymean;
            const auto u = static_cast<std::size_t>(i);
            xx_[u + 1] = xx_[u] + x * x.transpose();
            xy_[u + 1] = xy_[u] + x * y;
            yy_[u + 1] = yy_[u] + y * y;
        }
    }

    std::optional<double> operator()(std::size_t a, std::size_t b) const {
        const Eigen::MatrixXd xx = xx_[b] - xx_[a];
        const Eigen::VectorXd xy = xy_[b] - xy_[a];
        const double yy = yy_[b] - yy_[a];
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(xx);
        const Eigen::VectorXd d = ldlt.vectorD();
        if (ldlt.info() != Eigen::Success || !(d.minCoeff() > 1e-10 * d.cwiseAbs().maxCoeff())) {
            return std::nullopt;
        }
        const double fit = xy.dot(ldlt.solve(xy));
        return std::max(yy - fit, 0.0);
    }

private:
    Eigen::Index k_;
    std::vector<Eigen::MatrixXd> xx_;
    std::vector<Eigen::VectorXd> xy_;
    std::vector<double> yy_;
};

/// RSS of a dense least-squares problem, nullopt when numerically rank deficient.
std::optional<double> ls_rss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    const auto k = x.cols();
    const auto& m = qr.matrixQR();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (!(std::abs(m(j, j)) > 1e-9 * x.col(j).norm())) return std::nullopt;
    }
    const Eigen::VectorXd qty = qr.householderQ().adjoint() * y;
    return qty.tail(x.rows() - k).squaredNorm();
}

void finish_model(RegimeModel& m, std::span<const double> series) {
    const FittedValues fv = one_step_fitted(m, series, m.start);
    m.fitted = fv.fitted;
    m.residuals = fv.residuals;
    m.rss = 0.0;
    for (double e : m.residuals) m.rss += e * e;
    m.regime_proportions.assign(m.n_regimes(), 0.0);
    for (std::size_t r : fv.regime) m.regime_proportions[r] += 1.0;
    for (double& p : m.regime_proportions) p /= static_cast<double>(fv.regime.size());
}


}  // namespace

RegimeModel fit_ar(std::span<const double> series, std::size_t order, std::optional<std::size_t> start) {
    const std::size_t s = start.value_or(order);
    if (s < order) throw Error(ErrorKind::InvalidArgument, "start must be at least the AR order");
    check_history(series, s, order);
    const Sample sample = make_sample(series, order, s, ThresholdVariable::time());
    const OlsFit fit = ols_fit(sample.x, sample.y);

    RegimeModel m;
    m.kind = ModelKind::Ar;
    m.order = order;
    m.start = s;
    m.regimes = {fit.coefficients};
    m.standard_errors = {fit.standard_errors};
    finish_model(m, series);
    return m;
}

OrderSelection select_ar_order(std::span<const double> series, std::size_t max_order) {
    check_history(series, max_order, max_order);
    OrderSelection out;
    for (std::size_t p = 0; p <= max_order; ++p) {
        const RegimeModel m = fit_ar(series, p, max_order);
        OrderScore score;
        score.order = p;
        score.rss = m.rss;
        out.n_obs = m.residuals.size();
        score.aic = aic(m.rss, out.n_obs, p + 1);
        score.bic = bic(m.rss, out.n_obs, p + 1);
        out.table.push_back(score);
    }
    auto argmin = [&](auto key) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < out.table.size(); ++i) {
            if (key(out.table[i]) < key(out.table[best])) best = i;
        }
        return out.table[best].order;
    };
    out.best_aic = argmin([](const OrderScore& s) { return s.aic; });
    out.best_bic = argmin([](const OrderScore& s) { return s.bic; });
    return out;
}

RegimeModel fit_setar(std::span<const double> series, const SetarOptions& options) {
    if (options.n_regimes != 2 && options.n_regimes != 3) {
        throw Error(ErrorKind::InvalidArgument, "SETAR supports 2 or 3 regimes");
    }
    const double fraction = options.min_fraction.value_or(options.n_regimes == 2 ? 0.15 : 0.10);
    if (!(fraction > 0.0 && fraction * static_cast<double>(options.n_regimes) <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "min_fraction out of range");
    }
    const std::size_t p = options.order;
    const std::size_t k = p + 1;
    const std::size_t start = std::max(p, options.threshold_variable.history());
    check_history(series, start, p);
    const Sample sample = make_sample(series, p, start, options.threshold_variable);
    const std::size_t n = sample.z.size();
    if (n < options.n_regimes * (k + 1)) {
        throw Error(ErrorKind::SeriesTooShort, "too few observations for " +
                                                   std::to_string(options.n_regimes) + " regimes");
    }
    const std::size_t m_min = min_regime_size(n, fraction, k);
    const SortedSplits sorted = sort_splits(sample.z);
    const SegmentRss seg(sample, sorted.order);

    std::vector<std::size_t> cuts;
    for (std::size_t i : sorted.splits) {
        if (i >= m_min && n - i >= m_min) cuts.push_back(i);
    }

    std::vector<std::size_t> best_cuts;
    if (options.n_regimes == 2) {
        const auto best = detail::parallel_argmin(cuts.size(), [&](std::size_t c) -> std::optional<double> {
            const auto lo = seg(0, cuts[c]);
            const auto hi = seg(cuts[c], n);
            if (!lo || !hi) return std::nullopt;
            return *lo + *hi;
        });
        if (best.found) best_cuts = {cuts[best.index]};
    } else {
        // Outer index over the first cut; the inner scan keeps the first
        // minimum, so the (first, second) pair is lexicographically smallest on ties.
        std::vector<std::size_t> inner_best(cuts.size(), 0);
        const auto best = detail::parallel_argmin(cuts.size(), [&](std::size_t a) -> std::optional<double> {
            const auto lo = seg(0, cuts[a]);
            if (!lo) return std::nullopt;
            std::optional<double> best_here;
            for (std::size_t b = a + 1; b < cuts.size(); ++b) {
                if (cuts[b] - cuts[a] < m_min) continue;
                const auto mid = seg(cuts[a], cuts[b]);
                const auto hi = seg(cuts[b], n);
                if (!mid || !hi) continue;
                const double total = *lo + *mid + *hi;
                if (!best_here || total < *best_here) {
                    best_here = total;
                    inner_best[a] = b;
                }
            }
            return best_here;
        });
        if (best.found) best_cuts = {cuts[best.index], cuts[inner_best[best.index]]};
    }
    if (best_cuts.empty()) {
        throw Error(ErrorKind::NoFeasibleThreshold, "no threshold satisfies the minimum regime fraction");
    }

    RegimeModel m;
    m.kind = ModelKind::Setar;
    m.order = p;
    m.start = start;
    m.threshold_variable = options.threshold_variable;
    std::vector<std::size_t> bounds{0};
    for (std::size_t c : best_cuts) {
        m.thresholds.push_back(sorted.zs[c]);
        bounds.push_back(c);
    }
    bounds.push_back(n);
    for (std::size_t r = 0; r + 1 < bounds.size(); ++r) {
        std::vector<std::size_t> rows(sorted.order.begin() + static_cast<std::ptrdiff_t>(bounds[r]),
                                      sorted.order.begin() + static_cast<std::ptrdiff_t>(bounds[r + 1]));
        std::sort(rows.begin(), rows.end());
        Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(k));
        Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            x.row(static_cast<Eigen::Index>(i)) = sample.x.row(static_cast<Eigen::Index>(rows[i]));
            y(static_cast<Eigen::Index>(i)) = sample.y(static_cast<Eigen::Index>(rows[i]));
        }
        const OlsFit fit = ols_fit(x, y);
        m.regimes.push_back(fit.coefficients);
        m.standard_errors.push_back(fit.standard_errors);
    }
    finish_model(m, series);
    return m;
}

std::vector<double> GammaGrid::values(double gamma_init) const {
    if (!(lo > 0.0 && lo < hi && step > 0.0) || coarse_points < 2) {
        throw Error(ErrorKind::InvalidArgument, "gamma grid needs 0 < lo < hi and step > 0");
    }
    std::vector<double> out;
    if (exact) {
        const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        out.reserve(count + 1);
        for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    } else {
        const double a = std::log(lo), b = std::log(hi);
        for (std::size_t i = 0; i < coarse_points; ++i) {
            out.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(coarse_points - 1)));
        }
    }
    if (gamma_init >= lo && gamma_init <= hi) out.push_back(gamma_init);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct StarLayout {
    std::size_t k = 0;
    std::size_t n_transitions = 0;
    std::size_t n_blocks() const { return n_transitions + 1; }
    std::size_t n_coefs() const { return n_blocks() * k; }
    std::size_t size() const { return n_coefs() + 2 * n_transitions; }
};

Eigen::MatrixXd star_design(const Sample& s, const std::vector<TransitionSpec>& transitions) {
    const auto k = s.x.cols();
    const auto n = s.x.rows();
    Eigen::MatrixXd d(n, k * static_cast<Eigen::Index>(transitions.size() + 1));
    d.leftCols(k) = s.x;
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const double g = transition_weight(transitions[i], s.z[static_cast<std::size_t>(r)]);
            d.block(r, k * static_cast<Eigen::Index>(i + 1), 1, k) = g * s.x.row(r);
        }
    }
    return d;
}

Eigen::VectorXd star_residuals(const Sample& s, const StarLayout& layout, TransitionKind kind,
                               const Eigen::VectorXd& theta) {
    std::vector<TransitionSpec> tr(layout.n_transitions);
    for (std::size_t i = 0; i < layout.n_transitions; ++i) {
        tr[i] = {kind, theta(static_cast<Eigen::Index>(layout.n_coefs() + 2 * i)),
                 theta(static_cast<Eigen::Index>(layout.n_coefs() + 2 * i + 1))};
    }
    return s.y - star_design(s, tr) * theta.head(static_cast<Eigen::Index>(layout.n_coefs()));
}

/// Sorted threshold counts for a set of thresholds must leave every hard
/// regime with at least m_min observations.
bool regimes_feasible(const std::vector<double>& sorted_z, std::vector<double> cs, std::size_t m_min) {
    std::sort(cs.begin(), cs.end());
    std::size_t prev = 0;
    for (double c : cs) {
        const auto pos = static_cast<std::size_t>(std::lower_bound(sorted_z.begin(), sorted_z.end(), c) - sorted_z.begin());
        if (pos - prev < m_min) return false;
        prev = pos;
    }
    return sorted_z.size() - prev >= m_min;
}

}  // namespace

RegimeModel fit_star(std::span<const double> series, const StarOptions& options) {
    if (options.n_transitions != 1 && options.n_transitions != 2) {
        throw Error(ErrorKind::InvalidArgument, "STAR supports 1 or 2 transitions");
    }
    const std::size_t regimes = options.n_transitions + 1;
    const double fraction = options.min_fraction.value_or(regimes == 2 ? 0.15 : 0.10);
    if (!(fraction > 0.0 && fraction * static_cast<double>(regimes) <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "min_fraction out of range");
    }
    const std::vector<double> gammas = options.gamma_grid.values(options.gamma_init);
    const std::size_t p = options.order;
    const std::size_t k = p + 1;
    const std::size_t start = std::max(p, options.threshold_variable.history());
    check_history(series, start, p);
    const Sample sample = make_sample(series, p, start, options.threshold_variable);
    const std::size_t n = sample.z.size();
    const StarLayout layout{k, options.n_transitions};
    if (n <= layout.size() + 1) throw Error(ErrorKind::SeriesTooShort, "too few observations for STAR model");

    const std::size_t m_min = min_regime_size(n, fraction, k);
    const SortedSplits sorted = sort_splits(sample.z);
    std::vector<double> candidates;
    for (std::size_t i : sorted.splits) {
        if (i >= m_min && n - i >= m_min) candidates.push_back(sorted.zs[i]);
    }
    if (candidates.empty()) {
        throw Error(ErrorKind::NoFeasibleThreshold, "no threshold satisfies the minimum regime fraction");
    }
    const TransitionKind kind = options.transition;

    // Stage 1: grid over (gamma, c) for each transition in turn.
    std::vector<TransitionSpec> chosen;
    for (std::size_t tr = 0; tr < options.n_transitions; ++tr) {
        const std::size_t n_gamma = gammas.size();
        const auto best = detail::parallel_argmin(candidates.size() * n_gamma, [&](std::size_t idx) -> std::optional<double> {
            const double c = candidates[idx / n_gamma];
            std::vector<double> cs{c};
            for (const auto& t : chosen) {
                if (t.c == c) return std::nullopt;
                cs.push_back(t.c);
            }
            if (!regimes_feasible(sorted.zs, cs, m_min)) return std::nullopt;
            std::vector<TransitionSpec> trial = chosen;
            trial.push_back({kind, gammas[idx % n_gamma], c});
            return ls_rss(star_design(sample, trial), sample.y);
        });
        if (!best.found) {
            throw Error(ErrorKind::NoFeasibleThreshold, "no feasible (gamma, c) grid point");
        }
        chosen.push_back({kind, gammas[best.index % n_gamma], candidates[best.index / n_gamma]});
    }
    std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) { return a.c < b.c; });

    const Eigen::MatrixXd grid_design = star_design(sample, chosen);
    const OlsFit grid_fit = ols_fit(grid_design, sample.y);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(layout.size()));
    theta.head(static_cast<Eigen::Index>(layout.n_coefs())) = grid_fit.coefficients;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        theta(static_cast<Eigen::Index>(layout.n_coefs() + 2 * i)) = chosen[i].gamma;
        theta(static_cast<Eigen::Index>(layout.n_coefs() + 2 * i + 1)) = chosen[i].c;
    }
    Eigen::VectorXd se(static_cast<Eigen::Index>(layout.size()));
    se.head(static_cast<Eigen::Index>(layout.n_coefs())) = grid_fit.standard_errors;
    se.tail(static_cast<Eigen::Index>(2 * chosen.size())).setConstant(std::numeric_limits<double>::infinity());
    bool converged = false;

    // Stage 2: joint refinement.
    if (options.refine) {
        Box box;
        const double inf = std::numeric_limits<double>::infinity();
        box.lower = Eigen::VectorXd::Constant(theta.size(), -inf);
        box.upper = Eigen::VectorXd::Constant(theta.size(), inf);
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            const auto g = static_cast<Eigen::Index>(layout.n_coefs() + 2 * i);
            box.lower(g) = options.gamma_grid.lo;
            box.upper(g) = options.gamma_grid.hi;
            box.lower(g + 1) = candidates.front();
            box.upper(g + 1) = candidates.back();
        }
        try {
            const NlsFit nls = nls_fit(
                [&](const Eigen::VectorXd& th) { return star_residuals(sample, layout, kind, th); }, theta, box,
                options.nls);
            std::vector<double> cs;
            for (std::size_t i = 0; i < chosen.size(); ++i) {
                cs.push_back(nls.coefficients(static_cast<Eigen::Index>(layout.n_coefs() + 2 * i + 1)));
            }
            const bool ordered = std::is_sorted(cs.begin(), cs.end()) &&
                                 std::adjacent_find(cs.begin(), cs.end()) == cs.end();
            if (ordered && regimes_feasible(sorted.zs, cs, m_min) && nls.rss <= grid_fit.rss) {
                theta = nls.coefficients;
                se = nls.standard_errors;
                converged = nls.converged;
            }
        } catch (const Error&) {
            converged = false;
        }
    }

    RegimeModel m;
    m.kind = kind == TransitionKind::Logistic ? ModelKind::Lstar : ModelKind::Estar;
    m.order = p;
    m.start = start;
    m.threshold_variable = options.threshold_variable;
    m.converged = converged;
    for (std::size_t b = 0; b < layout.n_blocks(); ++b) {
        const auto off = static_cast<Eigen::Index>(b * k);
        m.regimes.push_back(theta.segment(off, static_cast<Eigen::Index>(k)));
        m.standard_errors.push_back(se.segment(off, static_cast<Eigen::Index>(k)));
    }
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        const auto g = static_cast<Eigen::Index>(layout.n_coefs() + 2 * i);
        m.transitions.push_back({kind, theta(g), theta(g + 1)});
        m.transition_errors.push_back({se(g), se(g + 1)});
        m.thresholds.push_back(theta(g + 1));
    }
    finish_model(m, series);
    return m;
}

FittedValues one_step_fitted(const RegimeModel& model, std::span<const double> series,
                             std::optional<std::size_t> start) {
    const std::size_t s = start.value_or(model.required_history());
    if (s < model.required_history() || s >= series.size()) {
        throw Error(ErrorKind::SeriesTooShort, "series too short for the model's lag history");
    }
    FittedValues out;
    out.start = s;
    const std::size_t n = series.size() - s;
    out.fitted.resize(n);
    out.residuals.resize(n);
    out.regime.resize(n);
    const std::size_t n_tr = model.transitions.size();
    out.weights.assign(n_tr, std::vector<double>(n));
    std::vector<double> w(n_tr);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t t = s + i;
        out.fitted[i] = predict_one(model, series, t, &out.regime[i], &w);
        out.residuals[i] = series[t] - out.fitted[i];
        for (std::size_t j = 0; j < n_tr; ++j) out.weights[j][i] = w[j];
    }
    return out;
}

std::vector<double> simulate(const RegimeModel& model, std::size_t length, double noise_sd, std::uint64_t seed) {
    if (!(noise_sd >= 0.0)) throw Error(ErrorKind::InvalidArgument, "noise_sd must be non-negative");
    if (model.regimes.empty()) throw Error(ErrorKind::InvalidArgument, "model has no coefficients");
    const std::size_t history = model.required_history();
    const std::size_t total = history + kSimulationBurnIn + length;
    std::vector<double> x(total, 0.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    // Time-threshold models read time as (index + 1), so shift the model's
    // thresholds by the pre-sample length for the simulation buffer.
    RegimeModel shifted = model;
    const double offset = static_cast<double>(history + kSimulationBurnIn);
    if (model.threshold_variable.kind == ThresholdVariable::Kind::Time) {
        for (double& c : shifted.thresholds) c += offset;
        for (auto& tr : shifted.transitions) tr.c += offset;
    }
    for (std::size_t t = history; t < total; ++t) {
        const double mean = predict_one(shifted, x, t, nullptr, nullptr);
        const double e = noise(rng);
        x[t] = mean + noise_sd * e;
        if (!(std::abs(x[t]) <= 1e8)) {
            throw Error(ErrorKind::ExplosivePath, "simulated path exceeded 1e8 at step " + std::to_string(t));
        }
    }
    return {x.begin() + static_cast<std::ptrdiff_t>(history + kSimulationBurnIn), x.end()};
}

RegimeModel setar_as_lstar(const RegimeModel& setar, double gamma) {
    if (setar.kind != ModelKind::Setar) throw Error(ErrorKind::InvalidArgument, "expected a SETAR model");
    RegimeModel m;
    m.kind = ModelKind::Lstar;
    m.order = setar.order;
    m.threshold_variable = setar.threshold_variable;
    m.thresholds = setar.thresholds;
    m.start = setar.start;
    m.regimes.push_back(setar.regimes.front());
    for (std::size_t r = 1; r < setar.regimes.size(); ++r) {
        m.regimes.push_back(setar.regimes[r] - setar.regimes[r - 1]);
        m.transitions.push_back({TransitionKind::Logistic, gamma, setar.thresholds[r - 1]});
        m.transition_errors.push_back({});
    }
    return m;
}

}  // namespace tsr
