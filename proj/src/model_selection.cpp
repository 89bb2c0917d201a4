#include "tsr/model_selection.hpp"

#include "tsr/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <type_traits>

namespace tsr {

namespace {

double concentrated_loglik_term(double rss, std::size_t n, std::size_t k) {
    if (n == 0 || n <= k) throw Error(ErrorKind::InvalidArgument, "information criteria need n > k");
    if (rss == 0.0) throw Error(ErrorKind::ZeroRss, "criteria undefined for a perfect fit");
    if (!(rss > 0.0)) throw Error(ErrorKind::InvalidArgument, "rss must be positive");
    const double nd = static_cast<double>(n);
    return nd * std::log(rss / nd);
}

}  // namespace

double aic(double rss, std::size_t n, std::size_t k) {
    return concentrated_loglik_term(rss, n, k) + 2.0 * static_cast<double>(k);
}

double bic(double rss, std::size_t n, std::size_t k) {
    return concentrated_loglik_term(rss, n, k) + static_cast<double>(k) * std::log(static_cast<double>(n));
}

MapeResult mape(std::span<const double> actual, std::span<const double> fitted) {
    if (actual.size() != fitted.size() || actual.empty()) {
        throw Error(ErrorKind::DimensionMismatch, "mape needs equal, non-empty inputs");
    }
    MapeResult out;
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) {
            ++out.excluded;
            continue;
        }
        sum += std::abs(actual[i] - fitted[i]) / std::abs(actual[i]);
        ++used;
    }
    if (used == 0) throw Error(ErrorKind::AllZeroActuals, "every actual value is zero");
    out.percent = 100.0 * sum / static_cast<double>(used);
    return out;
}

std::size_t required_history(const FittedModel& model) {
    return std::visit(
        [](const auto& m) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, RegimeModel>) {
                return m.required_history();
            } else {
                return m.n_inputs;
            }
        },
        model);
}

std::size_t n_params(const FittedModel& model) {
    return std::visit(
        [](const auto& m) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, RegimeModel>) {
                return m.n_params();
            } else {
                return m.weight_count();
            }
        },
        model);
}

std::vector<double> predict(const FittedModel& model, std::span<const double> series, std::size_t start) {
    if (const auto* rm = std::get_if<RegimeModel>(&model)) {
        return one_step_fitted(*rm, series, start).fitted;
    }
    const auto& net = std::get<NnetArModel>(model);
    std::vector<double> out;
    out.reserve(series.size() - start);
    for (std::size_t t = start; t < series.size(); ++t) {
        std::vector<double> lags(net.n_inputs);
        for (std::size_t i = 0; i < net.n_inputs; ++i) lags[i] = series[t - 1 - i];
        out.push_back(forward(net, lags));
    }
    return out;
}

ModelScore score_candidate(const Candidate& candidate, std::span<const double> series, std::size_t start) {
    if (start < required_history(candidate.model) || start >= series.size()) {
        throw Error(ErrorKind::SeriesTooShort, "cannot score " + candidate.id + " from index " + std::to_string(start));
    }
    const std::vector<double> fitted = predict(candidate.model, series, start);
    const std::span<const double> actual = series.subspan(start);
    ModelScore s;
    s.model_id = candidate.id;
    s.n_obs = actual.size();
    s.n_params = n_params(candidate.model);
    for (std::size_t i = 0; i < fitted.size(); ++i) s.rss += (actual[i] - fitted[i]) * (actual[i] - fitted[i]);
    s.aic = aic(s.rss, s.n_obs, s.n_params);
    s.bic = bic(s.rss, s.n_obs, s.n_params);
    const MapeResult m = mape(actual, fitted);
    s.mape = m.percent;
    s.mape_excluded = m.excluded;
    return s;
}

ComparisonReport compare(const std::vector<Candidate>& candidates, std::span<const double> series) {
    if (candidates.size() < 2) throw Error(ErrorKind::InvalidArgument, "compare needs at least 2 candidates");
    ComparisonReport report;
    for (const auto& c : candidates) report.start = std::max(report.start, required_history(c.model));
    if (report.start >= series.size()) throw Error(ErrorKind::SeriesTooShort, "series shorter than the longest lag history");
    report.common_sample = series.size() - report.start;

    for (const auto& c : candidates) report.scores.push_back(score_candidate(c, series, report.start));
    auto best = [&](auto key) {
        std::size_t b = 0;
        for (std::size_t i = 1; i < report.scores.size(); ++i) {
            if (key(report.scores[i]) < key(report.scores[b])) b = i;
        }
        return report.scores[b].model_id;
    };
    report.best_by_aic = best([](const ModelScore& s) { return s.aic; });
    report.best_by_bic = best([](const ModelScore& s) { return s.bic; });
    report.best_by_mape = best([](const ModelScore& s) { return s.mape; });
    return report;
}

std::string format_comparison_table(const ComparisonReport& report) {
    std::size_t width = 5;
    for (const auto& s : report.scores) width = std::max(width, s.model_id.size());
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-*s %4s %14s %12s %12s %8s\n", static_cast<int>(width), "Model", "k",
                  "RSS", "AIC", "BIC", "MAPE");
    out << line;
    for (const auto& s : report.scores) {
        std::snprintf(line, sizeof line, "%-*s %4zu %14.6e %12.2f %12.2f %7.2f%%\n", static_cast<int>(width),
                      s.model_id.c_str(), s.n_params, s.rss, s.aic, s.bic, s.mape);
        out << line;
    }
    out << "\ncommon sample: " << report.common_sample << " observations\n";
    out << "best by AIC:  " << report.best_by_aic << '\n';
    out << "best by BIC:  " << report.best_by_bic << '\n';
    out << "best by MAPE: " << report.best_by_mape << '\n';
    return out.str();
}

}  // namespace tsr
