#pragma once

#include "tsr/neural_ar.hpp"
#include "tsr/regime_models.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tsr {

/// n ln(rss / n) + 2k. Throws ZeroRss when rss == 0.
double aic(double rss, std::size_t n, std::size_t k);
/// n ln(rss / n) + k ln(n). Throws ZeroRss when rss == 0.
double bic(double rss, std::size_t n, std::size_t k);

struct MapeResult {
    double percent = 0.0;
    std::size_t excluded = 0;  ///< points skipped because actual == 0
};

/// 100 * mean |actual - fitted| / |actual| over points with actual != 0.
MapeResult mape(std::span<const double> actual, std::span<const double> fitted);

using FittedModel = std::variant<RegimeModel, NnetArModel>;

struct Candidate {
    std::string id;
    FittedModel model;
};

std::size_t required_history(const FittedModel& model);
std::size_t n_params(const FittedModel& model);
std::vector<double> predict(const FittedModel& model, std::span<const double> series, std::size_t start);

struct ModelScore {
    std::string model_id;
    std::size_t n_obs = 0;
    std::size_t n_params = 0;
    double rss = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double mape = 0.0;
    std::size_t mape_excluded = 0;
};

struct ComparisonReport {
    std::vector<ModelScore> scores;
    std::string best_by_aic;
    std::string best_by_bic;
    std::string best_by_mape;
    std::size_t common_sample = 0;
    std::size_t start = 0;
};

/// Scores one candidate on observations start..N-1.
ModelScore score_candidate(const Candidate& candidate, std::span<const double> series, std::size_t start);

/// Rescores every candidate on the largest sample all of them can predict
/// (dropping the longest required history). Ties go to the earlier candidate.
ComparisonReport compare(const std::vector<Candidate>& candidates, std::span<const double> series);

/// Aligned plain-text table: model, k, RSS, AIC, BIC, MAPE, plus best-model lines.
std::string format_comparison_table(const ComparisonReport& report);

}  // namespace tsr
