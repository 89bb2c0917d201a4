#pragma once

#include "tsr/distributions.hpp"
#include "tsr/ols.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tsr {

enum class TaylorVariant { ZeroOrder, FirstOrder };
enum class LinearityVerdict { Linear, Lstar, Estar };

/// Third-order Taylor approximation of the logistic transition around h = 0:
/// h/4 - h^3/48.
constexpr double taylor_transition_approx(double h) noexcept { return h / 4.0 - h * h * h / 48.0; }

struct LinearityOptions {
    std::size_t ar_order = 1;
    double significance = 0.05;
    /// Threshold variable aligned with the regression rows (series.size() - ar_order
    /// values). Empty means calendar time, t = 1..n over the rows.
    std::vector<double> threshold;
    /// Divide the threshold variable by its largest magnitude before taking
    /// powers. Statistics do not depend on it; reported coefficients are
    /// always in the caller's units.
    bool scale_threshold = true;
};

struct LinearityTestReport {
    TaylorVariant variant = TaylorVariant::ZeroOrder;
    std::size_t ar_order = 0;
    double significance = 0.05;
    OlsFit ar_fit;
    /// Linear-model residuals regressed on the full auxiliary design.
    OlsFit aux_fit;
    /// All auxiliary regressors against an intercept-only model, computed in
    /// the response-on-regressors form.
    TestStatistic overall_f;
    std::size_t overall_df1 = 0;
    std::size_t overall_df2 = 0;
    /// Joint nullity of the added Taylor terms.
    TestStatistic nonlinear_terms_f;
    std::size_t nonlinear_df1 = 0;
    std::size_t nonlinear_df2 = 0;
    /// t-test on the first-power term (t, or lag_1 * t for the first-order variant).
    TestStatistic odd_term_t;
    LinearityVerdict verdict = LinearityVerdict::Linear;
};

LinearityTestReport terasvirta_zero_order(std::span<const double> series, const LinearityOptions& options = {});
LinearityTestReport terasvirta_first_order(std::span<const double> series, const LinearityOptions& options = {});

const char* to_string(LinearityVerdict verdict) noexcept;
const char* to_string(TaylorVariant variant) noexcept;

}  // namespace tsr
