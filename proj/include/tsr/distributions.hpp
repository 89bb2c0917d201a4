#pragma once

#include <cstddef>

namespace tsr {

struct TestStatistic {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Upper tail P(F > f) of the F(d1, d2) distribution.
double f_survival(double f, double d1, double d2);
/// CDF of Student's t with `df` degrees of freedom.
double t_cdf(double t, double df);

/// Nested-model F test: F = ((rss_r - rss_u) / q) / (rss_u / df).
TestStatistic f_test(double rss_restricted, double rss_unrestricted, std::size_t n_restrictions,
                     std::size_t df_denominator);

/// Two-sided p-value 2 * (1 - CDF_t(|t|, df)), via the regularized incomplete beta.
double t_pvalue(double statistic, std::size_t df);

}  // namespace tsr
