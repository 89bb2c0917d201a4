#include "tsr/linearity.hpp"

#include "tsr/error.hpp"
#include "tsr/series.hpp"

#include <cmath>
#include <string>

namespace tsr {

namespace {

LinearityTestReport run_test(std::span<const double> series, const LinearityOptions& options,
                             TaylorVariant variant) {
    const std::size_t p = options.ar_order;
    if (series.size() <= p + 4) {
        throw Error(ErrorKind::SeriesTooShort, "linearity test needs more than ar_order + 4 observations");
    }
    if (!(options.significance > 0.0 && options.significance < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "significance must lie in (0, 1)");
    }
    const LagDesign base = lag_design(series, p);
    const Eigen::Index n = base.design.rows();
    const auto k0 = base.design.cols();

    Eigen::VectorXd z(n);
    if (options.threshold.empty()) {
        for (Eigen::Index r = 0; r < n; ++r) z(r) = static_cast<double>(r + 1);
    } else {
        if (options.threshold.size() != static_cast<std::size_t>(n)) {
            throw Error(ErrorKind::DimensionMismatch, "threshold variable must have one value per regression row");
        }
        for (Eigen::Index r = 0; r < n; ++r) z(r) = options.threshold[static_cast<std::size_t>(r)];
    }
    const double zscale = options.scale_threshold ? z.cwiseAbs().maxCoeff() : 1.0;
    if (!(zscale > 0.0)) throw Error(ErrorKind::RankDeficient, "threshold variable is identically zero");
    const Eigen::VectorXd zs = z / zscale;

    // Added Taylor terms, with the power of z each one carries.
    std::vector<Eigen::VectorXd> extra;
    std::vector<int> powers;
    if (variant == TaylorVariant::ZeroOrder) {
        for (int power = 1; power <= 3; ++power) {
            extra.push_back(zs.array().pow(power));
            powers.push_back(power);
        }
    } else {
        for (std::size_t lag = 1; lag <= p; ++lag) {
            for (int power = 1; power <= 3; ++power) {
                extra.push_back(base.design.col(static_cast<Eigen::Index>(lag)).array() * zs.array().pow(power));
                powers.push_back(power);
            }
        }
        if (extra.empty()) {
            throw Error(ErrorKind::InvalidArgument, "first-order test needs ar_order >= 1");
        }
    }
    const auto q = static_cast<Eigen::Index>(extra.size());
    Eigen::MatrixXd aux(n, k0 + q);
    aux.leftCols(k0) = base.design;
    for (Eigen::Index j = 0; j < q; ++j) aux.col(k0 + j) = extra[static_cast<std::size_t>(j)];

    LinearityTestReport out;
    out.variant = variant;
    out.ar_order = p;
    out.significance = options.significance;
    out.ar_fit = ols_fit(base.design, base.response);
    out.aux_fit = ols_fit(aux, out.ar_fit.residuals);
    for (Eigen::Index j = 0; j < q; ++j) {
        const double unit = std::pow(zscale, powers[static_cast<std::size_t>(j)]);
        out.aux_fit.coefficients(k0 + j) /= unit;
        out.aux_fit.standard_errors(k0 + j) /= unit;
    }

    const std::size_t df = out.aux_fit.df_residual();
    const double rss_aux = out.aux_fit.rss;
    out.nonlinear_df1 = static_cast<std::size_t>(q);
    out.nonlinear_df2 = df;
    out.nonlinear_terms_f = f_test(std::max(out.ar_fit.rss, rss_aux), rss_aux, out.nonlinear_df1, df);

    const double tss = (base.response.array() - base.response.mean()).square().sum();
    out.overall_df1 = static_cast<std::size_t>(aux.cols() - 1);
    out.overall_df2 = df;
    out.overall_f = f_test(std::max(tss, rss_aux), rss_aux, out.overall_df1, df);

    const Eigen::Index odd = k0;  // first added column: t, or lag_1 * t
    out.odd_term_t.statistic = out.aux_fit.coefficients(odd) / out.aux_fit.standard_errors(odd);
    out.odd_term_t.p_value = t_pvalue(out.odd_term_t.statistic, df);

    if (out.nonlinear_terms_f.p_value >= options.significance) {
        out.verdict = LinearityVerdict::Linear;
    } else {
        out.verdict = out.odd_term_t.p_value < options.significance ? LinearityVerdict::Lstar
                                                                    : LinearityVerdict::Estar;
    }
    return out;
}

}  // namespace

LinearityTestReport terasvirta_zero_order(std::span<const double> series, const LinearityOptions& options) {
    return run_test(series, options, TaylorVariant::ZeroOrder);
}

LinearityTestReport terasvirta_first_order(std::span<const double> series, const LinearityOptions& options) {
    return run_test(series, options, TaylorVariant::FirstOrder);
}

const char* to_string(LinearityVerdict verdict) noexcept {
    switch (verdict) {
        case LinearityVerdict::Linear: return "linear";
        case LinearityVerdict::Lstar: return "lstar";
        case LinearityVerdict::Estar: return "estar";
    }
    return "linear";
}

const char* to_string(TaylorVariant variant) noexcept {
    return variant == TaylorVariant::ZeroOrder ? "zero_order" : "first_order";
}

}  // namespace tsr
