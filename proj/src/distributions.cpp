#include "tsr/distributions.hpp"

#include "tsr/error.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <limits>

namespace tsr {

double f_survival(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw Error(ErrorKind::InvalidDf, "F degrees of freedom must be positive");
    if (!(f > 0.0)) return 1.0;
    if (std::isinf(f)) return 0.0;
    // P(F > f) = I_x(d2/2, d1/2) with x = d2 / (d2 + d1 f)
    const double x = d2 / (d2 + d1 * f);
    return boost::math::ibeta(0.5 * d2, 0.5 * d1, x);
}

double t_cdf(double t, double df) {
    if (!(df > 0.0)) throw Error(ErrorKind::InvalidDf, "t degrees of freedom must be positive");
    if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
    const double x = df / (df + t * t);
    const double tail = 0.5 * boost::math::ibeta(0.5 * df, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

TestStatistic f_test(double rss_restricted, double rss_unrestricted, std::size_t n_restrictions,
                     std::size_t df_denominator) {
    if (n_restrictions < 1 || df_denominator < 1) {
        throw Error(ErrorKind::InvalidDf, "f_test needs q >= 1 and df >= 1");
    }
    if (!(rss_unrestricted >= 0.0) || rss_restricted < rss_unrestricted) {
        throw Error(ErrorKind::InvalidArgument, "f_test needs rss_restricted >= rss_unrestricted >= 0");
    }
    const double q = static_cast<double>(n_restrictions);
    const double df = static_cast<double>(df_denominator);
    TestStatistic out;
    if (rss_restricted == rss_unrestricted) {
        out.statistic = 0.0;
        out.p_value = 1.0;
        return out;
    }
    out.statistic = rss_unrestricted > 0.0
                        ? ((rss_restricted - rss_unrestricted) / q) / (rss_unrestricted / df)
                        : std::numeric_limits<double>::infinity();
    out.p_value = f_survival(out.statistic, q, df);
    return out;
}

double t_pvalue(double statistic, std::size_t df) {
    if (df < 1) throw Error(ErrorKind::InvalidDf, "t_pvalue needs df >= 1");
    if (std::isnan(statistic)) return std::numeric_limits<double>::quiet_NaN();
    const double d = static_cast<double>(df);
    const double x = d / (d + statistic * statistic);
    return boost::math::ibeta(0.5 * d, 0.5, x);
}

}  // namespace tsr
