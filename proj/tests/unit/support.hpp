#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace testsupport {

// AR(1) path generated independently of tsr::simulate.
inline std::vector<double> ar1_path(std::size_t n, double intercept, double phi, double sd, std::uint64_t seed,
                                    std::size_t burn = 200) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, sd);
    double x = intercept / (1.0 - phi);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t t = 0; t < n + burn; ++t) {
        x = intercept + phi * x + eps(rng);
        if (t >= burn) out.push_back(x);
    }
    return out;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, 1.0);
    std::vector<double> out(n);
    double x = 0.0;
    for (auto& v : out) v = (x += eps(rng));
    return out;
}

// Two-regime logistic STAR path, X_t = phi0 + phi1 X_{t-1} + G(z_t) (beta0 + beta1 X_{t-1}) + e_t.
// With time_threshold, z_t is the 1-based index in the returned path (burn-in has z <= 0);
// otherwise z_t = X_{t-1}.
struct StarDesign {
    double phi0 = 0.0, phi1 = 0.0, beta0 = 0.0, beta1 = 0.0;
    double gamma = 10.0, c = 0.0;
    bool time_threshold = true;
    bool exponential = false;
};

inline std::vector<double> star_path(const StarDesign& d, std::size_t n, double sd, std::uint64_t seed,
                                     std::size_t burn = 200) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, sd);
    double x = 0.0;
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t t = 0; t < n + burn; ++t) {
        const double z = d.time_threshold ? static_cast<double>(t) - static_cast<double>(burn) + 1.0 : x;
        const double u = d.gamma * (z - d.c);
        const double g = d.exponential ? 1.0 - std::exp(-d.gamma * (z - d.c) * (z - d.c)) : 1.0 / (1.0 + std::exp(-u));
        x = d.phi0 + d.phi1 * x + g * (d.beta0 + d.beta1 * x) + eps(rng);
        if (t >= burn) out.push_back(x);
    }
    return out;
}

// Two-regime SETAR on X_{t-1} with threshold c; the upper regime includes X_{t-1} = c.
inline std::vector<double> setar_path(std::size_t n, double c, const double (&low)[2], const double (&high)[2],
                                      double sd, std::uint64_t seed, std::size_t burn = 200) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, sd);
    double x = 0.0;
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t t = 0; t < n + burn; ++t) {
        const double* r = x >= c ? high : low;
        x = r[0] + r[1] * x + eps(rng);
        if (t >= burn) out.push_back(x);
    }
    return out;
}

// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double eps, int depth = 50) {
    struct Rec {
        const std::function<double(double)>& f;
        double run(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) const {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double diff = left + right - whole;
            if (depth <= 0 || std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
            return run(a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + run(m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
        }
    } rec{f};
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec.run(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps, depth);
}

inline double f_density(double x, double d1, double d2) {
    const double lg = std::lgamma((d1 + d2) / 2) - std::lgamma(d1 / 2) - std::lgamma(d2 / 2);
    return std::exp(lg + d1 / 2 * std::log(d1 / d2) + (d1 / 2 - 1) * std::log(x) -
                    (d1 + d2) / 2 * std::log1p(d1 * x / d2));
}

inline double t_density(double x, double df) {
    const double lg = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * M_PI);
    return std::exp(lg - (df + 1) / 2 * std::log1p(x * x / df));
}

// Upper tail of F by quadrature, substituting x = a / v on v in (0, 1]. Needs d2 > 2 so the
// integrand vanishes at v = 0.
inline double f_tail_quadrature(double a, double d1, double d2) {
    auto g = [&](double v) { return v <= 0.0 ? 0.0 : f_density(a / v, d1, d2) * a / (v * v); };
    return simpson(g, 0.0, 1.0, 1e-14);
}

inline double t_two_sided_quadrature(double t, double df) {
    const double inner = simpson([&](double x) { return t_density(x, df); }, 0.0, std::abs(t), 1e-14);
    return 1.0 - 2.0 * inner;
}

// Gauss-Jordan in long double on the normal equations; returns (coefficients, standard errors).
struct NormalEquations {
    Eigen::VectorXd beta;
    Eigen::VectorXd se;
};

inline NormalEquations normal_equations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const long n = X.rows(), k = X.cols();
    std::vector<std::vector<long double>> a(k, std::vector<long double>(2 * k + 1, 0.0L));
    for (long i = 0; i < k; ++i) {
        for (long j = 0; j < k; ++j) {
            long double s = 0;
            for (long r = 0; r < n; ++r) s += static_cast<long double>(X(r, i)) * X(r, j);
            a[i][j] = s;
        }
        a[i][k + i] = 1.0L;
        long double s = 0;
        for (long r = 0; r < n; ++r) s += static_cast<long double>(X(r, i)) * y(r);
        a[i][2 * k] = s;
    }
    for (long c = 0; c < k; ++c) {
        long piv = c;
        for (long r = c + 1; r < k; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        const long double d = a[c][c];
        for (auto& v : a[c]) v /= d;
        for (long r = 0; r < k; ++r) {
            if (r == c) continue;
            const long double f = a[r][c];
            for (long j = 0; j < 2 * k + 1; ++j) a[r][j] -= f * a[c][j];
        }
    }
    NormalEquations out{Eigen::VectorXd(k), Eigen::VectorXd(k)};
    for (long i = 0; i < k; ++i) out.beta(i) = static_cast<double>(a[i][2 * k]);
    long double rss = 0;
    for (long r = 0; r < n; ++r) {
        long double e = y(r);
        for (long i = 0; i < k; ++i) e -= static_cast<long double>(X(r, i)) * a[i][2 * k];
        rss += e * e;
    }
    const long double s2 = rss / static_cast<long double>(n - k);
    for (long i = 0; i < k; ++i) out.se(i) = static_cast<double>(std::sqrt(s2 * a[i][k + i]));
    return out;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace testsupport
