// Acceptance run: one PASS/FAIL/SKIP line per criterion, exit status 1 if any FAIL.
//
// Set TSREGIME_REFERENCE_PRICES to a date,close CSV to enable the ranking
// check (criterion 9); TSREGIME_REFERENCE_BREAK overrides its break date.

#include "../unit/support.hpp"

#include "tsr/csv.hpp"
#include "tsr/linearity.hpp"
#include "tsr/neural_ar.hpp"
#include "tsr/ols.hpp"
#include "tsr/pipeline.hpp"
#include "tsr/regime_models.hpp"
#include "tsr/series.hpp"
#include "tsr/stationarity.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace tsr;
namespace fs = std::filesystem;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
    Outcome outcome;
    std::string detail;
};

int failures = 0;

void run(int id, const char* name, double limit_seconds, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{Outcome::Fail, ""};
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (v.outcome == Outcome::Pass && secs > limit_seconds) {
        v = {Outcome::Fail, v.detail + "; over the time limit"};
    }
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Skip ? "SKIP" : "FAIL";
    if (v.outcome == Outcome::Fail) ++failures;
    std::printf("%s %2d %-28s %s [%.2fs / %.0fs]\n", tag, id, name, v.detail.c_str(), secs, limit_seconds);
    std::fflush(stdout);
}

Verdict pass_if(bool ok, std::string detail) { return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)}; }

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

fs::path write_prices(const fs::path& path, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, 0.02);
    std::ofstream out(path);
    out << "date,close\n";
    auto day = std::chrono::sys_days{std::chrono::year{2005} / 1 / 3};
    double price = 40.0;
    char buf[64];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", price);
        out << format_iso_date(Date{day}) << ',' << buf << '\n';
        price *= std::exp(eps(rng));
        day += std::chrono::days{1};
    }
    return path;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict ols_oracle() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> kd(1, 5);
    std::normal_distribution<double> z;
    double worst = 0.0;
    for (int design = 0; design < 100; ++design) {
        const int k = kd(rng);
        const int n = std::uniform_int_distribution<int>(k + 5, 50)(rng);
        Eigen::MatrixXd X(n, k);
        Eigen::VectorXd y(n);
        for (int r = 0; r < n; ++r) {
            X(r, 0) = 1.0;
            for (int c = 1; c < k; ++c) X(r, c) = z(rng);
            y(r) = z(rng);
        }
        const auto fit = ols_fit(X, y);
        const auto oracle = testsupport::normal_equations(X, y);
        for (int j = 0; j < k; ++j) {
            const double scale = std::max(std::abs(oracle.beta(j)), oracle.se(j));
            worst = std::max(worst, std::abs(fit.coefficients(j) - oracle.beta(j)) / scale);
            worst = std::max(worst, rel(fit.standard_errors(j), oracle.se(j)));
        }
    }
    return pass_if(worst < 1e-8, fmt("max relative error %.2e (limit 1e-8)", worst));
}

Verdict setar_recovery() {
    const double low[2] = {0.0, 0.5}, high[2] = {0.0, -0.5};
    int ok = 0, threshold_ok = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto x = testsupport::setar_path(500, 0.0, low, high, 0.1, seed);
        SetarOptions o;
        o.threshold_variable = ThresholdVariable::lagged(1);
        const auto m = fit_setar(x, o);
        const bool c_ok = std::abs(m.thresholds[0]) <= 0.1;
        bool coef_ok = true;
        for (int j = 0; j < 2; ++j) {
            coef_ok = coef_ok && std::abs(m.regimes[0](j) - low[j]) <= 0.1 && std::abs(m.regimes[1](j) - high[j]) <= 0.1;
        }
        threshold_ok += c_ok;
        ok += c_ok && coef_ok;
    }
    return pass_if(ok >= 95, fmt("%d/100 seeds (threshold alone %d/100; need 95)", ok, threshold_ok));
}

Verdict lstar_recovery() {
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        testsupport::StarDesign d;
        d.phi0 = 1.0;
        d.phi1 = 0.5;
        d.beta0 = -2.0;
        d.beta1 = 0.0;
        d.gamma = 10.0;
        d.c = 0.0;
        d.time_threshold = false;
        const auto x = testsupport::star_path(d, 500, 0.5, seed);
        StarOptions o;
        o.threshold_variable = ThresholdVariable::lagged(1);
        const auto m = fit_lstar(x, o);
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end() - 1);
        const double span = *hi - *lo;
        const auto& t = m.transitions[0];
        ok += std::abs(t.c - d.c) <= 0.05 * span && t.gamma >= d.gamma / 2 && t.gamma <= d.gamma * 2;
    }
    return pass_if(ok >= 90, fmt("%d/100 seeds (need 90)", ok));
}

Verdict linearity_size_power() {
    int size_rej = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto x = testsupport::ar1_path(440, 0.1, 0.5, 0.05, 50000 + seed);
        size_rej += terasvirta_first_order(x).nonlinear_terms_f.p_value < 0.05;
    }
    int power_rej = 0, lstar = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto x = testsupport::star_path({1.0, 0.5, 0.0, -0.3, 10.0, 220.0}, 440, 0.2, 60000 + seed);
        const auto r = terasvirta_first_order(x);
        power_rej += r.verdict != LinearityVerdict::Linear;
        lstar += r.verdict == LinearityVerdict::Lstar;
    }
    const double size = size_rej / 200.0;
    const bool ok = size >= 0.02 && size <= 0.10 && power_rej >= 70 && 2 * lstar > power_rej;
    return pass_if(ok, fmt("size %.1f%% (2-10%%), power %d/100 (>=70), lstar %d of %d rejections", 100 * size,
                           power_rej, lstar, power_rej));
}

Verdict unit_root() {
    int rw_accept = 0, ar_reject = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        rw_accept += phillips_perron(testsupport::random_walk(500, 70000 + seed)).p_value >= 0.05;
        ar_reject += phillips_perron(testsupport::ar1_path(500, 0.0, 0.5, 1.0, 80000 + seed)).p_value < 0.05;
    }
    return pass_if(rw_accept >= 90 && ar_reject >= 80,
                   fmt("random walk accepted %d/100 (>=90), AR(0.5) rejected %d/100 (>=80)", rw_accept, ar_reject));
}

Verdict gradient_check() {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> md(1, 4), dd(1, 5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> z;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = md(rng), d = dd(rng);
        NnetArModel model = NnetArModel::zeros(m, d, trial % 3 == 0);
        Eigen::VectorXd w(static_cast<Eigen::Index>(model.weight_count()));
        for (auto& v : w) v = u(rng);
        model.unpack(w);
        Eigen::MatrixXd lags(40, static_cast<Eigen::Index>(m));
        Eigen::VectorXd targets(40);
        for (auto& v : lags.reshaped()) v = z(rng);
        for (auto& v : targets) v = z(rng);

        const Eigen::VectorXd g = gradient(model, lags, targets).pack();
        Eigen::VectorXd fd(w.size());
        const double h = 1e-5;
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            NnetArModel plus = model, minus = model;
            Eigen::VectorXd wp = w, wm = w;
            wp(i) += h;
            wm(i) -= h;
            plus.unpack(wp);
            minus.unpack(wm);
            fd(i) = (half_rss(plus, lags, targets) - half_rss(minus, lags, targets)) / (2 * h);
        }
        worst = std::max(worst, (g - fd).norm() / g.norm());
    }
    return pass_if(worst < 1e-6, fmt("max relative error %.2e over 50 configurations (limit 1e-6)", worst));
}

Verdict structural_arithmetic() {
    const fs::path dir = fs::temp_directory_path() / "tsregime_acceptance_7";
    fs::create_directories(dir);
    const auto prices = ingest(write_prices(dir / "prices.csv", 500, 7));
    const auto returns = log_returns(prices);
    const auto vol = realized_volatility(returns, 60);
    const auto zero = terasvirta_zero_order(vol.values);
    const auto first = terasvirta_first_order(vol.values);
    const bool ok = returns.values.size() == 499 && vol.values.size() == 440 && zero.overall_df1 == 4 &&
                    zero.overall_df2 == 434 && zero.nonlinear_df1 == 3 && zero.nonlinear_df2 == 434 &&
                    first.overall_df1 == 4 && first.overall_df2 == 434 && first.nonlinear_df1 == 3 &&
                    first.nonlinear_df2 == 434;
    return pass_if(ok, fmt("returns %zu, volatility %zu, F df (%zu, %zu) and (%zu, %zu)", returns.values.size(),
                           vol.values.size(), first.overall_df1, first.overall_df2, first.nonlinear_df1,
                           first.nonlinear_df2));
}

Verdict lstar_limit() {
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = testsupport::star_path({1.0, 0.5, 0.5, -0.3, 10.0, 150.0}, 300, 0.2, 90000 + seed);
        const auto setar = fit_setar(x);
        const auto steep = setar_as_lstar(setar, 1e4);
        const auto a = one_step_fitted(setar, x);
        const auto b = one_step_fitted(steep, x);
        const double c = setar.thresholds[0];
        for (std::size_t i = 0; i < a.fitted.size(); ++i) {
            const double zt = static_cast<double>(a.start + i + 1);
            if (std::abs(zt - c) <= 1.0) continue;
            worst = std::max(worst, std::abs(a.fitted[i] - b.fitted[i]));
            ++checked;
        }
    }
    return pass_if(worst <= 1e-4 && checked > 0, fmt("max |difference| %.2e over %zu points (limit 1e-4)", worst, checked));
}

Verdict ranking_reproduction() {
    const char* path = std::getenv("TSREGIME_REFERENCE_PRICES");
    if (!path || !*path) return {Outcome::Skip, "set TSREGIME_REFERENCE_PRICES to a date,close CSV to run"};
    const char* brk = std::getenv("TSREGIME_REFERENCE_BREAK");
    PipelineConfig config;
    config.input_path = path;
    config.break_date = brk && *brk ? brk : "2006-12-12";
    config.models = default_models();
    config.output_dir = fs::temp_directory_path() / "tsregime_acceptance_9";
    const auto result = run_pipeline(config);
    double linear_mape = -1.0;
    for (const auto& s : result.comparison.scores) {
        if (s.model_id == "linear") linear_mape = s.mape;
    }
    const auto& r = result.comparison;
    const bool ok = r.best_by_aic == "setar3" && r.best_by_bic == "setar3" && std::abs(linear_mape - 3.05) <= 1.0;
    return pass_if(ok, fmt("best AIC %s, best BIC %s, linear MAPE %.2f%% (target 3.05 +/- 1)", r.best_by_aic.c_str(),
                           r.best_by_bic.c_str(), linear_mape));
}

Verdict determinism() {
    const fs::path dir = fs::temp_directory_path() / "tsregime_acceptance_10";
    fs::remove_all(dir);
    fs::create_directories(dir);
    PipelineConfig config;
    config.input_path = write_prices(dir / "prices.csv", 500, 10);
    config.break_index = 250;
    config.models = default_models();
    config.output_dir = dir / "a";
    const auto first = run_pipeline(config);
    config.output_dir = dir / "b";
    run_pipeline(config);
    std::size_t compared = 0, differing = 0;
    for (const auto& p : first.artifacts) {
        if (p.extension() != ".json") continue;
        ++compared;
        differing += slurp(p) != slurp(dir / "b" / p.filename());
    }
    return pass_if(differing == 0 && compared > 0, fmt("%zu JSON artifacts, %zu differ", compared, differing));
}

}  // namespace

int main() {
    run(1, "OLS normal-equations oracle", 5, ols_oracle);
    run(2, "SETAR recovery", 60, setar_recovery);
    run(3, "LSTAR recovery", 300, lstar_recovery);
    run(4, "linearity size and power", 120, linearity_size_power);
    run(5, "Phillips-Perron behaviour", 60, unit_root);
    run(6, "network gradient check", 10, gradient_check);
    run(7, "series length arithmetic", 5, structural_arithmetic);
    run(8, "steep LSTAR limit", 10, lstar_limit);
    run(9, "ranking on reference prices", 600, ranking_reproduction);
    run(10, "pipeline determinism", 300, determinism);
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
