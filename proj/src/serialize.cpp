#include "tsr/serialize.hpp"

#include "tsr/error.hpp"

#include <cmath>
#include <limits>

namespace tsr {

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
    return a;
}

json vec(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

double read_number(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

Eigen::VectorXd read_vec(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = read_number(j[i]);
    return v;
}

json stat(const TestStatistic& s) { return {{"statistic", number(s.statistic)}, {"p_value", number(s.p_value)}}; }

json ols(const OlsFit& f) {
    return {{"coefficients", vec(f.coefficients)}, {"standard_errors", vec(f.standard_errors)},
            {"rss", number(f.rss)},           {"n_obs", f.n_obs},
            {"n_params", f.n_params}};
}

}  // namespace

json to_json(const RegimeModel& m) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = to_string(m.kind);
    j["order"] = m.order;
    j["threshold_variable"] = {
        {"kind", m.threshold_variable.kind == ThresholdVariable::Kind::Time ? "time" : "lagged_value"},
        {"delay", m.threshold_variable.delay}};
    j["regimes"] = json::array();
    for (const auto& r : m.regimes) j["regimes"].push_back(vec(r));
    j["standard_errors"] = json::array();
    for (const auto& r : m.standard_errors) j["standard_errors"].push_back(vec(r));
    j["thresholds"] = vec(m.thresholds);
    j["transitions"] = json::array();
    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
        const auto& t = m.transitions[i];
        json tj{{"kind", to_string(t.kind)}, {"gamma", number(t.gamma)}, {"c", number(t.c)}};
        if (i < m.transition_errors.size()) {
            tj["gamma_se"] = number(m.transition_errors[i].gamma);
            tj["c_se"] = number(m.transition_errors[i].c);
        }
        j["transitions"].push_back(tj);
    }
    j["rss"] = number(m.rss);
    j["n_params"] = m.n_params();
    j["start"] = m.start;
    j["n_obs"] = m.residuals.size();
    j["regime_proportions"] = vec(m.regime_proportions);
    j["converged"] = m.converged;
    return j;
}

json to_json(const NnetArModel& m) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "nnet";
    j["n_inputs"] = m.n_inputs;
    j["n_hidden"] = m.n_hidden;
    j["weight_count"] = m.weight_count();
    j["output_bias"] = number(m.output_bias);
    j["output_weights"] = vec(m.output_weights);
    j["hidden_biases"] = vec(m.hidden_biases);
    j["hidden_weights"] = json::array();
    for (Eigen::Index i = 0; i < m.hidden_weights.rows(); ++i) {
        j["hidden_weights"].push_back(vec(Eigen::VectorXd(m.hidden_weights.row(i).transpose())));
    }
    j["skip_weights"] = m.skip_weights ? vec(*m.skip_weights) : json(nullptr);
    j["input_center"] = vec(m.input_center);
    j["input_scale"] = vec(m.input_scale);
    return j;
}

json to_json(const FittedModel& model) {
    return std::visit([](const auto& m) { return to_json(m); }, model);
}

json to_json(const OrderSelection& s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["n_obs"] = s.n_obs;
    j["best_aic"] = s.best_aic;
    j["best_bic"] = s.best_bic;
    j["table"] = json::array();
    for (const auto& row : s.table) {
        j["table"].push_back({{"order", row.order}, {"rss", number(row.rss)}, {"aic", number(row.aic)},
                              {"bic", number(row.bic)}});
    }
    return j;
}

json to_json(const LinearityTestReport& r) {
    json j;
    j["variant"] = to_string(r.variant);
    j["ar_order"] = r.ar_order;
    j["significance"] = r.significance;
    j["aux_fit"] = ols(r.aux_fit);
    j["overall_f"] = stat(r.overall_f);
    j["overall_f"]["df"] = {r.overall_df1, r.overall_df2};
    j["nonlinear_terms_f"] = stat(r.nonlinear_terms_f);
    j["nonlinear_terms_f"]["df"] = {r.nonlinear_df1, r.nonlinear_df2};
    j["odd_term_t"] = stat(r.odd_term_t);
    j["odd_term_t"]["df"] = r.aux_fit.df_residual();
    j["verdict"] = to_string(r.verdict);
    return j;
}

json to_json(const PerronDetrendResult& d, const PhillipsPerronResult& pp, double significance) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["specification"] = d.specification == BreakSpecification::TrendBreak ? "trend_break" : "null_break";
    j["break_index"] = d.break_index;
    j["detrend_coefficients"] = vec(d.coefficients);
    j["detrend_standard_errors"] = vec(d.standard_errors);
    j["phillips_perron"] = {{"z_statistic", number(pp.z_statistic)},
                            {"p_value", number(pp.p_value)},
                            {"bandwidth", pp.bandwidth},
                            {"long_run_variance", number(pp.long_run_variance)},
                            {"rho", number(pp.rho)},
                            {"n_obs", pp.n_obs},
                            {"critical_values", {{"1%", pp.critical_values[0]},
                                                 {"5%", pp.critical_values[1]},
                                                 {"10%", pp.critical_values[2]}}}};
    j["significance"] = significance;
    j["reject_unit_root"] = pp.p_value < significance;
    return j;
}

json to_json(const ComparisonReport& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["common_sample"] = r.common_sample;
    j["start"] = r.start;
    j["best_by_aic"] = r.best_by_aic;
    j["best_by_bic"] = r.best_by_bic;
    j["best_by_mape"] = r.best_by_mape;
    j["scores"] = json::array();
    for (const auto& s : r.scores) {
        j["scores"].push_back({{"model_id", s.model_id},
                               {"n_obs", s.n_obs},
                               {"n_params", s.n_params},
                               {"rss", number(s.rss)},
                               {"aic", number(s.aic)},
                               {"bic", number(s.bic)},
                               {"mape", number(s.mape)},
                               {"mape_excluded", s.mape_excluded}});
    }
    return j;
}

FittedModel model_from_json(const json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "nnet") {
            const bool skip = !j.at("skip_weights").is_null();
            NnetArModel m = NnetArModel::zeros(j.at("n_inputs").get<std::size_t>(), j.at("n_hidden").get<std::size_t>(), skip);
            m.output_bias = read_number(j.at("output_bias"));
            m.output_weights = read_vec(j.at("output_weights"));
            m.hidden_biases = read_vec(j.at("hidden_biases"));
            const auto& hw = j.at("hidden_weights");
            for (std::size_t i = 0; i < hw.size(); ++i) {
                m.hidden_weights.row(static_cast<Eigen::Index>(i)) = read_vec(hw[i]).transpose();
            }
            if (skip) m.skip_weights = read_vec(j.at("skip_weights"));
            m.input_center = read_vec(j.at("input_center"));
            m.input_scale = read_vec(j.at("input_scale"));
            return m;
        }
        RegimeModel m;
        if (kind == "ar") m.kind = ModelKind::Ar;
        else if (kind == "setar") m.kind = ModelKind::Setar;
        else if (kind == "lstar") m.kind = ModelKind::Lstar;
        else if (kind == "estar") m.kind = ModelKind::Estar;
        else throw Error(ErrorKind::ParseError, "unknown model kind '" + kind + "'");
        m.order = j.at("order").get<std::size_t>();
        const auto& tv = j.at("threshold_variable");
        m.threshold_variable = tv.at("kind").get<std::string>() == "time"
                                   ? ThresholdVariable::time()
                                   : ThresholdVariable::lagged(tv.at("delay").get<std::size_t>());
        for (const auto& r : j.at("regimes")) m.regimes.push_back(read_vec(r));
        for (const auto& r : j.at("standard_errors")) m.standard_errors.push_back(read_vec(r));
        for (const auto& c : j.at("thresholds")) m.thresholds.push_back(read_number(c));
        for (const auto& t : j.at("transitions")) {
            const TransitionKind tk =
                t.at("kind").get<std::string>() == "logistic" ? TransitionKind::Logistic : TransitionKind::Exponential;
            m.transitions.push_back({tk, read_number(t.at("gamma")), read_number(t.at("c"))});
            m.transition_errors.push_back({t.contains("gamma_se") ? read_number(t["gamma_se"]) : 0.0,
                                           t.contains("c_se") ? read_number(t["c_se"]) : 0.0});
        }
        m.rss = read_number(j.at("rss"));
        m.start = j.at("start").get<std::size_t>();
        for (const auto& p : j.at("regime_proportions")) m.regime_proportions.push_back(read_number(p));
        m.converged = j.value("converged", true);
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("malformed model record: ") + e.what());
    }
}

}  // namespace tsr
