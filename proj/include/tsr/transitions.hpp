#pragma once

namespace tsr {

enum class TransitionKind { Logistic, Exponential };

struct TransitionSpec {
    TransitionKind kind = TransitionKind::Logistic;
    double gamma = 1.0;  ///< smoothness, > 0
    double c = 0.0;      ///< location, in units of the threshold variable
};

/// 1 / (1 + exp(-gamma (z - c))), evaluated without overflow for large |gamma (z - c)|.
double logistic_transition(double z, double gamma, double c);

/// 1 - exp(-gamma (z - c)^2)
double exponential_transition(double z, double gamma, double c);

double transition_weight(const TransitionSpec& spec, double z);

const char* to_string(TransitionKind kind) noexcept;

}  // namespace tsr
