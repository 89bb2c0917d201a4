#include "tsr/transitions.hpp"

#include <cmath>

namespace tsr {

double logistic_transition(double z, double gamma, double c) {
    const double x = gamma * (z - c);
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double exponential_transition(double z, double gamma, double c) {
    const double d = z - c;
    return -std::expm1(-gamma * d * d);
}

double transition_weight(const TransitionSpec& spec, double z) {
    return spec.kind == TransitionKind::Logistic ? logistic_transition(z, spec.gamma, spec.c)
                                                 : exponential_transition(z, spec.gamma, spec.c);
}

const char* to_string(TransitionKind kind) noexcept {
    return kind == TransitionKind::Logistic ? "logistic" : "exponential";
}

}  // namespace tsr
