#include "blseg/schedule.hpp"

#include <algorithm>

namespace blseg {

AlphaSchedule AlphaSchedule::constant(double alpha) {
    return AlphaSchedule{AlphaStrategy::constant, alpha, 0.0, alpha, 0};
}

AlphaSchedule AlphaSchedule::increase(double alpha0, double step, double cap) {
    return AlphaSchedule{AlphaStrategy::increase, alpha0, step, cap, 0};
}

AlphaSchedule AlphaSchedule::rebalance(double alpha0, double step, double cap) {
    return AlphaSchedule{AlphaStrategy::rebalance, alpha0, step, cap, 0};
}

void AlphaSchedule::validate() const {
    if (alpha0 < 0.0) throw InvalidSchedule("alpha0 must be >= 0");
    if (step < 0.0) throw InvalidSchedule("step must be >= 0");
    if (strategy == AlphaStrategy::rebalance) {
        if (!(cap < 1.0)) throw InvalidSchedule("rebalance cap must stay below 1 so w_R never reaches 0");
        if (!(alpha0 < 1.0)) throw InvalidSchedule("rebalance alpha0 must stay below 1");
    }
}

double AlphaSchedule::alpha(int e) const {
    if (strategy == AlphaStrategy::constant) return alpha0;
    return std::min(alpha0 + step * e, cap);
}

AlphaStrategy parse_alpha_strategy(const std::string& name) {
    if (name == "constant") return AlphaStrategy::constant;
    if (name == "increase") return AlphaStrategy::increase;
    if (name == "rebalance") return AlphaStrategy::rebalance;
    throw InvalidSchedule("unknown alpha strategy '" + name + "'");
}

LossWeights weights(const AlphaSchedule& sched, int epoch) {
    sched.validate();
    if (epoch < 0) throw InvalidSchedule("epoch must be >= 0");
    const double a = sched.alpha(epoch);
    switch (sched.strategy) {
        case AlphaStrategy::constant:
        case AlphaStrategy::increase:
            return LossWeights{1.0, a};
        case AlphaStrategy::rebalance:
            return LossWeights{1.0 - a, a};
    }
    throw InvalidSchedule("unknown strategy");
}

} // namespace blseg
