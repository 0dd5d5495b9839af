#ifndef BLSEG_SCHEDULE_HPP
#define BLSEG_SCHEDULE_HPP

#include <string>

#include "blseg/errors.hpp"

namespace blseg {

// Per-epoch weighting of the regional/boundary mix.
//   constant:  (w_R, w_B) = (1, alpha0) forever
//   increase:  (1, min(alpha0 + step*epoch, cap))
//   rebalance: (1 - a, a) with a = min(alpha0 + step*epoch, cap), cap < 1
enum class AlphaStrategy { constant, increase, rebalance };

struct LossWeights {
    double regional = 1.0;
    double boundary = 0.0;
};

struct AlphaSchedule {
    AlphaStrategy strategy = AlphaStrategy::rebalance;
    double alpha0 = 0.01;
    double step = 0.01;
    double cap = 0.99;
    int epoch = 0;  // current epoch, advanced by the trainer

    static AlphaSchedule constant(double alpha);
    static AlphaSchedule increase(double alpha0 = 0.01, double step = 0.01, double cap = 1.0);
    static AlphaSchedule rebalance(double alpha0 = 0.01, double step = 0.01, double cap = 0.99);

    void validate() const;
    double alpha(int epoch) const;
};

AlphaStrategy parse_alpha_strategy(const std::string& name);

LossWeights weights(const AlphaSchedule& sched, int epoch);

} // namespace blseg

#endif // BLSEG_SCHEDULE_HPP
