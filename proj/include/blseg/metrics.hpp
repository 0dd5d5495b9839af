#ifndef BLSEG_METRICS_HPP
#define BLSEG_METRICS_HPP

#include <vector>

#include "blseg/grid.hpp"

namespace blseg {

// Dice similarity coefficient 2|P^G| / (|P|+|G|). Both masks empty -> 1,
// exactly one empty -> 0.
double dsc(const BinaryMask& pred, const BinaryMask& g);

// Linear-interpolated percentile of a sorted sample: with n values and
// h = (n-1)*p/100, returns v[floor(h)] + frac(h)*(v[floor(h)+1] - v[floor(h)]).
double percentile_linear(std::vector<double> values, double p);

// 95th-percentile symmetric boundary distance: max of the two directed
// percentiles over {dist(b, boundary(other)) : b in boundary(self)},
// distances between pixel centers in mm. If either boundary set is empty
// the physical pixel-center diagonal of the domain is returned and
// *sentinel is set.
double hd95(const BinaryMask& pred, const BinaryMask& g, bool* sentinel = nullptr);

// Per-case metric collection for one run's validation set.
struct EvalReport {
    std::vector<double> dsc_cases;
    std::vector<double> hd95_cases;
    std::vector<std::uint8_t> hd95_sentinel;
    double dsc_mean = 0.0;
    double hd95_mean = 0.0;

    void add(double dsc_value, double hd95_value, bool sentinel);
    void finalize();
};

// Mean/std over independent runs (Table-2 style reporting). Uses the
// population standard deviation.
struct RunSummary {
    double mean = 0.0;
    double stddev = 0.0;
};

RunSummary summarize_runs(const std::vector<double>& per_run_values);

} // namespace blseg

#endif // BLSEG_METRICS_HPP
