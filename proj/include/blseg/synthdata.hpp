#ifndef BLSEG_SYNTHDATA_HPP
#define BLSEG_SYNTHDATA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "blseg/grid.hpp"

namespace blseg {

// Deterministic generator of highly unbalanced segmentation tasks: tiny
// bright lesions on a smooth noisy background. Every sample is fully
// determined by (seed, index), so generation order and parallelism do
// not matter.
struct SynthConfig {
    Shape shape{64, 64};
    Spacing spacing{1.0, 1.0};
    int n_lesions_min = 1;
    int n_lesions_max = 3;
    double lesion_radius_min = 1.5;  // px
    double lesion_radius_max = 3.5;  // px
    double target_foreground_fraction = 0.003;
    double contrast = 0.8;           // additive lesion intensity before normalization
    double noise_std = 0.1;
    double background_amplitude = 0.2;
    double empty_fraction = 0.0;     // fraction of samples with an empty mask
    double train_fraction = 0.8;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Sample {
    ScalarGrid image;  // normalized to [0,1]
    BinaryMask mask;
    bool empty = false;
};

struct Dataset {
    std::vector<Sample> train;
    std::vector<Sample> val;
    SynthConfig config;
};

Sample generate_sample(const SynthConfig& cfg, std::uint64_t index);

// First ceil(train_fraction * n) samples are the training split, the rest
// validation; split membership is a pure function of the index.
Dataset generate(const SynthConfig& cfg, int n_samples);

// Writes images/masks in the portable grid format plus manifest.csv with
// columns case_id,split,image,mask,empty.
void write_dataset(const Dataset& ds, const std::string& dir);
Dataset read_dataset(const std::string& dir);

} // namespace blseg

#endif // BLSEG_SYNTHDATA_HPP
