#pragma once

#include <cstdint>
#include <vector>

#include "dynsamp/core.hpp"

namespace dynsamp::presets {

/// Circulant smoothing filter with taps (1, 1/2, 1/8) at offsets 0, +-1, +-2.
RealSymmetricFilter five_tap_filter(Index d);

/// Filter whose spectrum decreases in equal steps over the folded
/// frequencies: 1 - k / (floor(d/2) + 1), k = 0 .. floor(d/2). For d = 15
/// this is {1, 7/8, ..., 1/8}.
RealSymmetricFilter staircase_filter(Index d);

/// Fixed normalized 15-point initial state used by the denoising and
/// spectrum experiments.
Signal reference_signal_15();

/// Non-uniform 7-point pattern on d = 18, 1-based {1, 5, 7, 10, 13, 15, 18}.
SamplingPattern scattered_pattern_18();

/// Gaussian random signal rescaled to the requested 2-norm.
Signal random_signal(Index d, double norm, std::uint64_t seed);

/// Ones on the given 0-based support, zeros elsewhere.
Signal indicator_signal(Index d, const std::vector<Index>& support);

}  // namespace dynsamp::presets
