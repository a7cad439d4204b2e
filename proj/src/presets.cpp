#include "dynsamp/presets.hpp"

#include <array>
#include <random>

#include "dynsamp/error.hpp"

namespace dynsamp::presets {

RealSymmetricFilter five_tap_filter(Index d) {
  if (d < 5) throw ValidationError("five-tap filter needs d >= 5");
  constexpr std::array<double, 3> half{1.0, 0.5, 0.125};
  return RealSymmetricFilter::from_half_taps(half, d);
}

RealSymmetricFilter staircase_filter(Index d) {
  const Index h = d / 2;
  std::vector<double> folded(h + 1);
  for (Index k = 0; k <= h; ++k) folded[k] = 1.0 - static_cast<double>(k) / static_cast<double>(h + 1);
  return RealSymmetricFilter::from_folded_spectrum(folded, d);
}

Signal reference_signal_15() {
  Signal f(15);
  f << 0.2931, 0.3258, 0.04568, 0.3286, 0.2275, 0.0351, 0.1002, 0.1967, 0.3444, 0.34710, 0.0567,
      0.3492, 0.3443, 0.1746, 0.2879;
  return f;
}

SamplingPattern scattered_pattern_18() { return SamplingPattern::from_one_based(18, {1, 5, 7, 10, 13, 15, 18}); }

Signal random_signal(Index d, double norm, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Signal f(d);
  for (Index i = 0; i < d; ++i) f(i) = gauss(rng);
  return f * (norm / f.norm());
}

Signal indicator_signal(Index d, const std::vector<Index>& support) {
  Signal f = Signal::Zero(d);
  for (Index i : support) {
    if (i < 0 || i >= d) throw ValidationError("support index outside the signal");
    f(i) = 1.0;
  }
  return f;
}

}  // namespace dynsamp::presets
