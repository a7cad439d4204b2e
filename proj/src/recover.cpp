#include "dynsamp/recover.hpp"

namespace dynsamp {

DynamicalSamplingSolver::DynamicalSamplingSolver(EvolutionOperator op, SamplingPattern pattern)
    : op_(std::move(op)), pattern_(std::move(pattern)), rows_(pattern_.selector()), lsq_(op_.dim()) {
  if (pattern_.dim() != op_.dim()) throw ValidationError("pattern/operator dimension mismatch");
  if (pattern_.empty()) throw ValidationError("sampling pattern is empty");
}

void DynamicalSamplingSolver::absorb(const Vector& samples) {
  if (samples.size() != pattern_.size()) {
    throw ValidationError("expected " + std::to_string(pattern_.size()) + " samples per level, got " +
                          std::to_string(samples.size()));
  }
  lsq_.update(rows_, samples);
  rows_ = op_.apply_to_rows(rows_);
  ++levels_;
}

Signal recover_signal(const EvolutionOperator& op, const MeasurementSeries& samples,
                      std::optional<Index> levels) {
  const Index n = levels.value_or(samples.levels());
  if (n < 1 || n > samples.levels()) {
    throw ValidationError("requested " + std::to_string(n) + " levels from a series with " +
                          std::to_string(samples.levels()));
  }
  DynamicalSamplingSolver solver(op, samples.pattern);
  for (Index l = 0; l < n; ++l) solver.absorb(samples.values.col(l));
  return solver.solve();
}

Vector apply_threshold(const Vector& x, double sigma) {
  if (!(sigma >= 0.0)) throw ValidationError("threshold sigma must be nonnegative");
  const double t = 2.0 * sigma;
  Vector out = x;
  for (Index i = 0; i < out.size(); ++i)
    if (std::abs(out(i)) <= t) out(i) = 0.0;
  return out;
}

}  // namespace dynsamp
