#include "dynsamp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/FFT>

#include "dynsamp/error.hpp"

namespace dynsamp {

SpectralVector dft(const CVector& x, Direction direction) {
  if (x.size() == 0) throw ValidationError("dft: empty input");
  if (x.size() == 1) return x;  // kissfft does not handle n = 1
  // One plan object per call keeps dft() free of shared state.
  Eigen::FFT<double> fft;
  std::vector<Complex> in(x.data(), x.data() + x.size());
  std::vector<Complex> out;
  if (direction == Direction::forward) {
    fft.fwd(out, in);
  } else {
    fft.inv(out, in);  // scaled by 1/n
  }
  return Eigen::Map<const CVector>(out.data(), static_cast<Index>(out.size()));
}

SpectralVector dft(const Vector& x) { return dft(CVector(x.cast<Complex>()), Direction::forward); }

CMatrix dft_columns(const Matrix& x) {
  CMatrix out(x.rows(), x.cols());
  for (Index c = 0; c < x.cols(); ++c) out.col(c) = dft(Vector(x.col(c)));
  return out;
}

// ---------------------------------------------------------------------------

RealSymmetricFilter::RealSymmetricFilter(Vector taps) : taps_(std::move(taps)) {
  const Index d = taps_.size();
  if (d < 1) throw ValidationError("filter must have at least one tap");
  const double scale = std::max(1.0, taps_.cwiseAbs().maxCoeff());
  for (Index k = 1; k < d; ++k) {
    if (std::abs(taps_(k) - taps_(d - k)) > 1e-12 * scale) {
      throw ValidationError("filter is not symmetric at tap " + std::to_string(k));
    }
  }
  for (Index k = 1; 2 * k <= d; ++k) {
    const double mean = 0.5 * (taps_(k) + taps_(d - k));
    taps_(k) = mean;
    taps_(d - k) = mean;
  }
}

RealSymmetricFilter RealSymmetricFilter::from_half_taps(std::span<const double> half, Index d) {
  if (d < 1) throw ValidationError("filter dimension must be positive");
  if (static_cast<Index>(half.size()) > d / 2 + 1) {
    throw ValidationError("too many half taps for dimension " + std::to_string(d));
  }
  Vector taps = Vector::Zero(d);
  for (Index k = 0; k < static_cast<Index>(half.size()); ++k) {
    taps(k) = half[k];
    taps((d - k) % d) = half[k];
  }
  return RealSymmetricFilter(std::move(taps));
}

RealSymmetricFilter RealSymmetricFilter::from_folded_spectrum(std::span<const double> folded,
                                                              Index d) {
  if (d < 1) throw ValidationError("filter dimension must be positive");
  if (static_cast<Index>(folded.size()) != d / 2 + 1) {
    throw ValidationError("folded spectrum of a length-" + std::to_string(d) + " filter needs " +
                          std::to_string(d / 2 + 1) + " values");
  }
  CVector spectrum(d);
  for (Index k = 0; k < d; ++k) spectrum(k) = folded[std::min(k, d - k)];
  const CVector taps = dft(spectrum, Direction::inverse);
  return RealSymmetricFilter(taps.real());
}

Vector RealSymmetricFilter::spectrum() const { return dft(taps_).real(); }

// ---------------------------------------------------------------------------

EvolutionOperator EvolutionOperator::circulant(RealSymmetricFilter filter) {
  Vector eig = filter.spectrum();
  return EvolutionOperator(Circulant{std::move(filter), std::move(eig)});
}

EvolutionOperator EvolutionOperator::dense(Matrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw ValidationError("dense evolution operator must be square and nonempty");
  }
  return EvolutionOperator(std::move(entries));
}

Index EvolutionOperator::dim() const {
  if (const auto* c = std::get_if<Circulant>(&rep_)) return c->filter.size();
  return std::get<Matrix>(rep_).rows();
}

const RealSymmetricFilter* EvolutionOperator::filter() const {
  if (const auto* c = std::get_if<Circulant>(&rep_)) return &c->filter;
  return nullptr;
}

Vector EvolutionOperator::apply(const Vector& f) const {
  if (f.size() != dim()) throw ValidationError("operator/signal dimension mismatch");
  if (const auto* c = std::get_if<Circulant>(&rep_)) {
    const CVector fhat = dft(f);
    const CVector prod = c->eigenvalues.cast<Complex>().cwiseProduct(fhat);
    return dft(prod, Direction::inverse).real();
  }
  return std::get<Matrix>(rep_) * f;
}

Vector EvolutionOperator::apply_adjoint(const Vector& f) const {
  // A symmetric filter gives a symmetric circulant.
  if (is_circulant()) return apply(f);
  if (f.size() != dim()) throw ValidationError("operator/signal dimension mismatch");
  return std::get<Matrix>(rep_).transpose() * f;
}

Matrix EvolutionOperator::apply_to_rows(const Matrix& rows) const {
  if (rows.cols() != dim()) throw ValidationError("operator/row dimension mismatch");
  if (const auto* m = std::get_if<Matrix>(&rep_)) return rows * *m;
  Matrix out(rows.rows(), rows.cols());
  for (Index r = 0; r < rows.rows(); ++r) out.row(r) = apply_adjoint(rows.row(r).transpose()).transpose();
  return out;
}

Matrix EvolutionOperator::to_dense() const {
  if (const auto* m = std::get_if<Matrix>(&rep_)) return *m;
  const Index d = dim();
  Matrix out(d, d);
  for (Index j = 0; j < d; ++j) out.col(j) = apply(Vector::Unit(d, j));
  return out;
}

// ---------------------------------------------------------------------------

SamplingPattern::SamplingPattern(Index d, std::vector<Index> indices)
    : d_(d), indices_(std::move(indices)) {
  if (d_ < 1) throw ValidationError("sampling pattern dimension must be positive");
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= d_) {
      throw ValidationError("sampling index " + std::to_string(indices_[i]) + " outside [0, " +
                            std::to_string(d_ - 1) + "]");
    }
    if (i > 0 && indices_[i] == indices_[i - 1]) {
      throw ValidationError("duplicate sampling index " + std::to_string(indices_[i]));
    }
  }
  if (!indices_.empty() && indices_.front() == 0) {
    const Index step = indices_.size() > 1 ? indices_[1] : d_;
    bool uniform = d_ % step == 0 && size() == d_ / step;
    for (Index i = 0; uniform && i < size(); ++i) uniform = indices_[i] == i * step;
    if (uniform) step_ = step;
  }
}

SamplingPattern SamplingPattern::uniform(Index d, Index step) {
  if (step < 1 || d < 1 || d % step != 0) {
    throw ValidationError("uniform step " + std::to_string(step) + " must divide d = " +
                          std::to_string(d));
  }
  std::vector<Index> idx;
  for (Index i = 0; i < d; i += step) idx.push_back(i);
  return SamplingPattern(d, std::move(idx));
}

SamplingPattern SamplingPattern::all(Index d) { return uniform(d, 1); }

SamplingPattern SamplingPattern::from_one_based(Index d, const std::vector<Index>& labels) {
  std::vector<Index> idx;
  idx.reserve(labels.size());
  for (Index l : labels) idx.push_back(l - 1);
  return SamplingPattern(d, std::move(idx));
}

bool SamplingPattern::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

SamplingPattern SamplingPattern::merged(const SamplingPattern& other) const {
  if (other.d_ != d_) throw ValidationError("cannot merge patterns of different dimension");
  std::vector<Index> idx;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(idx));
  return SamplingPattern(d_, std::move(idx));
}

std::vector<Index> SamplingPattern::one_based() const {
  std::vector<Index> out(indices_);
  for (auto& i : out) ++i;
  return out;
}

Matrix SamplingPattern::selector() const {
  Matrix s = Matrix::Zero(size(), d_);
  for (Index r = 0; r < size(); ++r) s(r, indices_[r]) = 1.0;
  return s;
}

// ---------------------------------------------------------------------------

Vector circular_convolve(const Vector& a, const Vector& f) {
  if (a.size() != f.size()) {
    throw ValidationError("circular_convolve: lengths " + std::to_string(a.size()) + " and " +
                          std::to_string(f.size()) + " differ");
  }
  const CVector prod = dft(a).cwiseProduct(dft(f));
  return dft(prod, Direction::inverse).real();
}

Vector circular_convolve(const RealSymmetricFilter& a, const Vector& f) {
  return circular_convolve(a.taps(), f);
}

Vector subsample(const Vector& x, const SamplingPattern& pattern) {
  if (x.size() != pattern.dim()) throw ValidationError("subsample: pattern dimension mismatch");
  Vector out(pattern.size());
  for (Index i = 0; i < pattern.size(); ++i) out(i) = x(pattern.indices()[i]);
  return out;
}

Matrix subsample_rows(const Matrix& x, const SamplingPattern& pattern) {
  if (x.rows() != pattern.dim()) throw ValidationError("subsample: pattern dimension mismatch");
  Matrix out(pattern.size(), x.cols());
  for (Index i = 0; i < pattern.size(); ++i) out.row(i) = x.row(pattern.indices()[i]);
  return out;
}

Index numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  return (sv.array() > rel_tol * sv(0)).count();
}

Recoverability check_recoverability(const EvolutionOperator& op, const SamplingPattern& pattern) {
  const Index d = op.dim();
  if (pattern.dim() != d) throw ValidationError("pattern/operator dimension mismatch");
  if (pattern.empty()) return {};

  // The stack through level L+1 is [S; stack_L * A]. Replacing stack_L by its
  // triangular factor R_L leaves the Gram matrix unchanged, so
  // R_{L+1} = qr([S; R_L A]).R keeps the work at O(d^2) rows.
  const Matrix selector = pattern.selector();
  Matrix r = Eigen::HouseholderQR<Matrix>(selector).matrixQR().topRows(std::min(d, pattern.size()))
                 .triangularView<Eigen::Upper>();
  for (Index level = 0; level < d; ++level) {
    if (numerical_rank(r) == d) return {true, static_cast<int>(level)};
    Matrix stacked(selector.rows() + r.rows(), d);
    stacked << selector, op.apply_to_rows(r);
    Eigen::HouseholderQR<Matrix> qr(stacked);
    r = qr.matrixQR().topRows(std::min(d, stacked.rows())).triangularView<Eigen::Upper>();
  }
  return {};
}

}  // namespace dynsamp
