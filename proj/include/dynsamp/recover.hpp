#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "dynsamp/core.hpp"
#include "dynsamp/error.hpp"
#include "dynsamp/simulate.hpp"

namespace dynsamp {

namespace detail {
inline double abs_value(double x) { return std::abs(x); }
inline double abs_value(const Complex& x) { return std::abs(x); }
inline double abs2(double x) { return x * x; }
inline double abs2(const Complex& x) { return std::norm(x); }
inline double conj_of(double x) { return x; }
inline Complex conj_of(const Complex& x) { return std::conj(x); }
inline double unit_phase(double x) { return x < 0.0 ? -1.0 : 1.0; }
inline Complex unit_phase(const Complex& x) {
  const double a = std::abs(x);
  return a == 0.0 ? Complex(1.0, 0.0) : x / a;
}
}  // namespace detail

/// Least-squares state that absorbs equation blocks A_i g = b_i one at a time.
///
/// Only the d x d upper-triangular factor R and the reduced right-hand side
/// Q^* b are kept, so memory does not grow with the number of blocks. Each
/// update re-triangularizes [R; A_i] with Householder reflections and applies
/// the same reflections to [rhs; b_i].
///
/// Blocks may individually be rank deficient; the state reports full_rank()
/// once the accumulated stack determines the solution. Updates must be
/// serialized per instance.
template <typename Scalar>
class StreamingLsq {
 public:
  using MatrixS = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static constexpr double kRankTolerance = 1e-12;

  explicit StreamingLsq(Index d) : r_(MatrixS::Zero(d, d)), rhs_(VectorS::Zero(d)) {
    if (d < 1) throw ValidationError("least-squares dimension must be positive");
  }

  Index dim() const { return r_.cols(); }
  const MatrixS& r() const { return r_; }
  const VectorS& rhs() const { return rhs_; }
  Index rows_seen() const { return rows_seen_; }
  bool full_rank() const { return deficient_columns() == 0; }

  /// Squared norm of the part of the data no g can fit.
  double residual_norm_sq() const { return residual_sq_; }

  /// Number of scalars held: d^2 + d, independent of the number of updates.
  Index state_size() const { return r_.size() + rhs_.size(); }

  /// Diagonal entries of R at or below 1e-12 * max|R|.
  Index deficient_columns() const {
    const double scale = r_.cwiseAbs().maxCoeff();
    if (scale == 0.0) return dim();
    Index count = 0;
    for (Index k = 0; k < dim(); ++k)
      if (detail::abs_value(r_(k, k)) <= kRankTolerance * scale) ++count;
    return count;
  }

  void update(const MatrixS& block, const VectorS& b) {
    const Index d = dim();
    if (block.cols() != d) {
      throw ValidationError("block has " + std::to_string(block.cols()) + " columns, expected " +
                            std::to_string(d));
    }
    if (block.rows() != b.size()) {
      throw ValidationError("block has " + std::to_string(block.rows()) +
                            " rows but right-hand side has " + std::to_string(b.size()));
    }
    MatrixS w = block;
    VectorS c = b;
    const Index m = w.rows();

    // Column k of [R; W] is nonzero only in row k of R and in W, because
    // R is already upper triangular. The reflector acts on those rows only.
    VectorS u(m + 1);
    for (Index k = 0; k < d && m > 0; ++k) {
      const double tail_sq = w.col(k).squaredNorm();
      if (tail_sq == 0.0) continue;
      const Scalar alpha = r_(k, k);
      const double norm_x = std::sqrt(detail::abs2(alpha) + tail_sq);
      const Scalar beta = -detail::unit_phase(alpha) * norm_x;
      u(0) = alpha - beta;
      u.tail(m) = w.col(k);
      const double scale = 2.0 / u.squaredNorm();

      r_(k, k) = beta;
      w.col(k).setZero();
      for (Index j = k + 1; j < d; ++j) {
        const Scalar s = scale * (detail::conj_of(u(0)) * r_(k, j) + u.tail(m).dot(w.col(j)));
        r_(k, j) -= s * u(0);
        w.col(j) -= s * u.tail(m);
      }
      const Scalar s = scale * (detail::conj_of(u(0)) * rhs_(k) + u.tail(m).dot(c));
      rhs_(k) -= s * u(0);
      c -= s * u.tail(m);
    }
    residual_sq_ += c.squaredNorm();
    rows_seen_ += m;
  }

  /// Back-substitution R g = rhs.
  VectorS solve() const {
    const Index bad = deficient_columns();
    if (bad != 0) {
      throw NumericalError("least-squares state is rank deficient: " + std::to_string(bad) +
                           " of " + std::to_string(dim()) + " columns undetermined");
    }
    return r_.template triangularView<Eigen::Upper>().solve(rhs_);
  }

 private:
  MatrixS r_;
  VectorS rhs_;
  Index rows_seen_ = 0;
  double residual_sq_ = 0.0;
};

using RealStreamingLsq = StreamingLsq<double>;
using ComplexStreamingLsq = StreamingLsq<Complex>;

/// Direct minimizer of sum_i ||A_i g - b_i||^2 over the explicit stack.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> batch_lsq(
    const std::vector<std::pair<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>,
                                Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>>& blocks) {
  using MatrixS = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (blocks.empty()) throw ValidationError("batch_lsq: no blocks");
  const Index d = blocks.front().first.cols();
  Index rows = 0;
  for (const auto& [a, b] : blocks) {
    if (a.cols() != d || a.rows() != b.size()) throw ValidationError("batch_lsq: shape mismatch");
    rows += a.rows();
  }
  MatrixS stack(rows, d);
  VectorS rhs(rows);
  Index at = 0;
  for (const auto& [a, b] : blocks) {
    stack.middleRows(at, a.rows()) = a;
    rhs.segment(at, a.rows()) = b;
    at += a.rows();
  }
  Eigen::ColPivHouseholderQR<MatrixS> qr(stack);
  qr.setThreshold(1e-12);
  if (qr.rank() < d) {
    throw NumericalError("batch_lsq: stacked matrix has rank " + std::to_string(qr.rank()) +
                         " < " + std::to_string(d));
  }
  return qr.solve(rhs);
}

/// Streams time levels of a dynamical sampling experiment into a
/// StreamingLsq. Level n contributes the rows S_Omega A^n; those rows are
/// advanced in place, so neither past samples nor powers of A are stored.
class DynamicalSamplingSolver {
 public:
  DynamicalSamplingSolver(EvolutionOperator op, SamplingPattern pattern);

  /// Absorbs the samples of the next time level (ordered as pattern.indices()).
  void absorb(const Vector& samples);

  Index levels_absorbed() const { return levels_; }
  bool full_rank() const { return lsq_.full_rank(); }
  Signal solve() const { return lsq_.solve(); }
  const RealStreamingLsq& state() const { return lsq_; }

 private:
  EvolutionOperator op_;
  SamplingPattern pattern_;
  Matrix rows_;  // S_Omega A^n for the next level n
  RealStreamingLsq lsq_;
  Index levels_ = 0;
};

/// Least-squares estimate of f from the first `levels` columns of the series
/// (all columns when levels is empty).
Signal recover_signal(const EvolutionOperator& op, const MeasurementSeries& samples,
                      std::optional<Index> levels = std::nullopt);

/// Zeroes entries with |x(i)| <= 2 sigma.
Vector apply_threshold(const Vector& x, double sigma);

}  // namespace dynsamp
