#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace dynsamp {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// A state of the evolving system: d real amplitudes.
using Signal = Vector;

/// Output of dft(). Forward transforms are unnormalized,
///   X(k) = sum_t x(t) exp(-2 pi i k t / n),
/// and the inverse carries the 1/n factor.
using SpectralVector = CVector;

enum class Direction { forward, inverse };

SpectralVector dft(const CVector& x, Direction direction = Direction::forward);
SpectralVector dft(const Vector& x);

/// Column-wise forward transform of a real matrix.
CMatrix dft_columns(const Matrix& x);

/// Length-d real filter with a(k) == a((d - k) mod d). Its spectrum is real
/// and even, and the associated circulant matrix is symmetric.
class RealSymmetricFilter {
 public:
  /// Accepts taps that are symmetric up to 1e-12 relative and symmetrizes
  /// them exactly; anything further off throws ValidationError.
  explicit RealSymmetricFilter(Vector taps);

  /// Builds the filter from one side of its taps: (a(0), a(1), ..., a(h)),
  /// mirrored to a(d - k) = a(k). Remaining taps are zero.
  static RealSymmetricFilter from_half_taps(std::span<const double> half, Index d);

  /// Builds the filter whose spectrum takes value folded[k] at the
  /// frequencies k and d - k, for k = 0 .. floor(d / 2).
  static RealSymmetricFilter from_folded_spectrum(std::span<const double> folded, Index d);

  const Vector& taps() const { return taps_; }
  Index size() const { return taps_.size(); }

  /// Real part of the forward DFT of the taps (the imaginary part vanishes).
  Vector spectrum() const;

 private:
  Vector taps_;
};

/// Linear map advancing a signal by one time level.
class EvolutionOperator {
 public:
  static EvolutionOperator circulant(RealSymmetricFilter filter);
  static EvolutionOperator dense(Matrix entries);

  Index dim() const;
  bool is_circulant() const { return std::holds_alternative<Circulant>(rep_); }

  /// Null for the dense variant.
  const RealSymmetricFilter* filter() const;

  Vector apply(const Vector& f) const;
  Vector apply_adjoint(const Vector& f) const;

  /// Right-multiplies every row of `rows` by the operator: rows * A.
  Matrix apply_to_rows(const Matrix& rows) const;

  Matrix to_dense() const;

 private:
  struct Circulant {
    RealSymmetricFilter filter;
    Vector eigenvalues;
  };
  explicit EvolutionOperator(std::variant<Circulant, Matrix> rep) : rep_(std::move(rep)) {}

  std::variant<Circulant, Matrix> rep_;
};

/// Set of retained spatial indices Omega, 0-based and strictly increasing.
class SamplingPattern {
 public:
  SamplingPattern(Index d, std::vector<Index> indices);

  static SamplingPattern uniform(Index d, Index step);
  static SamplingPattern all(Index d);
  static SamplingPattern from_one_based(Index d, const std::vector<Index>& labels);

  Index dim() const { return d_; }
  Index size() const { return static_cast<Index>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  const std::vector<Index>& indices() const { return indices_; }

  /// Set when the indices are exactly {0, m, 2m, ..., d - m}.
  std::optional<Index> uniform_step() const { return step_; }

  bool contains(Index i) const;
  SamplingPattern merged(const SamplingPattern& other) const;
  std::vector<Index> one_based() const;

  /// The |Omega| x d row selector whose rows are unit vectors e_j, j in Omega.
  Matrix selector() const;

  friend bool operator==(const SamplingPattern&, const SamplingPattern&) = default;

 private:
  Index d_;
  std::vector<Index> indices_;
  std::optional<Index> step_;
};

/// result(k) = sum_j a(j) f((k - j) mod d), computed through the DFT.
Vector circular_convolve(const Vector& a, const Vector& f);
Vector circular_convolve(const RealSymmetricFilter& a, const Vector& f);

Vector subsample(const Vector& x, const SamplingPattern& pattern);

/// Applies subsample() to every column.
Matrix subsample_rows(const Matrix& x, const SamplingPattern& pattern);

struct Recoverability {
  bool recoverable = false;
  /// Smallest L such that the samples at levels 0..L already determine f.
  std::optional<int> min_levels;
};

/// Checks that the stack of S_Omega A^i, i = 0 .. d-1, has full column rank.
/// Singular values below 1e-10 * sigma_max count as zero.
Recoverability check_recoverability(const EvolutionOperator& op, const SamplingPattern& pattern);

/// Numerical rank with singular values below rel_tol * sigma_max treated as zero.
Index numerical_rank(const Matrix& m, double rel_tol = 1e-10);

}  // namespace dynsamp
