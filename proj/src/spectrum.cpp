#include "dynsamp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "dynsamp/error.hpp"

namespace dynsamp {

BinSpectra bin_spectra(const MeasurementSeries& y, Index m) {
  const Index d = y.pattern.dim();
  if (m < 1 || m % 2 == 0) throw ValidationError("subsampling step m = " + std::to_string(m) + " must be odd");
  if (y.pattern.uniform_step() != m) {
    throw ValidationError("series is not uniformly subsampled with step " + std::to_string(m));
  }
  const Index bins = d / m;
  if (bins % 2 == 0) {
    throw ValidationError("number of bins J = d/m = " + std::to_string(bins) + " must be odd");
  }
  return BinSpectra{dft_columns(y.values), m, bins};
}

namespace {

// Rows are the windows k = 0 .. n-r-1: s(k) .. s(k+r-1) | -s(k+r).
struct HankelSystem {
  CMatrix lhs;
  CVector rhs;
};

HankelSystem hankel_system(const CVector& seq, Index r) {
  const Index rows = seq.size() - r;
  HankelSystem sys{CMatrix(rows, r), CVector(rows)};
  for (Index k = 0; k < rows; ++k) {
    sys.lhs.row(k) = seq.segment(k, r).transpose();
    sys.rhs(k) = -seq(k + r);
  }
  return sys;
}

AnnihilatorPolynomial solve_degree(const CVector& seq, Index r, CoefficientField field) {
  const HankelSystem sys = hankel_system(seq, r);
  AnnihilatorPolynomial p;
  if (field == CoefficientField::real) {
    Matrix lhs(2 * sys.lhs.rows(), r);
    lhs << sys.lhs.real(), sys.lhs.imag();
    Vector rhs(2 * sys.rhs.size());
    rhs << sys.rhs.real(), sys.rhs.imag();
    const Vector c = Eigen::JacobiSVD<Matrix>(lhs, Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    p.coefficients = c.cast<Complex>();
  } else {
    p.coefficients =
        Eigen::JacobiSVD<CMatrix>(sys.lhs, Eigen::ComputeThinU | Eigen::ComputeThinV).solve(sys.rhs);
  }
  p.residual = (sys.lhs * p.coefficients - sys.rhs).norm();
  return p;
}

}  // namespace

AnnihilatorPolynomial find_annihilator(const CVector& seq, const AnnihilatorMode& mode,
                                       CoefficientField field) {
  const Index n = seq.size();
  const double norm = seq.norm();
  if (norm == 0.0 || !std::isfinite(norm)) {
    throw NumericalError("annihilator: bin sequence is degenerate (zero or non-finite)");
  }
  if (mode.kind == AnnihilatorMode::Kind::fixed) {
    const Index r = mode.degree;
    if (r < 1) throw ValidationError("annihilator degree must be at least 1");
    if (n < 2 * r) {
      throw ValidationError("annihilator of degree " + std::to_string(r) + " needs " +
                            std::to_string(2 * r) + " samples, got " + std::to_string(n));
    }
    return solve_degree(seq, r, field);
  }

  if (n < 3) throw ValidationError("automatic annihilator search needs at least 3 samples");
  AnnihilatorPolynomial best;
  double best_rel = std::numeric_limits<double>::infinity();
  for (Index r = 1; 2 * r + 1 <= n; ++r) {
    AnnihilatorPolynomial p = solve_degree(seq, r, field);
    const double rel = p.residual / norm;
    if (rel <= mode.tol) return p;
    if (rel < best_rel) {
      best_rel = rel;
      best = std::move(p);
    }
  }
  throw NumericalError("annihilator: no degree up to " + std::to_string((n - 1) / 2) +
                       " meets tolerance " + std::to_string(mode.tol) + " (best relative residual " +
                       std::to_string(best_rel) + " at degree " + std::to_string(best.degree()) + ")");
}

std::vector<Complex> polynomial_roots(const AnnihilatorPolynomial& p) {
  const Index r = p.degree();
  if (r < 1) throw ValidationError("polynomial_roots: degree must be at least 1");

  const bool real = (p.coefficients.imag().array() == 0.0).all();
  CVector eig;
  if (real) {
    Matrix companion = Matrix::Zero(r, r);
    companion.bottomLeftCorner(r - 1, r - 1).setIdentity();
    companion.col(r - 1) = -p.coefficients.real();
    eig = Eigen::EigenSolver<Matrix>(companion, false).eigenvalues();
  } else {
    CMatrix companion = CMatrix::Zero(r, r);
    companion.bottomLeftCorner(r - 1, r - 1).setIdentity();
    companion.col(r - 1) = -p.coefficients;
    eig = Eigen::ComplexEigenSolver<CMatrix>(companion, false).eigenvalues();
  }

  std::vector<Complex> roots(eig.data(), eig.data() + eig.size());
  for (auto& z : roots) {
    if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()))) z = Complex(z.real(), 0.0);
  }
  std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return roots;
}

std::vector<Complex> SpectrumEstimate::union_roots() const {
  std::vector<Complex> out;
  for (const auto& roots : per_bin_roots) out.insert(out.end(), roots.begin(), roots.end());
  return out;
}

Index expected_bin_rank(Index bin, Index m) { return bin == 0 ? (m + 1) / 2 : m; }

namespace {

// Residual of the best amplitude fit for fixed real modes, split into real
// and imaginary parts.
struct ModeResidual {
  using Scalar = double;
  using InputType = Vector;
  using ValueType = Vector;
  using JacobianType = Matrix;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const CVector* seq;
  Index modes;

  int inputs() const { return static_cast<int>(modes); }
  int values() const { return static_cast<int>(2 * seq->size()); }

  int operator()(const Vector& z, Vector& out) const {
    const Index n = seq->size();
    CMatrix v(n, modes);
    for (Index q = 0; q < modes; ++q) {
      Complex p = 1.0;
      for (Index l = 0; l < n; ++l, p *= z(q)) v(l, q) = p;
    }
    const CVector amp = v.colPivHouseholderQr().solve(*seq);
    const CVector r = v * amp - *seq;
    out.resize(2 * n);
    out << r.real(), r.imag();
    return 0;
  }
};

}  // namespace

std::vector<double> refit_real_modes(const CVector& seq, std::vector<double> start) {
  const Index r = static_cast<Index>(start.size());
  if (r < 1 || seq.size() < 2 * r) throw ValidationError("refit_real_modes: too few samples for the mode count");
  std::sort(start.begin(), start.end());
  // Coincident starting modes make the Vandermonde fit singular; spread them.
  const double spread = 1e-3 * (1.0 + std::abs(start.back()));
  for (Index q = 1; q < r; ++q) start[q] = std::max(start[q], start[q - 1] + spread);

  Vector z = Eigen::Map<const Vector>(start.data(), r);
  ModeResidual f{&seq, r};
  Eigen::NumericalDiff<ModeResidual> df(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<ModeResidual>> lm(df);
  lm.minimize(z);
  if (!z.allFinite()) throw NumericalError("real mode refit diverged");
  std::vector<double> out(z.data(), z.data() + r);
  std::sort(out.rbegin(), out.rend());
  return out;
}

SpectrumEstimate recover_spectrum(const MeasurementSeries& y, Index m, const SpectrumOptions& options) {
  const BinSpectra spectra = bin_spectra(y, m);
  if (options.rank_mode == RankMode::fixed && m > kMaxFixedRankStep) {
    throw ValidationError("fixed-rank spectrum recovery supports m <= " +
                          std::to_string(kMaxFixedRankStep));
  }
  if (options.rank_mode == RankMode::fixed && spectra.values.cols() < 2 * m) {
    throw ValidationError("spectrum recovery with m = " + std::to_string(m) + " needs at least " +
                          std::to_string(2 * m) + " time levels");
  }

  const double data_scale = spectra.values.cwiseAbs().maxCoeff();
  SpectrumEstimate est;
  for (Index j = 0; j < spectra.bins; ++j) {
    const CVector row = spectra.values.row(j).transpose();
    if (row.cwiseAbs().maxCoeff() <= 1e-14 * data_scale) {
      throw NumericalError("bin " + std::to_string(j) + " carries no signal energy");
    }
    const AnnihilatorMode mode = options.rank_mode == RankMode::fixed
                                     ? AnnihilatorMode::fixed(expected_bin_rank(j, m))
                                     : AnnihilatorMode::automatic(options.auto_tol);
    AnnihilatorPolynomial p = find_annihilator(row, mode, options.field);
    p.bin = j;
    std::vector<Complex> roots = polynomial_roots(p);
    const bool complex_root =
        std::any_of(roots.begin(), roots.end(), [](const Complex& z) { return z.imag() != 0.0; });
    if (options.real_refit && complex_root) {
      std::vector<double> start;
      for (const Complex& z : roots) start.push_back(z.real());
      roots.clear();
      for (double z : refit_real_modes(row, start)) roots.emplace_back(z, 0.0);
      est.refit_bins.push_back(j);
    }
    est.per_bin_roots.push_back(std::move(roots));
    est.polynomials.push_back(std::move(p));
  }
  return est;
}

std::vector<Index> folded_frequencies(Index bin, Index d, Index m) {
  const Index bins = d / m;
  std::vector<Index> out;
  for (Index n = 0; n < m; ++n) {
    const Index k = (bin + n * bins) % d;
    out.push_back(std::min(k, d - k));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RealSymmetricFilter assemble_filter(const SpectrumEstimate& est, Index d, Index m) {
  if (m < 1 || d % m != 0) throw ValidationError("assemble_filter: m must divide d");
  const Index bins = d / m;
  if (static_cast<Index>(est.per_bin_roots.size()) != bins) {
    throw ValidationError("assemble_filter: expected " + std::to_string(bins) + " bins, got " +
                          std::to_string(est.per_bin_roots.size()));
  }

  std::vector<double> sum(d / 2 + 1, 0.0);
  std::vector<int> hits(d / 2 + 1, 0);
  for (Index j = 0; j < bins; ++j) {
    const auto freqs = folded_frequencies(j, d, m);
    if (j != 0 && static_cast<Index>(freqs.size()) != m) {
      throw ValidationError("folded frequencies collide in bin " + std::to_string(j));
    }
    std::vector<double> roots;
    for (const Complex& z : est.per_bin_roots[j]) {
      if (z.imag() != 0.0) {
        throw NumericalError("bin " + std::to_string(j) + " has complex root " +
                             std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") +
                             std::to_string(z.imag()) + "i");
      }
      roots.push_back(z.real());
    }
    if (roots.size() != freqs.size()) {
      throw NumericalError("bin " + std::to_string(j) + " has " + std::to_string(roots.size()) +
                           " roots but covers " + std::to_string(freqs.size()) + " frequencies");
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    for (std::size_t i = 0; i < roots.size(); ++i) {
      sum[freqs[i]] += roots[i];
      ++hits[freqs[i]];
    }
  }

  std::vector<double> folded(d / 2 + 1);
  for (std::size_t k = 0; k < folded.size(); ++k) {
    if (hits[k] == 0) throw NumericalError("frequency " + std::to_string(k) + " not covered by any bin");
    folded[k] = sum[k] / hits[k];
  }

  CVector spectrum(d);
  for (Index k = 0; k < d; ++k) spectrum(k) = folded[std::min(k, d - k)];
  const CVector taps = dft(spectrum, Direction::inverse);
  const double scale = std::max(taps.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if (taps.imag().cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw NumericalError("assembled filter has a non-negligible imaginary part");
  }
  return RealSymmetricFilter(taps.real());
}

}  // namespace dynsamp
