#include "dynsamp/cadzow.hpp"

#include <string>

#include <Eigen/SVD>

#include "dynsamp/error.hpp"
#include "dynsamp/spectrum.hpp"

namespace dynsamp {

CMatrix hankel_from_sequence(const CVector& seq) {
  if (seq.size() < 1 || seq.size() % 2 == 0) {
    throw ValidationError("square Hankel matrix needs an odd-length sequence, got " +
                          std::to_string(seq.size()));
  }
  const Index n = (seq.size() + 1) / 2;
  CMatrix h(n, n);
  for (Index q = 0; q < n; ++q)
    for (Index p = 0; p < n; ++p) h(p, q) = seq(p + q);
  return h;
}

CVector antidiagonal_average(const CMatrix& x) {
  CVector sum = CVector::Zero(x.rows() + x.cols() - 1);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(sum.size());
  for (Index q = 0; q < x.cols(); ++q) {
    for (Index p = 0; p < x.rows(); ++p) {
      sum(p + q) += x(p, q);
      count(p + q) += 1.0;
    }
  }
  return sum.cwiseQuotient(count.cast<Complex>());
}

HankelMatrix cadzow_project(const CMatrix& x, Index rank, Index bin) {
  if (rank < 1) throw ValidationError("Cadzow rank must be at least 1");
  if (x.rows() != x.cols()) throw ValidationError("Cadzow projection expects a square matrix");
  if (rank >= x.rows()) return {hankel_from_sequence(antidiagonal_average(x)), bin};

  Eigen::BDCSVD<CMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const CMatrix low = svd.matrixU().leftCols(rank) *
                      svd.singularValues().head(rank).cast<Complex>().asDiagonal() *
                      svd.matrixV().leftCols(rank).adjoint();
  return {hankel_from_sequence(antidiagonal_average(low)), bin};
}

double rank_ratio(const CMatrix& x, Index rank) {
  if (rank >= std::min(x.rows(), x.cols())) return 0.0;
  const Eigen::VectorXd sv = Eigen::BDCSVD<CMatrix>(x).singularValues();
  return sv(0) == 0.0 ? 0.0 : sv(rank) / sv(0);
}

namespace {

struct BinOutcome {
  CVector sequence;
  Index iterations = 0;
  double ratio = 0.0;
};

BinOutcome denoise_bin(const CVector& seq, Index rank, Index bin, const DenoiseOptions& options) {
  CMatrix x = hankel_from_sequence(seq);
  BinOutcome out;
  for (Index k = 1; k <= options.k_max; ++k) {
    CMatrix next = cadzow_project(x, rank, bin).entries;
    const double change = (next - x).norm();
    const double scale = x.norm();
    x = std::move(next);
    out.iterations = k;
    if (change <= options.early_exit_tol * scale) break;
  }
  out.sequence = antidiagonal_average(x);
  out.ratio = rank_ratio(x, rank);
  return out;
}

}  // namespace

DenoiseResult denoise_series(const MeasurementSeries& y, Index m, const DenoiseOptions& options) {
  if (options.k_max < 1) throw ValidationError("k_max must be at least 1");
  if (options.rank && *options.rank < 1) throw ValidationError("Cadzow rank must be at least 1");

  std::vector<std::string> warnings;
  Matrix values = y.values;
  if ((values.cols() - 1) % 2 != 0) {
    warnings.push_back("L = " + std::to_string(values.cols() - 1) +
                       " is odd; dropping the last time level");
    values.conservativeResize(Eigen::NoChange, values.cols() - 1);
  }
  if (values.cols() < 3) throw ValidationError("Cadzow denoising needs at least 3 time levels");

  const MeasurementSeries trimmed(values, y.pattern, y.kind);
  const BinSpectra spectra = bin_spectra(trimmed, m);
  const Index bins = spectra.bins;

  CMatrix cleaned(bins, values.cols());
  std::vector<Index> ranks(bins), iterations(bins);
  std::vector<double> ratios(bins);
  for (Index j = 0; j <= bins / 2; ++j) {
    const Index r = options.rank.value_or(expected_bin_rank(j, m));
    BinOutcome o = denoise_bin(spectra.values.row(j).transpose(), r, j, options);
    cleaned.row(j) = o.sequence.transpose();
    ranks[j] = r;
    iterations[j] = o.iterations;
    ratios[j] = o.ratio;
    if (j != 0) {
      const Index mirror = bins - j;
      cleaned.row(mirror) = o.sequence.conjugate().transpose();
      ranks[mirror] = r;
      iterations[mirror] = o.iterations;
      ratios[mirror] = o.ratio;
    }
  }
  cleaned.row(0) = cleaned.row(0).real().cast<Complex>();

  Matrix out(values.rows(), values.cols());
  for (Index c = 0; c < values.cols(); ++c) {
    out.col(c) = dft(CVector(cleaned.col(c)), Direction::inverse).real();
  }
  return DenoiseResult{MeasurementSeries(std::move(out), y.pattern, SeriesKind::denoised),
                       std::move(ranks), std::move(iterations), std::move(ratios),
                       std::move(warnings)};
}

}  // namespace dynsamp
