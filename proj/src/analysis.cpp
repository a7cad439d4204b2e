#include "dynsamp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "dynsamp/error.hpp"
#include "dynsamp/parallel.hpp"
#include "dynsamp/recover.hpp"

namespace dynsamp {

Matrix gram_matrix(const EvolutionOperator& op, const SamplingPattern& pattern, Index levels) {
  if (levels < 1) throw ValidationError("Gram matrix needs at least one level");
  if (pattern.dim() != op.dim()) throw ValidationError("pattern/operator dimension mismatch");
  const Index d = op.dim();
  Matrix gram = Matrix::Zero(d, d);
  Matrix rows = pattern.selector();
  for (Index i = 0; i < levels; ++i) {
    gram.noalias() += rows.transpose() * rows;
    if (i + 1 < levels) rows = op.apply_to_rows(rows);
  }
  return gram;
}

namespace {

// A circulant operator is diagonal in the Fourier basis. Each mode's column
// of the stacked system S_Omega A^i is a geometric sequence in i, so scaling
// every column to unit norm over the levels leaves a well-conditioned system
// even when the spectral radius is far from 1. Forming the stack in the
// standard basis instead loses the contracting modes below roundoff.
struct ModalSystem {
  CMatrix sampled_basis;  // phi_k(omega) for omega in Omega, unitary DFT columns
  Vector modes;           // eigenvalue of phi_k

  ModalSystem(const EvolutionOperator& op, const SamplingPattern& pattern) {
    const Index d = op.dim();
    modes = op.filter()->spectrum();
    sampled_basis.resize(pattern.size(), d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    const double two_pi = 2.0 * std::acos(-1.0);
    for (Index q = 0; q < pattern.size(); ++q) {
      const Index w = pattern.indices()[q];
      for (Index k = 0; k < d; ++k) {
        sampled_basis(q, k) = std::polar(norm, two_pi * static_cast<double>((w * k) % d) / static_cast<double>(d));
      }
    }
  }

  Vector column_norms(Index levels) const {
    const double frac = static_cast<double>(sampled_basis.rows()) / static_cast<double>(modes.size());
    Vector c(modes.size());
    for (Index k = 0; k < modes.size(); ++k) {
      double sum = 0.0, p = 1.0;
      for (Index i = 0; i < levels; ++i, p *= modes(k) * modes(k)) sum += p;
      c(k) = std::sqrt(frac * sum);
    }
    if (!c.allFinite()) throw NumericalError("modal column norms overflow at L = " + std::to_string(levels));
    return c;
  }

  CMatrix block(Index level, const Vector& norms) const {
    Vector w(modes.size());
    for (Index k = 0; k < modes.size(); ++k) w(k) = std::pow(modes(k), static_cast<double>(level)) / norms(k);
    return sampled_basis * w.asDiagonal();
  }

  // Signal-space vector of modal coordinates u in the scaled basis.
  Vector to_signal(const CVector& u, const Vector& norms) const {
    const double root_d = std::sqrt(static_cast<double>(modes.size()));
    return root_d * dft(CVector(u.cwiseQuotient(norms.cast<Complex>())), Direction::inverse).real();
  }

  // Streams levels 0..levels-1; rhs column i holds the data of level i.
  ComplexStreamingLsq factor(Index levels, const Vector& norms, const Matrix* rhs) const {
    ComplexStreamingLsq lsq(modes.size());
    const CVector zero = CVector::Zero(sampled_basis.rows());
    for (Index i = 0; i < levels; ++i) {
      lsq.update(block(i, norms), rhs ? CVector(rhs->col(i).cast<Complex>()) : zero);
    }
    return lsq;
  }
};

// One-sided (Hestenes) Jacobi. For X = B D with D diagonal, every singular
// value comes out with relative error of order cond(B) * eps, independent of
// how widely D is spread. Returned descending.
Vector graded_singular_values(CMatrix x) {
  const Index n = x.cols();
  constexpr double kEps = 1e-15;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = x.col(p).squaredNorm();
        const double beta = x.col(q).squaredNorm();
        const Complex gamma = x.col(p).dot(x.col(q));
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase = std::conj(gamma) / g;  // makes p^* (q * phase) real
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const CVector xp = x.col(p);
        const CVector xq = x.col(q) * phase;
        x.col(p) = c * xp - s * xq;
        x.col(q) = s * xp + c * xq;
      }
    }
    if (!rotated) break;
  }
  Vector sv = x.colwise().norm().transpose();
  std::sort(sv.data(), sv.data() + sv.size(), std::greater<>());
  return sv;
}

}  // namespace

GramSpectrum gram_spectrum(const EvolutionOperator& op, const SamplingPattern& pattern, Index levels) {
  if (levels < 1) throw ValidationError("Gram spectrum needs at least one level");
  if (pattern.dim() != op.dim()) throw ValidationError("pattern/operator dimension mismatch");
  GramSpectrum out;
  out.levels = levels;

  if (op.is_circulant() && !pattern.empty()) {
    const ModalSystem modal(op, pattern);
    const Vector norms = modal.column_norms(levels);
    const ComplexStreamingLsq lsq = modal.factor(levels, norms, nullptr);
    out.full_rank = lsq.full_rank();
    // The Gram matrix is X^* X with X = R C, R well conditioned and C diagonal.
    out.eigenvalues = graded_singular_values(lsq.r() * norms.cast<Complex>().asDiagonal()).cwiseAbs2();
    return out;
  }

  const Matrix gram = gram_matrix(op, pattern, levels);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  Vector ev = solver.eigenvalues().reverse().cwiseMax(0.0);
  out.full_rank = ev.size() > 0 && ev(0) > 0.0 && ev(ev.size() - 1) > kGramTolerance * ev(0);
  out.eigenvalues = std::move(ev);
  return out;
}

double lambda_closed_form(Complex s, Index levels) {
  if (levels < 1) throw ValidationError("lambda_closed_form: L must be at least 1");
  const double mod2 = std::norm(s);
  if (mod2 == 1.0) return static_cast<double>(levels);
  // Geometric sum 1 + |s|^2 + ... + |s|^{2(L-1)}.
  return (1.0 - std::pow(mod2, static_cast<double>(levels))) / (1.0 - mod2);
}

double mse_formula(double sigma, const GramSpectrum& spectrum) {
  if (!(sigma >= 0.0)) throw ValidationError("sigma must be nonnegative");
  if (!spectrum.full_rank) {
    throw NumericalError("Gram matrix is singular at L = " + std::to_string(spectrum.levels) +
                         "; the configuration is not recoverable");
  }
  return sigma * sigma * spectrum.eigenvalues.cwiseInverse().sum();
}

unsigned default_workers() {
  if (const char* env = std::getenv("DYNSAMP_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct TrialErrors {
  std::vector<Vector> per_level;  // f# - f at each grid point
};

struct TrialContext {
  const EvolutionOperator& op;
  const SamplingPattern& pattern;
  const Signal& f;
  const Matrix& clean;  // S_Omega A^i f, one column per level
  double sigma;
  const std::vector<Index>& grid;
  const MonteCarloOptions& options;
  std::optional<ModalSystem> modal;
  std::vector<Vector> modal_norms;  // per grid point
};

// The estimator is linear, so f# - f = M^+ delta where delta is what the
// noise (and thresholding) did to the exact samples. Solving for delta
// rather than the samples keeps the error computable when the samples are
// far larger than sigma.
TrialErrors run_trial(const TrialContext& ctx, Index trial) {
  const auto& options = ctx.options;
  std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                    static_cast<std::uint32_t>(options.seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // One noise draw per time level, shared by every prefix length.
  Matrix delta(ctx.clean.rows(), ctx.clean.cols());
  for (Index c = 0; c < delta.cols(); ++c) {
    for (Index r = 0; r < delta.rows(); ++r) {
      const double eta = ctx.sigma * gauss(rng);
      const double y = ctx.clean(r, c);
      delta(r, c) = options.threshold && std::abs(y + eta) <= 2.0 * ctx.sigma ? -y : eta;
    }
  }

  auto finish = [&](const Vector& error) -> Vector {
    if (!options.threshold) return error;
    return apply_threshold(ctx.f + error, ctx.sigma) - ctx.f;
  };

  TrialErrors out;
  if (ctx.modal) {
    for (std::size_t g = 0; g < ctx.grid.size(); ++g) {
      const Vector& norms = ctx.modal_norms[g];
      const ComplexStreamingLsq lsq = ctx.modal->factor(ctx.grid[g], norms, &delta);
      out.per_level.push_back(finish(ctx.modal->to_signal(lsq.solve(), norms)));
    }
    return out;
  }

  RealStreamingLsq lsq(ctx.op.dim());
  Matrix rows = ctx.pattern.selector();
  std::size_t next = 0;
  for (Index level = 0; next < ctx.grid.size(); ++level) {
    lsq.update(rows, delta.col(level));
    rows = ctx.op.apply_to_rows(rows);
    while (next < ctx.grid.size() && ctx.grid[next] == level + 1) {
      out.per_level.push_back(finish(lsq.solve()));
      ++next;
    }
  }
  return out;
}

}  // namespace

MseEstimate monte_carlo_mse(const EvolutionOperator& op, const SamplingPattern& pattern, const Signal& f,
                            double sigma, std::vector<Index> level_grid,
                            const MonteCarloOptions& options) {
  if (!(sigma >= 0.0)) throw ValidationError("sigma must be nonnegative");
  if (options.trials < 2) throw ValidationError("Monte Carlo needs at least 2 trials");
  if (level_grid.empty()) throw ValidationError("empty level grid");
  if (f.size() != op.dim()) throw ValidationError("signal/operator dimension mismatch");
  std::sort(level_grid.begin(), level_grid.end());
  level_grid.erase(std::unique(level_grid.begin(), level_grid.end()), level_grid.end());
  if (level_grid.front() < 1) throw ValidationError("level grid entries must be positive");

  const Index max_levels = level_grid.back();
  const Matrix clean = subsample_rows(
      [&] {
        Matrix traj(f.size(), max_levels);
        traj.col(0) = f;
        for (Index n = 1; n < max_levels; ++n) traj.col(n) = op.apply(traj.col(n - 1));
        return traj;
      }(),
      pattern);

  std::vector<GramSpectrum> spectra;
  for (Index l : level_grid) {
    spectra.push_back(gram_spectrum(op, pattern, l));
    if (!spectra.back().full_rank) {
      throw NumericalError("configuration is not recoverable from " + std::to_string(l) + " levels");
    }
  }

  // Trials are independent; results are stored per trial index and reduced
  // in order, so the estimate does not depend on the worker count.
  std::vector<TrialErrors> trials(options.trials);
  TrialContext ctx{op, pattern, f, clean, sigma, level_grid, options, std::nullopt, {}};
  if (op.is_circulant()) {
    ctx.modal.emplace(op, pattern);
    for (Index l : level_grid) ctx.modal_norms.push_back(ctx.modal->column_norms(l));
  }
  parallel_for(options.trials, options.workers, [&](Index t) { trials[t] = run_trial(ctx, t); });

  const double n = static_cast<double>(options.trials);
  MseEstimate est;
  est.sigma = sigma;
  for (std::size_t g = 0; g < level_grid.size(); ++g) {
    const Index d = f.size();
    double sum = 0.0, sum_sq = 0.0;
    Vector mean = Vector::Zero(d), mean_sq = Vector::Zero(d);
    for (const auto& tr : trials) {
      const Vector& e = tr.per_level[g];
      const double v = e.squaredNorm();
      sum += v;
      sum_sq += v * v;
      mean += e;
      mean_sq += e.cwiseAbs2();
    }
    MsePoint p;
    p.levels = level_grid[g];
    p.trials = options.trials;
    p.formula = mse_formula(sigma, spectra[g]);
    p.monte_carlo = sum / n;
    const double var = std::max(0.0, (sum_sq - n * p.monte_carlo * p.monte_carlo) / (n - 1.0));
    p.standard_error = std::sqrt(var / n);
    p.mean_error = mean / n;
    const Vector comp_var =
        ((mean_sq - n * p.mean_error.cwiseAbs2()) / (n - 1.0)).cwiseMax(0.0);
    p.mean_error_se = (comp_var / n).cwiseSqrt();
    est.per_level.push_back(std::move(p));
  }
  return est;
}

double relative_error(const Matrix& z, const Matrix& ref) {
  if (z.rows() != ref.rows() || z.cols() != ref.cols()) {
    throw ValidationError("relative_error: shape mismatch");
  }
  const double denom = ref.norm();
  if (denom == 0.0) throw ValidationError("relative_error: reference is zero");
  return (z - ref).norm() / denom;
}

}  // namespace dynsamp
