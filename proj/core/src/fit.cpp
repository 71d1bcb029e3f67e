#include "mlpoisson/fitting/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mlpoisson/distributions/generalized.hpp"
#include "mlpoisson/errors.hpp"
#include "mlpoisson/fitting/nelder_mead.hpp"

namespace mlpoisson {

namespace {

constexpr std::array<double, 2> kSimplexSteps = {0.05, 1.0};
constexpr double kJacobianStep = 1e-6;
// A least-squares optimum whose model mass on the weighted k range falls
// below this fraction of the target's sits on a zero-probability plateau.
constexpr double kPlateauMassFraction = 1e-3;

// Moment-match grid fallback.
constexpr double kGridAlphaLo = 0.05;
constexpr double kGridAlphaHi = 1.99;
constexpr double kGridAlphaStep = 0.02;
constexpr double kGridBetaLo = -5.0;
constexpr double kGridBetaHi = 100.0;
constexpr double kGridBetaStep = 0.5;
// Grid points whose series would need more terms than this are skipped;
// their means lie far above any target reachable with 0 < alpha_s <= 1.
constexpr std::size_t kGridMaxTerms = 20'000;

struct Residual {
  std::array<double, 2> r;
  double norm;
};

class MomentResidual {
 public:
  MomentResidual(const MeanVariance& target, double lambda, const SeriesControl& ctl)
      : target_(target), lambda_(lambda), ctl_(ctl) {}

  std::optional<Residual> operator()(double alpha, double beta) const {
    if (!(alpha > 0.0)) {
      return std::nullopt;
    }
    try {
      const MeanVariance mv = GeneralizedPoisson({lambda_, alpha, beta}, ctl_).mean_variance();
      const std::array<double, 2> r = {(mv.mean - target_.mean) / target_.mean,
                                       (mv.variance - target_.variance) / target_.variance};
      const double norm = std::hypot(r[0], r[1]);
      if (!std::isfinite(norm)) {
        return std::nullopt;
      }
      return Residual{r, norm};
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  const SeriesControl& series() const { return ctl_; }

 private:
  MeanVariance target_;
  double lambda_;
  SeriesControl ctl_;
};

struct NewtonOutcome {
  std::array<double, 2> x;
  double norm;
  unsigned iterations;
};

NewtonOutcome damped_newton(const MomentResidual& residual, std::array<double, 2> x,
                            const FitConfig& cfg) {
  std::optional<Residual> current = residual(x[0], x[1]);
  if (!current) {
    return {x, HUGE_VAL, 0};
  }
  unsigned it = 0;
  for (; it < cfg.max_iter && current->norm > cfg.tol; ++it) {
    // Forward-difference Jacobian, columns d r / d alpha and d r / d beta.
    std::array<std::array<double, 2>, 2> jac{};
    bool ok = true;
    for (std::size_t j = 0; j < 2 && ok; ++j) {
      std::array<double, 2> xh = x;
      const double h = kJacobianStep * std::max(std::abs(x[j]), 1.0);
      xh[j] += h;
      const auto rh = residual(xh[0], xh[1]);
      if (!rh) {
        ok = false;
        break;
      }
      for (std::size_t i = 0; i < 2; ++i) {
        jac[i][j] = (rh->r[i] - current->r[i]) / h;
      }
    }
    if (!ok) {
      break;
    }
    const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if (det == 0.0 || !std::isfinite(det)) {
      break;
    }
    const std::array<double, 2> step = {
        -(jac[1][1] * current->r[0] - jac[0][1] * current->r[1]) / det,
        -(-jac[1][0] * current->r[0] + jac[0][0] * current->r[1]) / det};
    bool accepted = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      const std::array<double, 2> trial = {x[0] + t * step[0], x[1] + t * step[1]};
      const auto rt = residual(trial[0], trial[1]);
      if (rt && rt->norm < current->norm) {
        x = trial;
        current = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      break;
    }
  }
  return {x, current->norm, it};
}

std::size_t mode_index(std::span<const double> probs) {
  return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

}  // namespace

void FitConfig::validate() const {
  if (k_range && k_range->first > k_range->second) {
    throw InvalidParams("fit k range must satisfy k_lo <= k_hi");
  }
  if (!(tol > 0.0)) {
    throw InvalidParams("fit tolerance must be positive");
  }
  if (max_iter == 0) {
    throw InvalidParams("fit max_iter must be positive");
  }
  if (weighting == FitWeighting::near_maximum && near_maximum_width == 0) {
    throw InvalidParams("near-maximum weighting needs a positive width");
  }
  series.validate();
}

PmfTarget make_target(const SfpdParams& target, const FitConfig& cfg) {
  PmfTarget out;
  out.lambda = target.lambda;
  if (cfg.k_range) {
    out.k_lo = cfg.k_range->first;
    out.probs = sfpd_pmf_range(target, cfg.k_range->first, cfg.k_range->second, cfg.series,
                               cfg.precision_digits);
  } else {
    PmfTable table = sfpd_pmf_table(target, kDefaultFitTailMass, cfg.series, cfg.precision_digits);
    out.k_lo = 0;
    out.probs = std::move(table.probs);
  }
  return out;
}

std::vector<double> fit_weights(const PmfTarget& target, const FitConfig& cfg) {
  std::vector<double> w(target.probs.size(), 1.0);
  if (cfg.weighting == FitWeighting::near_maximum) {
    const std::size_t mode = mode_index(target.probs);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t dist = i > mode ? i - mode : mode - i;
      w[i] = dist <= cfg.near_maximum_width ? 1.0 : 0.0;
    }
  }
  return w;
}

double least_squares_objective(const PmfTarget& target, std::span<const double> weights,
                               double alpha, double beta, const SeriesControl& ctl) {
  if (!(alpha > 0.0)) {
    return kFitPenalty;
  }
  try {
    const GeneralizedPoisson model({target.lambda, alpha, beta}, ctl);
    double sum = 0.0;
    for (std::size_t i = 0; i < target.probs.size(); ++i) {
      const double d = target.probs[i] - model.pmf(target.k_lo + i);
      sum += weights[i] * d * d;
    }
    return std::isfinite(sum) ? sum : kFitPenalty;
  } catch (const Error&) {
    return kFitPenalty;
  }
}

namespace {

bool on_plateau(const PmfTarget& target, std::span<const double> weights, double alpha,
                double beta, const SeriesControl& ctl) {
  double target_mass = 0.0;
  double model_mass = 0.0;
  try {
    const GeneralizedPoisson model({target.lambda, alpha, beta}, ctl);
    for (std::size_t i = 0; i < target.probs.size(); ++i) {
      if (weights[i] > 0.0) {
        target_mass += target.probs[i];
        model_mass += model.pmf(target.k_lo + i);
      }
    }
  } catch (const Error&) {
    return false;
  }
  return model_mass < kPlateauMassFraction * target_mass;
}

}  // namespace

FitResult fit_pmf_least_squares(const PmfTarget& target, const FitConfig& cfg) {
  cfg.validate();
  const std::vector<double> weights = fit_weights(target, cfg);
  const Objective objective = [&](std::span<const double> x) {
    return least_squares_objective(target, weights, x[0], x[1], cfg.series);
  };
  NelderMeadOptions opts;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  const std::array<double, 2> start = {cfg.alpha0, cfg.beta0};
  NelderMeadResult nm = nelder_mead(objective, start, kSimplexSteps, opts);

  FitResult out;
  out.method = FitMethod::least_squares;
  out.alpha = nm.best[0];
  out.beta = nm.best[1];
  out.objective = nm.value;
  out.iterations = static_cast<unsigned>(nm.iterations);
  out.converged = nm.converged && nm.value < kFitPenalty;
  out.objective_trace = std::move(nm.trace);
  if (!out.converged) {
    out.message = "simplex did not shrink below tol within " + std::to_string(cfg.max_iter) +
                  " iterations";
  } else if (on_plateau(target, weights, out.alpha, out.beta, cfg.series)) {
    out.converged = false;
    out.message = "stalled where the model has no mass on the k range; try another start";
  }
  return out;
}

FitResult fit_least_squares(const SfpdParams& target, const FitConfig& cfg) {
  cfg.validate();
  FitConfig run = cfg;
  if (cfg.seed_from_moments) {
    try {
      const FitResult seed = fit_moment_match(target, cfg);
      if (seed.converged) {
        run.alpha0 = seed.alpha;
        run.beta0 = seed.beta;
      }
    } catch (const Error&) {
      // Keep the configured start.
    }
  }
  return fit_pmf_least_squares(make_target(target, run), run);
}

FitResult match_moments(const MeanVariance& target, double lambda, const FitConfig& cfg) {
  cfg.validate();
  if (!(target.mean > 0.0) || !(target.variance > 0.0)) {
    throw InvalidParams("moment matching needs a positive target mean and variance");
  }
  const MomentResidual residual(target, lambda, cfg.series);
  NewtonOutcome best = damped_newton(residual, {cfg.alpha0, cfg.beta0}, cfg);
  unsigned iterations = best.iterations;
  std::string message;

  if (!(best.norm <= cfg.tol)) {
    SeriesControl coarse = cfg.series;
    coarse.max_terms = std::min(coarse.max_terms, kGridMaxTerms);
    const MomentResidual grid_residual(target, lambda, coarse);
    std::array<double, 2> grid_best{};
    double grid_norm = HUGE_VAL;
    const int n_alpha = static_cast<int>(std::round((kGridAlphaHi - kGridAlphaLo) / kGridAlphaStep));
    const int n_beta = static_cast<int>(std::round((kGridBetaHi - kGridBetaLo) / kGridBetaStep));
    for (int i = 0; i <= n_alpha; ++i) {
      const double a = kGridAlphaLo + i * kGridAlphaStep;
      for (int j = 0; j <= n_beta; ++j) {
        const double b = kGridBetaLo + j * kGridBetaStep;
        const auto r = grid_residual(a, b);
        if (r && r->norm < grid_norm) {
          grid_norm = r->norm;
          grid_best = {a, b};
        }
      }
    }
    if (std::isfinite(grid_norm)) {
      const NewtonOutcome refined = damped_newton(residual, grid_best, cfg);
      iterations += refined.iterations;
      if (refined.norm < best.norm) {
        best = refined;
      }
      message = "Newton from the initial point stalled; refined from grid point";
    }
  }

  FitResult out;
  out.method = FitMethod::moment_match;
  out.alpha = best.x[0];
  out.beta = best.x[1];
  out.objective = best.norm;
  out.iterations = iterations;
  out.converged = best.norm <= cfg.tol;
  if (!out.converged) {
    out.message = "no solution: moment residual " + std::to_string(best.norm) + " above tol";
  } else {
    out.message = std::move(message);
  }
  return out;
}

FitResult fit_moment_match(const SfpdParams& target, const FitConfig& cfg) {
  return match_moments(sfpd_mean_variance(target), target.lambda, cfg);
}

std::vector<Table1Row> fit_table1(double lambda, double nu, const FitConfig& cfg) {
  std::vector<Table1Row> rows;
  std::optional<std::array<double, 2>> warm;
  for (int i = 10; i >= 1; --i) {
    Table1Row row;
    row.alpha_s = i / 10.0;
    FitConfig row_cfg = cfg;
    row_cfg.method = FitMethod::least_squares;
    if (warm) {
      row_cfg.alpha0 = (*warm)[0];
      row_cfg.beta0 = (*warm)[1];
    } else {
      row_cfg.alpha0 = row.alpha_s;
      row_cfg.beta0 = 1.0;
    }
    try {
      row.result = fit_least_squares({row.alpha_s, nu, lambda}, row_cfg);
      warm = std::array<double, 2>{row.result->alpha, row.result->beta};
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mlpoisson
