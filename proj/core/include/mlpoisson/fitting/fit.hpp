#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlpoisson/distributions/standard.hpp"
#include "mlpoisson/distributions/types.hpp"
#include "mlpoisson/mittag_leffler.hpp"

namespace mlpoisson {

enum class FitMethod { moment_match, least_squares };

enum class FitWeighting {
  uniform,
  /// Unit weight within +-near_maximum_width of the target mode, zero elsewhere.
  near_maximum,
};

/// Target tail mass used to pick the default upper end of the k range.
inline constexpr double kDefaultFitTailMass = 1e-8;

struct FitConfig {
  FitMethod method = FitMethod::least_squares;
  /// Inclusive k range of the least-squares objective. Unset means
  /// [0, k_hi] with k_hi the first index past which the target's tail
  /// mass drops below kDefaultFitTailMass.
  std::optional<std::pair<std::size_t, std::size_t>> k_range;
  FitWeighting weighting = FitWeighting::uniform;
  unsigned near_maximum_width = 3;
  double alpha0 = 1.0;
  double beta0 = 1.0;
  /// fit_least_squares only: start from the moment-matching solution
  /// (itself started at alpha0, beta0) when that converges.
  bool seed_from_moments = false;
  /// Simplex diameter for least squares; relative moment residual norm
  /// for moment matching.
  double tol = 1e-6;
  unsigned max_iter = 2000;
  SeriesControl series;
  unsigned precision_digits = kDefaultSfpdDigits;

  void validate() const;
};

struct FitResult {
  double alpha = 0.0;
  double beta = 0.0;
  /// Final weighted sum of squares, or moment residual norm.
  double objective = 0.0;
  unsigned iterations = 0;
  /// Least squares: simplex shrank below tol and the model carries mass on
  /// the fitted k range. Moment matching: residual norm below tol.
  bool converged = false;
  FitMethod method = FitMethod::least_squares;
  /// Best objective per Nelder-Mead iteration (least squares only).
  std::vector<double> objective_trace;
  std::string message;
};

/// A PMF restricted to k = k_lo..k_lo + probs.size() - 1.
struct PmfTarget {
  double lambda = 0.0;
  std::size_t k_lo = 0;
  std::vector<double> probs;
};

/// Target PMF of a standard fractional Poisson distribution over the
/// configured (or default) k range.
PmfTarget make_target(const SfpdParams& target, const FitConfig& cfg);

std::vector<double> fit_weights(const PmfTarget& target, const FitConfig& cfg);

/// Weighted sum of squared PMF differences against the generalized
/// distribution at (alpha, beta); 1e6 for alpha <= 0 or any
/// parameterization that fails to evaluate.
double least_squares_objective(const PmfTarget& target, std::span<const double> weights,
                               double alpha, double beta, const SeriesControl& ctl);

inline constexpr double kFitPenalty = 1e6;

/// Nelder-Mead least squares against an arbitrary target PMF. The initial
/// simplex sits at (alpha0, beta0) with edges (0.05, 1.0).
FitResult fit_pmf_least_squares(const PmfTarget& target, const FitConfig& cfg);

FitResult fit_least_squares(const SfpdParams& target, const FitConfig& cfg);

/// Solves mean/variance equality with the generalized distribution at the
/// same lambda: damped Newton with a forward-difference Jacobian, falling
/// back to a coarse (alpha, beta) grid when Newton stalls.
FitResult match_moments(const MeanVariance& target, double lambda, const FitConfig& cfg);

FitResult fit_moment_match(const SfpdParams& target, const FitConfig& cfg);

struct Table1Row {
  double alpha_s = 0.0;
  std::optional<FitResult> result;
  std::string error;
};

/// Least-squares fits for alpha_s = 1.0, 0.9, ..., 0.1, each warm-started
/// from the previous row's solution (the first from (alpha_s, 1)). Errors
/// are recorded per row.
std::vector<Table1Row> fit_table1(double lambda, double nu, const FitConfig& cfg);

}  // namespace mlpoisson
