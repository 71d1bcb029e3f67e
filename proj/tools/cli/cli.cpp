#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mlpoisson/distributions/generalized.hpp"
#include "mlpoisson/distributions/standard.hpp"
#include "mlpoisson/errors.hpp"
#include "mlpoisson/fitting/fit.hpp"
#include "output.hpp"

namespace mlpoisson::cli {

namespace {

constexpr double kDefaultMassTol = 1e-10;
constexpr double kFigureLambda = 5.0;
constexpr std::size_t kFigureKmax = 25;

struct GlobalOptions {
  std::string format = "csv";
  std::string output;
  int precision = kDefaultPrecision;
  double series_rtol = SeriesControl{}.rel_tol;
  std::size_t series_max_terms = SeriesControl{}.max_terms;

  SeriesControl series() const {
    SeriesControl ctl;
    ctl.rel_tol = series_rtol;
    ctl.max_terms = series_max_terms;
    ctl.validate();
    return ctl;
  }
};

struct PmfOptions {
  std::string dist;
  double lambda = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  std::optional<double> alpha_s;
  double nu = 1.0;
  std::optional<double> mass_tol;
  std::optional<std::size_t> kmax;
  unsigned digits = kDefaultSfpdDigits;
};

struct MomentOptions {
  double lambda = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  unsigned order = 2;
};

struct FitOptions {
  std::optional<double> alpha_s;
  double nu = 1.0;
  double lambda = 5.0;
  std::string method = "least-squares";
  std::string weighting = "uniform";
  unsigned width = 3;
  std::optional<std::size_t> k_lo;
  std::optional<std::size_t> k_hi;
  std::optional<double> alpha0;
  std::optional<double> beta0;
  double tol = 1e-6;
  unsigned max_iter = 2000;
  unsigned digits = kDefaultSfpdDigits;
  bool table1 = false;
};

struct FigureOptions {
  std::string which;
  std::size_t kmax = kFigureKmax;
};

// Thrown for argument combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data output plus the name of the operation running when a failure occurs.
struct Session {
  Document doc;
  std::string operation;
  const GlobalOptions& global;

  std::string num(double x) const { return format_number(x, global.precision); }
};

std::int64_t as_int(std::size_t k) { return static_cast<std::int64_t>(k); }

int cmd_pmf(Session& s, const PmfOptions& o) {
  const SeriesControl ctl = s.global.series();
  s.doc.meta("command", "pmf");
  s.doc.meta("distribution", o.dist);
  std::vector<double> probs;
  double tail = 0.0;
  if (o.dist == "gfpd") {
    s.doc.meta("lambda", s.num(o.lambda));
    s.doc.meta("alpha", s.num(o.alpha));
    s.doc.meta("beta", s.num(o.beta));
    s.operation = "generalized fractional Poisson PMF";
    const GeneralizedPoisson dist({o.lambda, o.alpha, o.beta}, ctl);
    if (o.kmax) {
      for (std::size_t k = 0; k <= *o.kmax; ++k) {
        probs.push_back(dist.pmf(k));
      }
      double mass = 0.0;
      for (double p : probs) {
        mass += p;
      }
      tail = std::max(0.0, 1.0 - mass);
    } else {
      PmfTable table = dist.pmf_table(o.mass_tol.value_or(kDefaultMassTol));
      probs = std::move(table.probs);
      tail = table.tail_mass_bound;
    }
  } else {
    if (!o.alpha_s) {
      throw UsageError("pmf sfpd requires --alpha-s");
    }
    const SfpdParams p{*o.alpha_s, o.nu, o.lambda};
    s.doc.meta("alpha_s", s.num(p.alpha_s));
    s.doc.meta("nu", s.num(p.nu));
    s.doc.meta("lambda", s.num(p.lambda));
    s.operation = "standard fractional Poisson PMF";
    if (o.kmax) {
      probs = sfpd_pmf_range(p, 0, *o.kmax, ctl, o.digits);
      double mass = 0.0;
      for (double q : probs) {
        mass += q;
      }
      tail = std::max(0.0, 1.0 - mass);
    } else {
      PmfTable table = sfpd_pmf_table(p, o.mass_tol.value_or(kDefaultMassTol), ctl, o.digits);
      probs = std::move(table.probs);
      tail = table.tail_mass_bound;
    }
  }
  s.doc.meta("k_max", std::to_string(probs.size() - 1));
  s.doc.meta("tail_mass_bound", s.num(tail));
  Table& t = s.doc.table("pmf", {"k", "p"});
  for (std::size_t k = 0; k < probs.size(); ++k) {
    t.add_row({as_int(k), probs[k]});
  }
  return kExitOk;
}

int cmd_moments(Session& s, const MomentOptions& o) {
  const SeriesControl ctl = s.global.series();
  const GfpdParams p{o.lambda, o.alpha, o.beta};
  s.doc.meta("command", "moments");
  s.doc.meta("lambda", s.num(p.lambda));
  s.doc.meta("alpha", s.num(p.alpha));
  s.doc.meta("beta", s.num(p.beta));
  s.operation = "generalized fractional Poisson raw moments";
  const GeneralizedPoisson dist(p, ctl);
  const MomentVector raw = dist.raw_moments(o.order);
  s.operation = "generalized fractional Poisson mean and variance";
  const MeanVariance mv = dist.mean_variance();

  Table& t = s.doc.table("moments", {"quantity", "value"});
  for (unsigned m = 0; m <= o.order; ++m) {
    t.add_row({"mu_" + std::to_string(m), raw.raw[m]});
  }
  t.add_row({std::string("mean"), mv.mean});
  t.add_row({std::string("variance"), mv.variance});
  try {
    const MeanVariance small = gfpd_asymptotic_moments(p, LambdaRegime::small_lambda);
    t.add_row({std::string("small_lambda_mean"), small.mean});
    t.add_row({std::string("small_lambda_variance"), small.variance});
  } catch (const InvalidParams& e) {
    s.doc.meta("small_lambda", e.what());
  }
  try {
    const MeanVariance large = gfpd_asymptotic_moments(p, LambdaRegime::large_lambda);
    t.add_row({std::string("large_lambda_mean"), large.mean});
    t.add_row({std::string("large_lambda_variance"), large.variance});
  } catch (const InvalidParams& e) {
    s.doc.meta("large_lambda", e.what());
  }
  return kExitOk;
}

FitConfig fit_config(const FitOptions& o, const SeriesControl& ctl) {
  FitConfig cfg;
  cfg.method = o.method == "moment-match" ? FitMethod::moment_match : FitMethod::least_squares;
  cfg.weighting = o.weighting == "near-maximum" ? FitWeighting::near_maximum : FitWeighting::uniform;
  cfg.near_maximum_width = o.width;
  if (o.k_lo || o.k_hi) {
    if (!o.k_hi) {
      throw UsageError("--k-lo needs --k-hi");
    }
    cfg.k_range = std::make_pair(o.k_lo.value_or(0), *o.k_hi);
  }
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.series = ctl;
  cfg.precision_digits = o.digits;
  cfg.validate();
  return cfg;
}

std::string method_name(FitMethod m) {
  return m == FitMethod::moment_match ? "moment-match" : "least-squares";
}

int cmd_fit_table1(Session& s, const FitOptions& o, const FitConfig& cfg) {
  if (cfg.method != FitMethod::least_squares) {
    throw UsageError("--table1 runs least-squares fits only");
  }
  s.doc.meta("command", "fit --table1");
  s.doc.meta("nu", s.num(o.nu));
  s.doc.meta("lambda", s.num(o.lambda));
  s.operation = "parameter table fit";
  const std::vector<Table1Row> rows = fit_table1(o.lambda, o.nu, cfg);
  Table& t = s.doc.table("table1", {"alpha_s", "alpha", "beta", "objective", "iterations",
                                    "converged", "message"});
  bool all_converged = true;
  for (const Table1Row& row : rows) {
    if (row.result) {
      const FitResult& r = *row.result;
      t.add_row({row.alpha_s, r.alpha, r.beta, r.objective, static_cast<std::int64_t>(r.iterations),
                 r.converged, r.message});
      all_converged = all_converged && r.converged;
    } else {
      t.add_row({row.alpha_s, {}, {}, {}, {}, false, row.error});
      all_converged = false;
    }
  }
  return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_fit(Session& s, const FitOptions& o) {
  FitConfig cfg = fit_config(o, s.global.series());
  if (o.table1) {
    return cmd_fit_table1(s, o, cfg);
  }
  if (!o.alpha_s) {
    throw UsageError("fit requires --alpha-s (or --table1)");
  }
  const SfpdParams target{*o.alpha_s, o.nu, o.lambda};
  cfg.alpha0 = o.alpha0.value_or(target.alpha_s);
  cfg.beta0 = o.beta0.value_or(1.0);
  cfg.seed_from_moments = !o.alpha0 && !o.beta0;
  s.doc.meta("command", "fit");
  s.doc.meta("alpha_s", s.num(target.alpha_s));
  s.doc.meta("nu", s.num(target.nu));
  s.doc.meta("lambda", s.num(target.lambda));
  s.doc.meta("method", method_name(cfg.method));

  s.operation = "fit (" + method_name(cfg.method) + ")";
  const FitResult r = cfg.method == FitMethod::moment_match ? fit_moment_match(target, cfg)
                                                             : fit_least_squares(target, cfg);
  Table& res = s.doc.table("fit", {"alpha_s", "method", "alpha", "beta", "objective", "iterations",
                                   "converged", "message"});
  res.add_row({target.alpha_s, method_name(r.method), r.alpha, r.beta, r.objective,
               static_cast<std::int64_t>(r.iterations), r.converged, r.message});

  s.operation = "residual table";
  const PmfTarget pmf = make_target(target, cfg);
  Table& t = s.doc.table("residuals", {"k", "p_standard", "p_generalized", "residual"});
  try {
    const GeneralizedPoisson model({target.lambda, r.alpha, r.beta}, cfg.series);
    for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
      const std::size_t k = pmf.k_lo + i;
      const double q = model.pmf(k);
      t.add_row({as_int(k), pmf.probs[i], q, pmf.probs[i] - q});
    }
  } catch (const InvalidDistribution& e) {
    s.doc.meta("residuals", std::string("unavailable: ") + e.what());
  }
  s.operation = "fit (" + method_name(cfg.method) + ")";
  return r.converged ? kExitOk : kExitNotConverged;
}

void figure_fig1(Session& s, const FigureOptions& o, const SeriesControl& ctl) {
  Table& t = s.doc.table("fig1", {"alpha", "k", "p"});
  for (int i = 0; i <= 20; ++i) {
    const double alpha = (150 - 5 * i) / 100.0;
    s.operation = "fig1 slice alpha=" + s.num(alpha);
    const GeneralizedPoisson dist({kFigureLambda, alpha, 1.0}, ctl);
    for (std::size_t k = 0; k <= o.kmax; ++k) {
      t.add_row({alpha, as_int(k), dist.pmf(k)});
    }
  }
}

void figure_fig2(Session& s, const FigureOptions& o, const SeriesControl& ctl, std::ostream& err) {
  Table& t = s.doc.table("fig2", {"beta", "k", "p", "warning"});
  // The 0.4-step sweep skips beta = 1, the classical reference curve; it is
  // added as an extra slice.
  std::vector<double> betas;
  for (int i = 0; i <= 20; ++i) {
    betas.push_back((40 - 4 * i) / 10.0);
  }
  betas.insert(std::find_if(betas.begin(), betas.end(), [](double b) { return b < 1.0; }), 1.0);
  for (const double beta : betas) {
    s.operation = "fig2 slice beta=" + s.num(beta);
    try {
      const GeneralizedPoisson dist({kFigureLambda, 1.0, beta}, ctl);
      for (std::size_t k = 0; k <= o.kmax; ++k) {
        t.add_row({beta, as_int(k), dist.pmf(k), std::string()});
      }
    } catch (const InvalidDistribution& e) {
      const std::string warning = "skipped: negative weight at k=" +
                                  std::to_string(e.first_negative_k());
      err << "warning: fig2 beta=" << s.num(beta) << ' ' << warning << '\n';
      t.add_row({beta, {}, {}, warning});
    }
  }
}

void figure_fig3(Session& s, const FigureOptions& o, const SeriesControl& ctl) {
  FitConfig cfg;
  cfg.series = ctl;
  s.operation = "fig3 parameter table fit";
  const std::vector<Table1Row> rows = fit_table1(kFigureLambda, 1.0, cfg);
  Table& t = s.doc.table("fig3", {"alpha_s", "k", "p_standard", "p_generalized"});
  for (const Table1Row& row : rows) {
    s.operation = "fig3 slice alpha_s=" + s.num(row.alpha_s);
    if (!row.result) {
      throw NonConvergence(row.error);
    }
    s.doc.meta("fit_alpha_s_" + s.num(row.alpha_s),
               s.num(row.result->alpha) + " " + s.num(row.result->beta));
    const std::vector<double> target =
        sfpd_pmf_range({row.alpha_s, 1.0, kFigureLambda}, 0, o.kmax, ctl);
    const GeneralizedPoisson model({kFigureLambda, row.result->alpha, row.result->beta}, ctl);
    for (std::size_t k = 0; k <= o.kmax; ++k) {
      t.add_row({row.alpha_s, as_int(k), target[k], model.pmf(k)});
    }
  }
}

// One-line matplotlib recipe for the CSV written to <which>.csv.
std::string plot_recipe(const std::string& which) {
  const std::string head = "python3 -c \"import pandas as pd, matplotlib.pyplot as plt; d = pd.read_csv('" +
                           which + ".csv', comment='#'); ";
  const std::string tail = "plt.xlabel('k'); plt.savefig('" + which + ".png')\"";
  if (which == "fig3") {
    return head +
           "[(plt.plot(g.k, g.p_standard, 'o'), plt.plot(g.k, g.p_generalized)) for _, g in "
           "d.groupby('alpha_s')]; " + tail;
  }
  const std::string key = which == "fig1" ? "alpha" : "beta";
  return head + "[plt.plot(g.k, g.p) for _, g in d.dropna(subset=['p']).groupby('" + key +
         "')]; " + tail;
}

int cmd_figure(Session& s, const FigureOptions& o, std::ostream& err) {
  const SeriesControl ctl = s.global.series();
  s.doc.meta("command", "figure");
  s.doc.meta("figure", o.which);
  s.doc.meta("lambda", s.num(kFigureLambda));
  s.doc.meta("nu", "1");
  s.doc.meta("plot", plot_recipe(o.which));
  if (o.which == "fig1") {
    figure_fig1(s, o, ctl);
  } else if (o.which == "fig2") {
    figure_fig2(s, o, ctl, err);
  } else {
    figure_fig3(s, o, ctl);
  }
  return kExitOk;
}

std::optional<int> env_precision(std::ostream& err) {
  const char* env = std::getenv("ML_POISSON_PRECISION");
  if (env == nullptr || *env == '\0') {
    return std::nullopt;
  }
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < kMinPrecision || v > kMaxPrecision) {
    err << "error: ML_POISSON_PRECISION must be an integer in [" << kMinPrecision << ", "
        << kMaxPrecision << "], got '" << env << "'\n";
    return -1;
  }
  return static_cast<int>(v);
}

bool has_rows(const Document& doc) {
  return std::any_of(doc.tables.begin(), doc.tables.end(),
                     [](const Table& t) { return !t.rows.empty(); });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  GlobalOptions global;
  if (const auto env = env_precision(err)) {
    if (*env < 0) {
      return kExitBadArguments;
    }
    global.precision = *env;
  }

  CLI::App app{"Generalized fractional Poisson distributions: PMFs, moments, fits, figure data",
               "mlpoisson"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("-o,--output", global.output, "Output file (default: standard output)");
  app.add_option("--precision", global.precision,
                 "Printed significant digits (default 10, or ML_POISSON_PRECISION)")
      ->check(CLI::Range(kMinPrecision, kMaxPrecision));
  app.add_option("--series-rtol", global.series_rtol, "Series truncation tolerance")
      ->capture_default_str();
  app.add_option("--series-max-terms", global.series_max_terms, "Series term limit")
      ->capture_default_str();

  PmfOptions pmf_opt;
  CLI::App* pmf = app.add_subcommand("pmf", "Probability mass function table");
  pmf->add_option("dist", pmf_opt.dist, "gfpd or sfpd")
      ->required()
      ->check(CLI::IsMember({"gfpd", "sfpd"}));
  pmf->add_option("--lambda", pmf_opt.lambda, "lambda")->required();
  pmf->add_option("--alpha", pmf_opt.alpha, "alpha (gfpd)")->capture_default_str();
  pmf->add_option("--beta", pmf_opt.beta, "beta (gfpd)")->capture_default_str();
  pmf->add_option("--alpha-s", pmf_opt.alpha_s, "alpha_s in (0, 1] (sfpd)");
  pmf->add_option("--nu", pmf_opt.nu, "nu (sfpd)")->capture_default_str();
  auto* mass_tol = pmf->add_option("--mass-tol", pmf_opt.mass_tol,
                                   "Stop once the remaining mass is below this (default 1e-10)");
  auto* kmax = pmf->add_option("--kmax", pmf_opt.kmax, "Fixed last k");
  mass_tol->excludes(kmax);
  pmf->add_option("--digits", pmf_opt.digits, "Starting decimal digits of the sfpd evaluation")
      ->capture_default_str();

  MomentOptions mom_opt;
  CLI::App* moments = app.add_subcommand("moments", "Raw moments, mean, variance, asymptotics");
  moments->add_option("--lambda", mom_opt.lambda, "lambda")->required();
  moments->add_option("--alpha", mom_opt.alpha, "alpha")->capture_default_str();
  moments->add_option("--beta", mom_opt.beta, "beta")->capture_default_str();
  moments->add_option("-n,--order", mom_opt.order, "Highest moment order")
      ->check(CLI::Range(1u, kMaxDerivativeOrder))
      ->capture_default_str();

  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand("fit", "Fit (alpha, beta) to a standard fractional Poisson target");
  fit->add_option("--alpha-s", fit_opt.alpha_s, "Target alpha_s in (0, 1]");
  fit->add_option("--nu", fit_opt.nu, "Target nu")->capture_default_str();
  fit->add_option("--lambda", fit_opt.lambda, "lambda")->capture_default_str();
  fit->add_option("--method", fit_opt.method, "Fit method")
      ->check(CLI::IsMember({"least-squares", "moment-match"}))
      ->capture_default_str();
  fit->add_option("--weighting", fit_opt.weighting, "Least-squares weights")
      ->check(CLI::IsMember({"uniform", "near-maximum"}))
      ->capture_default_str();
  fit->add_option("--width", fit_opt.width, "Half width of the near-maximum window")
      ->capture_default_str();
  fit->add_option("--k-lo", fit_opt.k_lo, "First k of the least-squares range");
  fit->add_option("--k-hi", fit_opt.k_hi, "Last k of the least-squares range");
  fit->add_option("--alpha0", fit_opt.alpha0,
                  "Initial alpha (default: the moment-matching solution, else alpha_s)");
  fit->add_option("--beta0", fit_opt.beta0,
                  "Initial beta (default: the moment-matching solution, else 1)");
  fit->add_option("--tol", fit_opt.tol, "Convergence tolerance")->capture_default_str();
  fit->add_option("--max-iter", fit_opt.max_iter, "Iteration limit")->capture_default_str();
  fit->add_option("--digits", fit_opt.digits, "Starting decimal digits of the sfpd evaluation")
      ->capture_default_str();
  fit->add_flag("--table1", fit_opt.table1, "Fit alpha_s = 1.0, 0.9, ..., 0.1");

  FigureOptions fig_opt;
  CLI::App* figure = app.add_subcommand("figure", "Data behind the distribution figures");
  figure->add_option("which", fig_opt.which, "fig1, fig2 or fig3")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  figure->add_option("--kmax", fig_opt.kmax, "Last k of every slice")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, out, err);
    }
    err << "error: " << e.what() << "\n\n";
    const auto parsed = app.get_subcommands();
    err << (parsed.empty() ? app.help() : parsed.front()->help());
    return kExitBadArguments;
  }

  Session session{{}, "argument check", global};
  int code = kExitOk;
  try {
    if (pmf->parsed()) {
      code = cmd_pmf(session, pmf_opt);
    } else if (moments->parsed()) {
      code = cmd_moments(session, mom_opt);
    } else if (fit->parsed()) {
      code = cmd_fit(session, fit_opt);
    } else {
      code = cmd_figure(session, fig_opt, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return kExitBadArguments;
  } catch (const InvalidParams& e) {
    err << "error: " << session.operation << ": invalid parameters: " << e.what() << '\n';
    return kExitBadArguments;
  } catch (const InvalidDistribution& e) {
    err << "error: " << session.operation << ": " << e.what() << '\n';
    return kExitBadArguments;
  } catch (const std::exception& e) {
    err << "error: " << session.operation << " failed: " << e.what() << '\n';
    code = kExitNumericalFailure;
    if (!has_rows(session.doc)) {
      return code;
    }
    session.doc.error = session.operation + " failed: " + e.what();
  }

  const OutputSpec spec{global.format == "json" ? Format::json : Format::csv, global.output,
                        global.precision};
  if (spec.path.empty()) {
    write(session.doc, spec, out);
  } else {
    std::ofstream file(spec.path);
    if (!file) {
      err << "error: cannot open output file " << spec.path << '\n';
      return kExitBadArguments;
    }
    write(session.doc, spec, file);
    if (!file) {
      err << "error: writing " << spec.path << " failed\n";
      return kExitNumericalFailure;
    }
  }
  if (code == kExitNotConverged) {
    err << "warning: " << session.operation << " did not converge\n";
  }
  return code;
}

}  // namespace mlpoisson::cli
