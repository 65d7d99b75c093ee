#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "csv.hpp"
#include "json.hpp"
#include "uplink/analytic.hpp"
#include "uplink/distributions.hpp"
#include "uplink/errors.hpp"
#include "uplink/montecarlo.hpp"
#include "uplink/units.hpp"

namespace uplink::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  double lambda = 0.24;
  double lambda_b = 0.0;
  int k = 0;
  int l = 0;
  double p = 0.0;
  double alpha = 2.5;
  double epsilon = 1.0;
  double mu = 1.0;
  double sigma2 = 0.0;
  double t_min = -10.0;
  double t_max = 20.0;
  double t_step = 2.0;
  std::uint64_t seed = 1;
  long realizations = 20000;
  double window_radius = 0.0;
  double guard_fraction = 0.5;
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  int max_subdivisions = 200;
  double confidence = 0.99;
  std::string out;
  std::string figure;
  std::string model = "thinning";
  std::string convention = "ratio";
  std::string report;
  std::string dump_sinr;
  bool diagnostics = false;
  bool no_far_field = false;
  // pdf
  std::string family = "kth";
  bool empirical = false;
  double r_min = 0.0;
  double r_max = 0.0;
  int points = 100;
  double r_l = 0.0;
};

struct Case {
  int k;
  std::vector<int> orders;
};

// Figure presets: values applied to every option the user did not set.
struct Preset {
  std::string command;
  std::vector<Case> cases;
  std::map<std::string, std::string> values;
};

std::optional<Preset> find_preset(const std::string& name) {
  if (name == "fig3") return Preset{"pdf", {{4, {2}}}, {{"family", "joint"}, {"lambda", "0.24"}}};
  if (name == "fig4") return Preset{"pdf", {{50, {2}}}, {{"family", "joint"}, {"lambda", "0.24"}}};
  if (name == "fig5") {
    return Preset{"compare",
                  {{10, {1, 10}}, {25, {1, 25}}, {50, {1, 50}}},
                  {{"epsilon", "1"}, {"sigma2", "0"}, {"alpha", "2.5"}}};
  }
  if (name == "fig6") {
    return Preset{"compare", {{25, {1, 25}}}, {{"epsilon", "0.75"}, {"sigma2", "0"}, {"alpha", "2.5"}}};
  }
  if (name == "fig7") {
    return Preset{"compare", {{25, {1, 25}}}, {{"epsilon", "0"}, {"sigma2", "0"}, {"alpha", "2.5"}}};
  }
  if (name == "fig8") {
    return Preset{"pdf", {{25, {25}}}, {{"family", "rx"}, {"model", "voronoi"}, {"empirical", "true"}}};
  }
  if (name == "fig9") {
    return Preset{"pdf",
                  {{11, {1, 11}}},
                  {{"family", "kth"}, {"model", "voronoi"}, {"empirical", "true"}}};
  }
  return std::nullopt;
}

class UsageError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

std::vector<double> threshold_grid(const RunConfig& c) {
  if (!(c.t_step > 0.0)) throw UsageError("--t-step must be > 0");
  if (!(c.t_max >= c.t_min)) throw UsageError("--t-max must be >= --t-min");
  const auto n = static_cast<long>(std::floor((c.t_max - c.t_min) / c.t_step + 1e-9)) + 1;
  std::vector<double> grid;
  for (long i = 0; i < n; ++i) grid.push_back(c.t_min + static_cast<double>(i) * c.t_step);
  return grid;
}

quad::QuadratureSpec quadrature_of(const RunConfig& c) {
  quad::QuadratureSpec s{c.abs_tol, c.rel_tol, c.max_subdivisions};
  s.validate();
  return s;
}

SystemParams params_for(const RunConfig& c, int k) {
  SystemParams sp;
  sp.k = k;
  sp.lambda = c.lambda;
  if (c.convention == "caption") {
    // lambda_b stated directly; users scale up with k.
    sp.lambda = (c.lambda_b > 0.0 ? c.lambda_b : 0.24) * k;
  }
  sp.p = c.p > 0.0 ? c.p : 1.0 / k;
  sp.alpha = c.alpha;
  sp.epsilon = c.epsilon;
  sp.mu = c.mu;
  sp.noise = c.sigma2;
  sp.validate();
  return sp;
}

SimConfig sim_config_for(const RunConfig& c, const SystemParams& sp, Model model) {
  SimConfig s = SimConfig::defaults(model, sp);
  s.bs_intensity = c.convention == "caption" ? sp.lambda / sp.k : c.lambda_b;
  s.realizations = c.realizations;
  s.window = Window{{}, c.window_radius};
  s.guard_fraction = c.guard_fraction;
  s.seed = c.seed;
  s.far_field_correction = !c.no_far_field;
  s.validate();
  return s;
}

struct Context {
  RunConfig cfg;
  std::vector<Case> cases;
  std::ostream* csv = nullptr;
  std::ostream* err = nullptr;
  json report;
  std::vector<std::string> warnings;

  void warn(const std::string& w) {
    *err << "warning: " << w << '\n';
    warnings.push_back(w);
  }
};

void cmd_coverage(Context& ctx) {
  const auto thresholds = threshold_grid(ctx.cfg);
  const auto spec = quadrature_of(ctx.cfg);
  CsvWriter csv(*ctx.csv, {"threshold_db", "l", "k", "epsilon", "alpha", "lambda", "p", "sigma2",
                           "coverage"});
  json points = json::array();
  for (const Case& cs : ctx.cases) {
    const SystemParams sp = params_for(ctx.cfg, cs.k);
    for (int l : cs.orders) {
      const CoverageCurve curve = coverage_curve(l, cs.k, thresholds, sp, spec);
      for (std::size_t i = 0; i < thresholds.size(); ++i) {
        csv.row({thresholds[i], static_cast<long>(l), static_cast<long>(cs.k), sp.epsilon, sp.alpha,
                 sp.lambda, sp.p, sp.noise, curve.coverage[i]});
      }
      points.push_back({{"k", cs.k}, {"l", l}, {"points", thresholds.size()}});
    }
  }
  ctx.report["results"] = {{"curves", points}};
}

void record_run(Context& ctx, const RunReport& r, const std::string& label) {
  for (const auto& w : r.warnings) ctx.warn(label + ": " + w);
  ctx.report["simulations"].push_back({{"label", label},
                                       {"realizations", r.realizations},
                                       {"guard_rejections", r.rejected},
                                       {"rejection_rate", r.rejection_rate()}});
}

void cmd_simulate(Context& ctx) {
  const auto thresholds = threshold_grid(ctx.cfg);
  const Model model = parse_model(ctx.cfg.model);
  std::vector<std::string> header{"threshold_db", "l", "k", "model", "coverage",
                                  "ci_low", "ci_high", "realizations", "seed"};
  if (ctx.cfg.diagnostics) {
    header.push_back("mean_interferers");
    header.push_back("mean_bs_count");
  }
  CsvWriter csv(*ctx.csv, header);
  std::unique_ptr<std::ofstream> dump;
  std::unique_ptr<CsvWriter> dump_csv;
  if (!ctx.cfg.dump_sinr.empty()) {
    dump = std::make_unique<std::ofstream>(ctx.cfg.dump_sinr, std::ios::binary);
    if (!*dump) throw UsageError("cannot open --dump-sinr file " + ctx.cfg.dump_sinr);
    dump_csv = std::make_unique<CsvWriter>(
        *dump, std::vector<std::string>{"realization", "k", "l", "sinr", "interferers", "bs_count"});
  }
  for (const Case& cs : ctx.cases) {
    const SystemParams sp = params_for(ctx.cfg, cs.k);
    const SimConfig sim = sim_config_for(ctx.cfg, sp, model);
    const SimulatedCoverage run = simulate_coverage(sim, cs.orders, thresholds, ctx.cfg.confidence);
    record_run(ctx, run.report, std::string(model_name(model)) + " k=" + std::to_string(cs.k));
    double mean_int = 0.0;
    double mean_bs = 0.0;
    for (std::size_t i = 0; i < run.interferer_counts.size(); ++i) {
      mean_int += static_cast<double>(run.interferer_counts[i]);
      mean_bs += static_cast<double>(run.bs_counts[i]);
    }
    mean_int /= static_cast<double>(run.interferer_counts.size());
    mean_bs /= static_cast<double>(run.bs_counts.size());
    for (std::size_t o = 0; o < run.orders.size(); ++o) {
      const EmpiricalCurve& c = run.curves[o];
      for (std::size_t i = 0; i < thresholds.size(); ++i) {
        std::vector<CsvField> row{thresholds[i], static_cast<long>(run.orders[o]),
                                  static_cast<long>(cs.k), std::string(model_name(model)),
                                  c.coverage[i], c.ci_low[i], c.ci_high[i], c.realizations,
                                  std::to_string(ctx.cfg.seed)};
        if (ctx.cfg.diagnostics) {
          row.push_back(mean_int);
          row.push_back(mean_bs);
        }
        csv.row(row);
      }
      if (dump_csv) {
        for (std::size_t i = 0; i < run.sinr[o].size(); ++i) {
          dump_csv->row({static_cast<long>(i), static_cast<long>(cs.k),
                         static_cast<long>(run.orders[o]), run.sinr[o][i],
                         static_cast<long>(run.interferer_counts[i]),
                         static_cast<long>(run.bs_counts[i])});
        }
      }
    }
  }
}

void cmd_compare(Context& ctx) {
  const auto thresholds = threshold_grid(ctx.cfg);
  const auto spec = quadrature_of(ctx.cfg);
  CsvWriter csv(*ctx.csv, {"threshold_db", "l", "k", "epsilon", "analytic", "thinning",
                           "thinning_ci_low", "thinning_ci_high", "voronoi", "voronoi_ci_low",
                           "voronoi_ci_high"});
  json summary = json::array();
  for (const Case& cs : ctx.cases) {
    const SystemParams sp = params_for(ctx.cfg, cs.k);
    const SimulatedCoverage thin = simulate_coverage(
        sim_config_for(ctx.cfg, sp, Model::conditional_thinning), cs.orders, thresholds,
        ctx.cfg.confidence);
    record_run(ctx, thin.report, "thinning k=" + std::to_string(cs.k));
    const SimulatedCoverage voro = simulate_coverage(
        sim_config_for(ctx.cfg, sp, Model::realistic_voronoi), cs.orders, thresholds,
        ctx.cfg.confidence);
    record_run(ctx, voro.report, "voronoi k=" + std::to_string(cs.k));

    for (std::size_t o = 0; o < cs.orders.size(); ++o) {
      const int l = cs.orders[o];
      const CoverageCurve analytic = coverage_curve(l, cs.k, thresholds, sp, spec);
      const EmpiricalCurve& a = thin.curves[o];
      const EmpiricalCurve& b = voro.curves[o];
      double gap_thin = 0.0;
      double gap_voro = 0.0;
      long inside = 0;
      for (std::size_t i = 0; i < thresholds.size(); ++i) {
        const double v = analytic.coverage[i];
        csv.row({thresholds[i], static_cast<long>(l), static_cast<long>(cs.k), sp.epsilon, v,
                 a.coverage[i], a.ci_low[i], a.ci_high[i], b.coverage[i], b.ci_low[i],
                 b.ci_high[i]});
        gap_thin = std::max(gap_thin, std::abs(v - a.coverage[i]));
        gap_voro = std::max(gap_voro, std::abs(v - b.coverage[i]));
        if (v >= a.ci_low[i] && v <= a.ci_high[i]) ++inside;
      }
      const auto n = static_cast<long>(thresholds.size());
      summary.push_back({{"k", cs.k},
                         {"l", l},
                         {"max_abs_gap_thinning", gap_thin},
                         {"max_abs_gap_voronoi", gap_voro},
                         {"analytic_within_thinning_ci", inside == n},
                         {"thresholds_within_thinning_ci", inside},
                         {"thresholds", n}});
      *ctx.err << "summary k=" << cs.k << " l=" << l << ": max|analytic-thinning| = "
               << format_number(gap_thin) << ", analytic inside thinning CI at " << inside << "/"
               << n << " thresholds, max|analytic-voronoi| = " << format_number(gap_voro) << '\n';
    }
  }
  ctx.report["results"] = {{"summary", summary}};
}

// Realization-ordered samples gathered from a simulator.
template <typename Extract>
std::vector<std::vector<double>> gather(const SimConfig& sim, std::size_t columns, Extract extract,
                                        RunReport* report) {
  std::vector<std::vector<std::vector<double>>> per(static_cast<std::size_t>(sim.realizations));
  for_each_realization(
      sim,
      [&](std::size_t i, const CellRealization& r) {
        per[i].assign(columns, {});
        extract(r, per[i]);
      },
      report);
  std::vector<std::vector<double>> out(columns);
  for (auto& cols : per) {
    for (std::size_t c = 0; c < columns; ++c) out[c].insert(out[c].end(), cols[c].begin(), cols[c].end());
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int n, bool centers) {
  std::vector<double> g;
  if (centers) {
    const double h = (hi - lo) / n;
    for (int i = 0; i < n; ++i) g.push_back(lo + (i + 0.5) * h);
  } else {
    for (int i = 0; i < n; ++i) g.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  }
  return g;
}

void cmd_pdf(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (c.points < 1) throw UsageError("--points must be >= 1");
  if (c.r_min < 0.0) throw UsageError("--r-min must be >= 0");
  const Model model = parse_model(c.model);
  json families = json::array();

  for (const Case& cs : ctx.cases) {
    const SystemParams sp = params_for(c, cs.k);
    const double lp = sp.lambda * kPi;
    const auto finish_range = [&](double auto_max) {
      const double hi = c.r_max > 0.0 ? c.r_max : auto_max;
      if (!(hi > c.r_min)) throw UsageError("--r-max must exceed --r-min");
      return hi;
    };

    if (c.family == "rx") {
      const DistanceParams dp = sp.distances(cs.k);
      const double hi = finish_range(std::sqrt(12.0 / (sp.p * lp)));
      const auto grid = linear_grid(c.r_min, hi, c.points, c.empirical);
      std::vector<std::string> header{"r", "k", "pdf"};
      Histogram h;
      if (c.empirical) {
        header.push_back("empirical");
        RunReport rep;
        const auto samples = gather(
            sim_config_for(c, sp, model), 1,
            [](const CellRealization& r, std::vector<std::vector<double>>& out) {
              for (const auto& x : r.interferers) out[0].push_back(x.R_x);
            },
            &rep);
        record_run(ctx, rep, std::string(model_name(model)) + " R_x");
        h = empirical_pdf(samples[0], c.points, c.r_min, hi);
      }
      CsvWriter csv(*ctx.csv, header);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<CsvField> row{grid[i], static_cast<long>(cs.k), interferer_link_pdf(grid[i], dp)};
        if (c.empirical) row.push_back(h.density[i]);
        csv.row(row);
      }
    } else if (c.family == "kth") {
      const int top = *std::max_element(cs.orders.begin(), cs.orders.end());
      const double hi = finish_range(std::sqrt((top + 10.0 * std::sqrt(top) + 20.0) / lp));
      const auto grid = linear_grid(c.r_min, hi, c.points, c.empirical);
      std::vector<std::string> header{"r", "l", "k", "pdf"};
      std::vector<Histogram> hist;
      if (c.empirical) {
        header.push_back("empirical");
        RunReport rep;
        const auto orders = cs.orders;
        const auto samples = gather(
            sim_config_for(c, sp, model), orders.size(),
            [&orders](const CellRealization& r, std::vector<std::vector<double>>& out) {
              for (std::size_t o = 0; o < orders.size(); ++o) {
                out[o].push_back(r.user_distances[static_cast<std::size_t>(orders[o] - 1)]);
              }
            },
            &rep);
        record_run(ctx, rep, std::string(model_name(model)) + " R_l");
        for (const auto& s : samples) hist.push_back(empirical_pdf(s, c.points, c.r_min, hi));
      }
      CsvWriter csv(*ctx.csv, header);
      for (std::size_t o = 0; o < cs.orders.size(); ++o) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
          std::vector<CsvField> row{grid[i], static_cast<long>(cs.orders[o]), static_cast<long>(cs.k),
                                    kth_nearest_pdf(grid[i], cs.orders[o], sp.lambda)};
          if (c.empirical) row.push_back(hist[o].density[i]);
          csv.row(row);
        }
      }
    } else if (c.family == "joint") {
      const int l = cs.orders.front();
      if (l >= cs.k) throw UsageError("--family joint needs l < k");
      const DistanceParams dp = sp.distances(l);
      const double hi = finish_range(std::sqrt((cs.k + 8.0 * std::sqrt(cs.k) + 16.0) / lp));
      const auto grid = linear_grid(c.r_min, hi, c.points, c.empirical);
      std::vector<std::string> header{"r_l", "r_k", "l", "k", "pdf"};
      std::vector<double> density;
      if (c.empirical) {
        header.push_back("empirical");
        RunReport rep;
        const int k = cs.k;
        const auto samples = gather(
            sim_config_for(c, sp, model), 2,
            [l, k](const CellRealization& r, std::vector<std::vector<double>>& out) {
              out[0].push_back(r.user_distances[static_cast<std::size_t>(l - 1)]);
              out[1].push_back(r.user_distances[static_cast<std::size_t>(k - 1)]);
            },
            &rep);
        record_run(ctx, rep, std::string(model_name(model)) + " (R_l, R_k)");
        const double width = (hi - c.r_min) / c.points;
        density.assign(static_cast<std::size_t>(c.points) * c.points, 0.0);
        const double n = static_cast<double>(samples[0].size());
        for (std::size_t s = 0; s < samples[0].size(); ++s) {
          const double a = samples[0][s];
          const double b = samples[1][s];
          if (a < c.r_min || b < c.r_min || a > hi || b > hi) continue;
          const auto ia = std::min<long>(c.points - 1, static_cast<long>((a - c.r_min) / width));
          const auto ib = std::min<long>(c.points - 1, static_cast<long>((b - c.r_min) / width));
          density[static_cast<std::size_t>(ia * c.points + ib)] += 1.0 / (n * width * width);
        }
      }
      CsvWriter csv(*ctx.csv, header);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
          std::vector<CsvField> row{grid[i], grid[j], static_cast<long>(l), static_cast<long>(cs.k),
                                    joint_distance_pdf(grid[i], grid[j], dp)};
          if (c.empirical) row.push_back(density[i * grid.size() + j]);
          csv.row(row);
        }
      }
    } else if (c.family == "conditional") {
      if (c.empirical) throw UsageError("--empirical is not available for --family conditional");
      const int l = cs.orders.front();
      if (l >= cs.k) throw UsageError("--family conditional needs l < k");
      const DistanceParams dp = sp.distances(l);
      const double r_l = c.r_l > 0.0 ? c.r_l : std::sqrt(l / lp);
      const double auto_hi = std::sqrt(r_l * r_l + (cs.k - l + 8.0 * std::sqrt(cs.k - l) + 16.0) / lp);
      const double hi = finish_range(auto_hi);
      CsvWriter csv(*ctx.csv, {"r_k", "r_l", "l", "k", "pdf"});
      for (double r_k : linear_grid(std::max(c.r_min, r_l), hi, c.points, false)) {
        csv.row({r_k, r_l, static_cast<long>(l), static_cast<long>(cs.k),
                 conditional_kth_pdf(r_k, r_l, dp)});
      }
    } else {
      throw UsageError("--family must be one of rx|joint|kth|conditional");
    }
    families.push_back({{"family", c.family}, {"k", cs.k}, {"orders", cs.orders}});
  }
  ctx.report["results"] = {{"pdf", families}};
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream os;
  const auto num = [](double v) { return format_number(v); };
  // k and l stay unset when a preset supplied them.
  if (c.k > 0) os << "k=" << c.k << '\n';
  if (c.l > 0) os << "l=" << c.l << '\n';
  os << "lambda=" << num(c.lambda) << "\nlambda-b=" << num(c.lambda_b) << "\np=" << num(c.p)
     << "\nalpha=" << num(c.alpha)
     << "\nepsilon=" << num(c.epsilon) << "\nmu=" << num(c.mu) << "\nsigma2=" << num(c.sigma2)
     << "\nt-min=" << num(c.t_min) << "\nt-max=" << num(c.t_max) << "\nt-step=" << num(c.t_step)
     << "\nseed=" << c.seed << "\nrealizations=" << c.realizations
     << "\nwindow-radius=" << num(c.window_radius) << "\nguard-fraction=" << num(c.guard_fraction)
     << "\nabs-tol=" << num(c.abs_tol) << "\nrel-tol=" << num(c.rel_tol)
     << "\nmax-subdivisions=" << c.max_subdivisions << "\nconfidence=" << num(c.confidence)
     << "\nmodel=" << c.model << "\nbs-density-convention=" << c.convention
     << "\nfamily=" << c.family << "\nempirical=" << (c.empirical ? "true" : "false")
     << "\nr-min=" << num(c.r_min) << "\nr-max=" << num(c.r_max) << "\npoints=" << c.points
     << "\nr-l=" << num(c.r_l) << "\ndiagnostics=" << (c.diagnostics ? "true" : "false")
     << "\nno-far-field=" << (c.no_far_field ? "true" : "false") << '\n';
  if (!c.figure.empty()) os << "figure=" << c.figure << '\n';
  return os.str();
}

void build_app(CLI::App& app, RunConfig& c) {
  app.set_config("--config", "", "Flat key=value configuration file; flags override it");
  app.add_option("--lambda", c.lambda, "User PPP intensity");
  app.add_option("--lambda-b", c.lambda_b, "BS intensity for the Voronoi model (0 = lambda/k)");
  app.add_option("--k", c.k, "Resource groups / served users per cell");
  app.add_option("--l", c.l, "Order index of the user of interest");
  app.add_option("--p", c.p, "Thinning probability (0 = 1/k)");
  app.add_option("--alpha", c.alpha, "Path-loss exponent (> 2)");
  app.add_option("--epsilon", c.epsilon, "Fractional power-control factor in [0, 1]");
  app.add_option("--mu", c.mu, "Inverse mean of the fading power");
  app.add_option("--sigma2", c.sigma2, "Noise power");
  app.add_option("--t-min", c.t_min, "Lowest SINR threshold (dB)");
  app.add_option("--t-max", c.t_max, "Highest SINR threshold (dB)");
  app.add_option("--t-step", c.t_step, "Threshold step (dB)");
  app.add_option("--seed", c.seed, "Master seed");
  app.add_option("--realizations", c.realizations, "Monte Carlo realizations");
  app.add_option("--window-radius", c.window_radius, "Simulation window radius (0 = default)");
  app.add_option("--guard-fraction", c.guard_fraction, "Target-cell guard fraction (Voronoi)");
  app.add_option("--abs-tol", c.abs_tol, "Quadrature absolute tolerance");
  app.add_option("--rel-tol", c.rel_tol, "Quadrature relative tolerance");
  app.add_option("--max-subdivisions", c.max_subdivisions, "Quadrature subdivision limit");
  app.add_option("--confidence", c.confidence, "Confidence level of simulated intervals");
  app.add_option("--out", c.out, "CSV output path (default stdout)");
  app.add_option("--figure", c.figure, "Figure preset")
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"}));
  app.add_option("--model", c.model, "Simulator")->check(CLI::IsMember({"thinning", "voronoi"}));
  app.add_option("--bs-density-convention", c.convention,
                 "ratio: lambda_b = lambda/k; caption: lambda_b = --lambda-b (0.24), lambda = k lambda_b")
      ->check(CLI::IsMember({"ratio", "caption"}));
  app.add_option("--report", c.report, "Write a JSON run report here");
  app.add_option("--dump-sinr", c.dump_sinr, "simulate: per-realization SINR CSV");
  app.add_flag("--diagnostics", c.diagnostics, "simulate: add interferer / BS count columns");
  app.add_flag("--no-far-field", c.no_far_field, "Disable the beyond-window interference term");
  app.add_option("--family", c.family, "pdf: rx|joint|kth|conditional")
      ->check(CLI::IsMember({"rx", "joint", "kth", "conditional"}));
  app.add_flag("--empirical", c.empirical, "pdf: add a simulated histogram column");
  app.add_option("--r-min", c.r_min, "pdf: grid start");
  app.add_option("--r-max", c.r_max, "pdf: grid end (0 = automatic)");
  app.add_option("--points", c.points, "pdf: grid points (or bins with --empirical)");
  app.add_option("--r-l", c.r_l, "pdf conditional: conditioning distance r_l");

  app.add_subcommand("coverage", "Analytic coverage curve")->fallthrough();
  app.add_subcommand("simulate", "Simulated coverage curve")->fallthrough();
  app.add_subcommand("compare", "Analytic vs both simulators")->fallthrough();
  app.add_subcommand("pdf", "Distance densities")->fallthrough();
  app.require_subcommand(1);
}

// Fills option values from the preset for everything the user left unset,
// and returns the (k, l) cases to run.
std::vector<Case> resolve_cases(CLI::App& app, RunConfig& c) {
  std::vector<Case> cases;
  if (!c.figure.empty()) {
    const Preset preset = *find_preset(c.figure);
    if (preset.command != c.command) {
      throw UsageError("--figure " + c.figure + " belongs to the '" + preset.command + "' command");
    }
    for (const auto& [key, value] : preset.values) {
      if (app.count("--" + key) > 0) continue;
      if (key == "family") c.family = value;
      else if (key == "model") c.model = value;
      else if (key == "empirical") c.empirical = value == "true";
      else if (key == "lambda") c.lambda = std::stod(value);
      else if (key == "epsilon") c.epsilon = std::stod(value);
      else if (key == "sigma2") c.sigma2 = std::stod(value);
      else if (key == "alpha") c.alpha = std::stod(value);
    }
    for (Case cs : preset.cases) {
      if (app.count("--k") > 0 && cs.k != c.k) continue;
      if (app.count("--l") > 0) cs.orders = {c.l};
      cases.push_back(cs);
    }
    if (cases.empty() && app.count("--k") > 0) {
      cases.push_back({c.k, app.count("--l") > 0 ? std::vector<int>{c.l} : std::vector<int>{1, c.k}});
    }
    return cases;
  }

  if (c.command == "pdf" && c.family == "rx" && app.count("--k") == 0) c.k = 25;
  if (c.k < 1) throw UsageError("--k is required (or use --figure)");
  const bool needs_l = c.command == "coverage" || c.command == "simulate";
  if (needs_l && c.l < 1) throw UsageError("--l is required (or use --figure)");
  if (c.l > c.k) throw UsageError("--l must not exceed --k");
  if (c.l >= 1) {
    cases.push_back({c.k, {c.l}});
  } else if (c.command == "pdf" && (c.family == "joint" || c.family == "conditional")) {
    cases.push_back({c.k, {1}});
  } else if (c.command == "pdf") {
    cases.push_back({c.k, {c.k}});
  } else {
    cases.push_back({c.k, c.k > 1 ? std::vector<int>{1, c.k} : std::vector<int>{1}});
  }
  return cases;
}

int dispatch(CLI::App& app, RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  Context ctx;
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  ctx.cases = resolve_cases(app, cfg);
  ctx.cfg = cfg;
  ctx.err = &err;

  std::ostringstream buffer;
  ctx.csv = &buffer;
  ctx.report["command"] = cfg.command;
  ctx.report["config"] = echo_config(cfg);
  ctx.report["simulations"] = json::array();

  if (cfg.command == "coverage") cmd_coverage(ctx);
  else if (cfg.command == "simulate") cmd_simulate(ctx);
  else if (cfg.command == "compare") cmd_compare(ctx);
  else cmd_pdf(ctx);

  if (cfg.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw UsageError("cannot open --out file " + cfg.out);
    file << buffer.str();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  ctx.report["wall_clock_s"] = elapsed;
  ctx.report["warnings"] = ctx.warnings;
  if (!cfg.report.empty()) {
    std::ofstream file(cfg.report, std::ios::binary);
    if (!file) throw UsageError("cannot open --report file " + cfg.report);
    file << ctx.report.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uplink multi-user coverage: analytic model, simulators and figure data"};
  app.name("uplink-coverage");
  RunConfig cfg;
  build_app(app, cfg);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    return dispatch(app, cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConfigurationError& e) {
    err << "simulation configuration error: " << e.what() << '\n';
    return kExitSimulationConfig;
  } catch (const InsufficientSampleError& e) {
    err << "simulation configuration error: " << e.what() << '\n';
    return kExitSimulationConfig;
  } catch (const SamplingError& e) {
    err << "simulation configuration error: " << e.what() << '\n';
    return kExitSimulationConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace uplink::cli
