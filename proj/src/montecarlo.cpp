#include "uplink/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "uplink/errors.hpp"
#include "uplink/parallel.hpp"
#include "uplink/statistics.hpp"
#include "uplink/units.hpp"
#include "uplink/voronoi.hpp"

namespace uplink {

std::string_view model_name(Model m) {
  return m == Model::conditional_thinning ? "thinning" : "voronoi";
}

Model parse_model(std::string_view name) {
  if (name == "thinning" || name == "conditional_thinning") return Model::conditional_thinning;
  if (name == "voronoi" || name == "realistic_voronoi") return Model::realistic_voronoi;
  throw ParameterError("unknown model '" + std::string(name) + "' (expected thinning|voronoi)");
}

double default_window_radius(Model model, const SystemParams& params, double bs_intensity) {
  if (model == Model::conditional_thinning) {
    return kThinningWindowUnits / std::sqrt(params.p * params.lambda * kPi);
  }
  return kVoronoiWindowUnits / std::sqrt(bs_intensity * kPi);
}

SimConfig SimConfig::defaults(Model model, const SystemParams& params) {
  SimConfig c;
  c.model = model;
  c.params = params;
  return c;
}

double SimConfig::effective_bs_intensity() const {
  return bs_intensity > 0.0 ? bs_intensity : params.lambda / params.k;
}

double SimConfig::effective_window_radius() const {
  return window.radius > 0.0 ? window.radius
                             : default_window_radius(model, params, effective_bs_intensity());
}

void SimConfig::validate() const {
  params.validate();
  if (realizations < 1) throw ParameterError("realizations must be >= 1");
  if (!(guard_fraction > 0.0 && guard_fraction < 1.0)) {
    throw ParameterError("guard_fraction must lie in (0, 1)");
  }
  if (bs_intensity < 0.0 || !std::isfinite(bs_intensity)) {
    throw ParameterError("bs_intensity must be >= 0 (0 selects lambda / k)");
  }
  if (window.radius < 0.0 || !std::isfinite(window.radius)) {
    throw ParameterError("window radius must be >= 0 (0 selects the default)");
  }
  if (window.center.x != 0.0 || window.center.y != 0.0) {
    throw ParameterError("the simulation window must be centered at the target BS (origin)");
  }
}

double RunReport::rejection_rate() const {
  const long attempts = realizations + rejected;
  return attempts > 0 ? static_cast<double>(rejected) / static_cast<double>(attempts) : 0.0;
}

double total_interference(const CellRealization& r, const SystemParams& params) {
  const double ae = params.alpha * params.epsilon;
  double sum = r.far_field_interference;
  for (const auto& x : r.interferers) {
    sum += x.G_x * std::pow(x.R_x, ae) * std::pow(x.D_x, -params.alpha);
  }
  return sum;
}

double sinr_lth(const CellRealization& r, int l, const SystemParams& params, double interference) {
  if (l < 1 || static_cast<std::size_t>(l) > r.user_distances.size()) {
    throw ParameterError("sinr_lth: l must satisfy 1 <= l <= k");
  }
  const double denom = interference + params.noise;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  const auto i = static_cast<std::size_t>(l - 1);
  const double signal =
      r.user_fading[i] * std::pow(r.user_distances[i], params.alpha * (params.epsilon - 1.0));
  return signal / denom;
}

double sinr_lth(const CellRealization& r, int l, const SystemParams& params) {
  return sinr_lth(r, l, params, total_interference(r, params));
}

namespace {

// Mean interference of a PPP of interferers with density rho beyond radius R,
// sum E[G] E[R_x^{alpha eps}] D^{-alpha} integrated over the exterior.
double far_field_mean(double rho, double mean_tx_power, double radius, double alpha) {
  return 2.0 * kPi * rho * mean_tx_power * std::pow(radius, 2.0 - alpha) / (alpha - 2.0);
}

void append_annulus(std::vector<Point>& out, double intensity, double r_in, double r_out, Rng& rng) {
  std::poisson_distribution<long> count(intensity * kPi * (r_out * r_out - r_in * r_in));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const long n = count(rng);
  for (long i = 0; i < n; ++i) {
    const double r = std::sqrt(r_in * r_in + unit(rng) * (r_out * r_out - r_in * r_in));
    const double theta = 2.0 * kPi * unit(rng);
    out.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
}

}  // namespace

CellRealization draw_thinning_realization(const SimConfig& config, std::uint64_t index) {
  const SystemParams& sp = config.params;
  const double radius = config.effective_window_radius();
  const double lambda = sp.lambda;
  const int k = sp.k;
  Rng rng = make_stream(config.seed, index);

  // The full-intensity PPP is only needed out to the k-th point. Grow a disc
  // until it holds k points; beyond it the p-thinned PPP is drawn directly at
  // intensity p * lambda, which has the same law as thinning the full one.
  double inner = std::min(radius, std::sqrt((k + 6.0 * std::sqrt(k) + 10.0) / (lambda * kPi)));
  PppSample sample = sample_ppp(lambda, Window{{}, inner}, rng);
  while (sample.points.size() < static_cast<std::size_t>(k)) {
    if (inner >= radius) {
      std::ostringstream os;
      os << "window radius " << radius << " is too small for k = " << k
         << "; use at least " << 2.0 * std::sqrt(k / (lambda * kPi));
      throw ConfigurationError(os.str());
    }
    const double outer = std::min(radius, 2.0 * inner);
    append_annulus(sample.points, lambda, inner, outer, rng);
    inner = outer;
  }
  sample.window.radius = inner;
  ThinnedPartition part = conditional_thin(sample, k, sp.p, rng);
  append_annulus(part.interferers, sp.p * lambda, inner, radius, rng);

  std::exponential_distribution<double> fading(sp.mu);
  std::exponential_distribution<double> unit_exp(1.0);
  const double a = sp.p * lambda * kPi;

  CellRealization out;
  out.user_distances = ordered_distances(part.nearest_k);
  out.user_fading.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out.user_fading.push_back(fading(rng));
  out.interferers.reserve(part.interferers.size());
  for (const Point& x : part.interferers) {
    InterfererRecord rec;
    rec.D_x = distance(x, {});
    rec.R_x = std::sqrt(unit_exp(rng) / a);  // Rayleigh link distance
    rec.G_x = fading(rng);
    out.interferers.push_back(rec);
  }
  if (config.far_field_correction) {
    const double ae = sp.alpha * sp.epsilon;
    // E[R_x^{alpha eps}] for the Rayleigh law.
    const double moment = std::tgamma(1.0 + ae / 2.0) * std::pow(a, -ae / 2.0);
    out.far_field_interference = far_field_mean(sp.p * lambda, moment / sp.mu, radius, sp.alpha);
  }
  return out;
}

CellRealization draw_voronoi_realization(const SimConfig& config, std::uint64_t index,
                                         long* rejected) {
  constexpr int kMaxAttempts = 1000;
  constexpr int kMaxInterfererProposals = 10000;
  const SystemParams& sp = config.params;
  const double radius = config.effective_window_radius();
  const double lambda_b = config.effective_bs_intensity();
  const Window window{{}, radius};
  const double guard = config.guard_fraction * radius;
  long misses = 0;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng = make_stream(config.seed, index, static_cast<std::uint64_t>(attempt));
    // Target BS at the origin plus an independent PPP: by Slivnyak's theorem
    // the origin's cell is then a typical cell.
    std::vector<Point> bss{{0.0, 0.0}};
    const PppSample others = sample_ppp(lambda_b, window, rng);
    bss.insert(bss.end(), others.points.begin(), others.points.end());
    const VoronoiDiagram diagram(bss, {0.0, 0.0}, radius);

    const ConvexPolygon target = diagram.cell(0);
    if (target.empty() || target.max_distance_from({}) > guard) {
      ++misses;
      continue;
    }

    std::exponential_distribution<double> fading(sp.mu);
    CellRealization out;
    out.bs_count = bss.size();
    std::vector<Point> users;
    users.reserve(static_cast<std::size_t>(sp.k));
    for (int i = 0; i < sp.k; ++i) users.push_back(target.sample_uniform(rng));
    out.user_distances = ordered_distances(users);
    for (int i = 0; i < sp.k; ++i) out.user_fading.push_back(fading(rng));

    const double ae = sp.alpha * sp.epsilon;
    double power_sum = 0.0;
    out.interferers.reserve(bss.size() - 1);
    for (std::size_t j = 1; j < bss.size(); ++j) {
      const ConvexPolygon cell = diagram.cell(j);
      Point x{};
      int tries = 0;
      do {
        if (++tries > kMaxInterfererProposals) {
          throw SamplingError("interfering cell does not meet the window", tries);
        }
        x = cell.sample_uniform(rng);
      } while (!window.contains(x));
      InterfererRecord rec;
      rec.R_x = distance(x, bss[j]);
      rec.D_x = distance(x, {});
      rec.G_x = fading(rng);
      power_sum += std::pow(rec.R_x, ae);
      out.interferers.push_back(rec);
    }
    if (config.far_field_correction && !out.interferers.empty()) {
      // Transmit-power moment taken from this realization's own interferers.
      const double moment = power_sum / static_cast<double>(out.interferers.size());
      out.far_field_interference = far_field_mean(lambda_b, moment / sp.mu, radius, sp.alpha);
    }
    if (rejected) *rejected = misses;
    return out;
  }
  std::ostringstream os;
  os << "no target cell fits inside the guard region after " << kMaxAttempts
     << " attempts; enlarge the window or the guard fraction";
  throw ConfigurationError(os.str());
}

void for_each_realization(const SimConfig& config,
                          const std::function<void(std::size_t, const CellRealization&)>& visit,
                          RunReport* report) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.realizations);
  std::vector<long> misses(n, 0);
  parallel_for(
      n,
      [&](std::size_t i) {
        if (config.model == Model::conditional_thinning) {
          visit(i, draw_thinning_realization(config, i));
        } else {
          visit(i, draw_voronoi_realization(config, i, &misses[i]));
        }
      },
      config.threads);
  if (report) {
    report->realizations = config.realizations;
    report->rejected = 0;
    for (long m : misses) report->rejected += m;
    if (report->rejection_rate() > 0.5) {
      std::ostringstream os;
      os << "guard-band rejection rate " << report->rejection_rate()
         << " exceeds 50%; consider a larger window or guard fraction";
      report->warnings.push_back(os.str());
    }
    if (config.realizations < 2) {
      report->warnings.push_back("fewer than two realizations: confidence intervals are degenerate");
    }
  }
}

namespace {

std::vector<CellRealization> run_all(const SimConfig& config, RunReport* report) {
  std::vector<CellRealization> out(static_cast<std::size_t>(config.realizations));
  for_each_realization(
      config, [&](std::size_t i, const CellRealization& r) { out[i] = r; }, report);
  return out;
}

}  // namespace

std::vector<CellRealization> run_conditional_thinning(const SimConfig& config, RunReport* report) {
  if (config.model != Model::conditional_thinning) {
    throw ParameterError("run_conditional_thinning: config selects another model");
  }
  return run_all(config, report);
}

std::vector<CellRealization> run_realistic_voronoi(const SimConfig& config, RunReport* report) {
  if (config.model != Model::realistic_voronoi) {
    throw ParameterError("run_realistic_voronoi: config selects another model");
  }
  return run_all(config, report);
}

EmpiricalCurve coverage_from_sinr(std::span<const double> sinr, std::span<const double> thresholds_db,
                                  double confidence) {
  if (sinr.empty()) throw ParameterError("empirical coverage needs at least one realization");
  const auto n = static_cast<long>(sinr.size());
  std::vector<double> sorted(sinr.begin(), sinr.end());
  std::sort(sorted.begin(), sorted.end());

  EmpiricalCurve curve;
  curve.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
  curve.realizations = n;
  curve.confidence = confidence;
  curve.degenerate_ci = n < 2;
  for (double db : thresholds_db) {
    const double t = db_to_linear(db);
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    const double p_hat = static_cast<double>(above) / static_cast<double>(n);
    const stats::Interval ci = (p_hat == 0.0 || p_hat == 1.0)
                                   ? stats::wilson_interval(p_hat, n, confidence)
                                   : stats::normal_interval(p_hat, n, confidence);
    curve.coverage.push_back(p_hat);
    curve.ci_low.push_back(std::min(ci.low, p_hat));
    curve.ci_high.push_back(std::max(ci.high, p_hat));
  }
  return curve;
}

EmpiricalCurve empirical_coverage(std::span<const CellRealization> realizations, int l,
                                  std::span<const double> thresholds_db, const SystemParams& params,
                                  double confidence) {
  std::vector<double> sinr;
  sinr.reserve(realizations.size());
  for (const auto& r : realizations) sinr.push_back(sinr_lth(r, l, params));
  return coverage_from_sinr(sinr, thresholds_db, confidence);
}

SimulatedCoverage simulate_coverage(const SimConfig& config, std::span<const int> orders,
                                    std::span<const double> thresholds_db, double confidence) {
  for (int l : orders) {
    if (l < 1 || l > config.params.k) throw ParameterError("simulate: l must satisfy 1 <= l <= k");
  }
  SimulatedCoverage out;
  out.orders.assign(orders.begin(), orders.end());
  const auto n = static_cast<std::size_t>(config.realizations);
  out.sinr.assign(orders.size(), std::vector<double>(n, 0.0));
  out.interferer_counts.assign(n, 0);
  out.bs_counts.assign(n, 0);
  for_each_realization(
      config,
      [&](std::size_t i, const CellRealization& r) {
        const double interference = total_interference(r, config.params);
        for (std::size_t o = 0; o < orders.size(); ++o) {
          out.sinr[o][i] = sinr_lth(r, orders[o], config.params, interference);
        }
        out.interferer_counts[i] = r.interferers.size();
        out.bs_counts[i] = r.bs_count;
      },
      &out.report);
  for (std::size_t o = 0; o < orders.size(); ++o) {
    EmpiricalCurve c = coverage_from_sinr(out.sinr[o], thresholds_db, confidence);
    std::ostringstream label;
    label << model_name(config.model) << " l=" << orders[o] << " k=" << config.params.k;
    c.label = label.str();
    out.curves.push_back(std::move(c));
  }
  return out;
}

Histogram empirical_pdf(std::span<const double> samples, int bin_count) {
  if (samples.size() < 2) throw ParameterError("empirical_pdf needs at least two samples");
  if (bin_count < 1) throw ParameterError("empirical_pdf: bin_count must be >= 1");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) {
    Histogram h;
    h.edges = {lo - 0.5, lo + 0.5};
    h.density = {1.0};
    h.degenerate = true;
    return h;
  }
  return empirical_pdf(samples, bin_count, lo, hi);
}

Histogram empirical_pdf(std::span<const double> samples, int bin_count, double lo, double hi) {
  if (samples.empty()) throw ParameterError("empirical_pdf needs samples");
  if (bin_count < 1) throw ParameterError("empirical_pdf: bin_count must be >= 1");
  if (!(hi > lo)) throw ParameterError("empirical_pdf: empty range");
  Histogram h;
  const double width = (hi - lo) / bin_count;
  h.edges.resize(static_cast<std::size_t>(bin_count) + 1);
  for (int i = 0; i <= bin_count; ++i) h.edges[static_cast<std::size_t>(i)] = lo + i * width;
  h.edges.back() = hi;
  std::vector<long> counts(static_cast<std::size_t>(bin_count), 0);
  for (double x : samples) {
    if (x < lo || x > hi) continue;
    auto bin = static_cast<long>((x - lo) / width);
    bin = std::clamp<long>(bin, 0, bin_count - 1);
    ++counts[static_cast<std::size_t>(bin)];
  }
  const double n = static_cast<double>(samples.size());
  h.density.reserve(counts.size());
  for (long c : counts) h.density.push_back(static_cast<double>(c) / (n * width));
  return h;
}

}  // namespace uplink
