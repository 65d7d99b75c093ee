#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uplink/geometry.hpp"
#include "uplink/params.hpp"

namespace uplink {

enum class Model { conditional_thinning, realistic_voronoi };

std::string_view model_name(Model m);  // "thinning" | "voronoi"
Model parse_model(std::string_view name);

struct SimConfig {
  Model model = Model::conditional_thinning;
  SystemParams params{};
  double bs_intensity = 0.0;  // lambda_b; 0 selects lambda / k
  long realizations = 20000;
  Window window{{}, 0.0};     // radius 0 selects default_window_radius
  double guard_fraction = 0.5;
  std::uint64_t seed = 1;
  // Adds the mean interference of the PPP beyond the window to every realization.
  bool far_field_correction = true;
  unsigned threads = 0;

  static SimConfig defaults(Model model, const SystemParams& params);
  double effective_bs_intensity() const;
  double effective_window_radius() const;
  void validate() const;
};

// Default window radius in units of the interferer spacing 1/sqrt(rho pi),
// with rho = p lambda (thinning) or lambda_b (voronoi). The Voronoi model
// pays per cell, hence the smaller window.
inline constexpr double kThinningWindowUnits = 20.0;
inline constexpr double kVoronoiWindowUnits = 12.0;
double default_window_radius(Model model, const SystemParams& params, double bs_intensity);

struct InterfererRecord {
  double R_x = 0.0;  // to its own BS
  double D_x = 0.0;  // to the target BS at the origin
  double G_x = 0.0;  // fading power
};

struct CellRealization {
  std::vector<double> user_distances;  // R_1 <= ... <= R_k
  std::vector<double> user_fading;     // G_1 ... G_k
  std::vector<InterfererRecord> interferers;
  double far_field_interference = 0.0;
  std::size_t bs_count = 0;  // voronoi model only, target included
};

// sum G_x R_x^{alpha eps} D_x^{-alpha} plus the far-field term.
double total_interference(const CellRealization& r, const SystemParams& params);

// G_l R_l^{alpha(eps-1)} / (I + sigma^2). With no interference and no noise
// the result is +infinity, which covers every finite threshold.
double sinr_lth(const CellRealization& r, int l, const SystemParams& params);
double sinr_lth(const CellRealization& r, int l, const SystemParams& params, double interference);

struct RunReport {
  long realizations = 0;
  long rejected = 0;  // guard-band rejections (voronoi)
  std::vector<std::string> warnings;
  double rejection_rate() const;
};

CellRealization draw_thinning_realization(const SimConfig& config, std::uint64_t index);
// `rejected` receives the number of guard-band rejections before acceptance.
CellRealization draw_voronoi_realization(const SimConfig& config, std::uint64_t index,
                                         long* rejected = nullptr);

// Draws every realization (possibly concurrently) and calls visit(index, r).
// visit must be safe to call from several threads for distinct indices.
void for_each_realization(const SimConfig& config,
                          const std::function<void(std::size_t, const CellRealization&)>& visit,
                          RunReport* report = nullptr);

std::vector<CellRealization> run_conditional_thinning(const SimConfig& config,
                                                      RunReport* report = nullptr);
std::vector<CellRealization> run_realistic_voronoi(const SimConfig& config,
                                                   RunReport* report = nullptr);

struct EmpiricalCurve {
  std::vector<double> thresholds_db;
  std::vector<double> coverage;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  long realizations = 0;
  double confidence = 0.99;
  bool degenerate_ci = false;  // fewer than two realizations
  std::string label;
};

// Fraction of SINR samples above each threshold with a normal-approximation
// interval (Wilson when the fraction is 0 or 1).
EmpiricalCurve coverage_from_sinr(std::span<const double> sinr, std::span<const double> thresholds_db,
                                  double confidence = 0.99);
EmpiricalCurve empirical_coverage(std::span<const CellRealization> realizations, int l,
                                  std::span<const double> thresholds_db, const SystemParams& params,
                                  double confidence = 0.99);

struct SimulatedCoverage {
  std::vector<int> orders;                  // l values
  std::vector<EmpiricalCurve> curves;       // one per order
  std::vector<std::vector<double>> sinr;    // [order][realization]
  std::vector<std::size_t> interferer_counts;
  std::vector<std::size_t> bs_counts;
  RunReport report;
};

// Streams realizations and keeps only SINR values, so large runs stay small
// in memory.
SimulatedCoverage simulate_coverage(const SimConfig& config, std::span<const int> orders,
                                    std::span<const double> thresholds_db, double confidence = 0.99);

struct Histogram {
  std::vector<double> edges;    // bins + 1 edges
  std::vector<double> density;  // per bin
  bool degenerate = false;      // constant input
};

// Density histogram over [min, max] of the samples; areas sum to one.
Histogram empirical_pdf(std::span<const double> samples, int bin_count);
// Density histogram on [lo, hi], normalized by the total sample count so it
// estimates the pdf even when some samples fall outside the range.
Histogram empirical_pdf(std::span<const double> samples, int bin_count, double lo, double hi);

}  // namespace uplink
