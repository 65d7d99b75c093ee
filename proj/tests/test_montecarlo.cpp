#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "uplink/distributions.hpp"
#include "uplink/errors.hpp"
#include "uplink/montecarlo.hpp"
#include "uplink/statistics.hpp"
#include "uplink/units.hpp"

using namespace uplink;

namespace {

SimConfig thinning(int k, double eps, long n, std::uint64_t seed = 1) {
  SimConfig c = SimConfig::defaults(Model::conditional_thinning, SystemParams::make(0.24, k, 2.5, eps));
  c.realizations = n;
  c.seed = seed;
  return c;
}

CellRealization single_link(double r_l, double g_l) {
  CellRealization r;
  r.user_distances = {r_l};
  r.user_fading = {g_l};
  return r;
}

}  // namespace

TEST_CASE("sinr examples") {
  SystemParams sp = SystemParams::make(0.24, 1, 2.5, 1.0);
  SUBCASE("full compensation ignores the user distance") {
    CellRealization r = single_link(3.0, 0.7);
    r.interferers = {{1.0, 1.0, 1.0}};
    CHECK(sinr_lth(r, 1, sp) == doctest::Approx(0.7));
    r.user_distances = {0.2};
    CHECK(sinr_lth(r, 1, sp) == doctest::Approx(0.7));
  }
  SUBCASE("symmetric interferer gives unit SINR") {
    CellRealization r = single_link(2.0, 1.3);
    r.interferers = {{2.5, 2.5, 1.3}};
    CHECK(sinr_lth(r, 1, sp) == doctest::Approx(1.0));
  }
  SUBCASE("no power control") {
    sp.epsilon = 0.0;
    CellRealization r = single_link(1.0, 1.0);
    r.interferers = {{7.0, 2.0, 1.0}};
    CHECK(sinr_lth(r, 1, sp) == doctest::Approx(std::pow(2.0, 2.5)));
    CHECK(sinr_lth(r, 1, sp) == doctest::Approx(5.656854).epsilon(1e-6));
  }
  SUBCASE("no interference and no noise is infinite") {
    CHECK(std::isinf(sinr_lth(single_link(1.0, 1.0), 1, sp)));
    sp.noise = 0.5;
    CHECK(sinr_lth(single_link(1.0, 1.0), 1, sp) == doctest::Approx(2.0));
  }
  SUBCASE("far field adds to the sum") {
    CellRealization r = single_link(1.0, 1.0);
    r.interferers = {{1.0, 1.0, 1.0}};
    r.far_field_interference = 0.25;
    CHECK(total_interference(r, sp) == doctest::Approx(1.25));
  }
}

TEST_CASE("sim config validation") {
  SimConfig c = thinning(5, 1.0, 10);
  CHECK_NOTHROW(c.validate());
  c.realizations = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = thinning(5, 1.0, 10);
  c.guard_fraction = 1.0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = thinning(5, 1.0, 10);
  CHECK(c.params.p == doctest::Approx(0.2));
  CHECK(c.effective_bs_intensity() == doctest::Approx(0.048));
  CHECK(parse_model("voronoi") == Model::realistic_voronoi);
  CHECK(model_name(Model::conditional_thinning) == "thinning");
  CHECK_THROWS_AS(parse_model("hex"), ParameterError);
}

TEST_CASE("window too small for k") {
  SimConfig c = thinning(25, 1.0, 5);
  c.window = Window{{}, 1.0};
  CHECK_THROWS_AS(draw_thinning_realization(c, 0), ConfigurationError);
}

TEST_CASE("thinning realizations") {
  SimConfig c = thinning(11, 0.5, 3000, 4);
  c.far_field_correction = false;
  const auto runs = run_conditional_thinning(c);
  REQUIRE(runs.size() == 3000);
  double count = 0.0;
  for (const auto& r : runs) {
    CHECK(r.user_distances.size() == 11);
    CHECK(std::is_sorted(r.user_distances.begin(), r.user_distances.end()));
    count += static_cast<double>(r.interferers.size());
    for (const auto& x : r.interferers) CHECK(x.D_x > r.user_distances.back());
    CHECK(r.far_field_interference == 0.0);
  }
  // Campbell: p lambda (pi R_w^2 - pi E[R_k^2]), E[R_k^2] = k / (lambda pi).
  const double p = 1.0 / 11, lambda = 0.24, rw = c.effective_window_radius();
  const double mean = p * lambda * (kPi * rw * rw - 11.0 / lambda);
  const double var = mean + p * p * 11.0;
  CHECK(std::abs(count / 3000.0 - mean) < 4.0 * std::sqrt(var / 3000.0));
}

TEST_CASE("thinning realizations are reproducible and thread independent") {
  SimConfig a = thinning(4, 0.75, 64, 9);
  a.threads = 1;
  SimConfig b = a;
  b.threads = 3;
  const auto ra = run_conditional_thinning(a);
  const auto rb = run_conditional_thinning(b);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].user_distances == rb[i].user_distances);
    CHECK(ra[i].user_fading == rb[i].user_fading);
    REQUIRE(ra[i].interferers.size() == rb[i].interferers.size());
    for (std::size_t j = 0; j < ra[i].interferers.size(); ++j) {
      CHECK(ra[i].interferers[j].D_x == rb[i].interferers[j].D_x);
      CHECK(ra[i].interferers[j].G_x == rb[i].interferers[j].G_x);
    }
  }
  SimConfig other = a;
  other.seed = 10;
  CHECK(run_conditional_thinning(other)[0].user_distances != ra[0].user_distances);
}

TEST_CASE("thinning R_k follows the kth nearest law") {
  SimConfig c = thinning(11, 1.0, 100000, 5);
  std::vector<double> rk(static_cast<std::size_t>(c.realizations));
  for_each_realization(c, [&](std::size_t i, const CellRealization& r) { rk[i] = r.user_distances.back(); });
  CHECK(stats::ks_distance(rk, [](double r) { return kth_nearest_cdf(r, 11, 0.24); }) < 0.01);
}

TEST_CASE("interference statistics do not depend on the resource group") {
  // Two independent resource groups are independent runs of the same model.
  SimConfig a = thinning(10, 0.75, 4000, 21);
  SimConfig b = thinning(10, 0.75, 4000, 22);
  std::vector<double> ia(4000), ib(4000);
  for_each_realization(a, [&](std::size_t i, const CellRealization& r) {
    ia[i] = total_interference(r, a.params);
  });
  for_each_realization(b, [&](std::size_t i, const CellRealization& r) {
    ib[i] = total_interference(r, b.params);
  });
  CHECK(stats::ks_two_sample_pvalue(ia, ib) > 1e-3);
}

TEST_CASE("voronoi realizations") {
  SimConfig c = SimConfig::defaults(Model::realistic_voronoi, SystemParams::make(0.24, 25, 2.5, 0.0));
  c.realizations = 40;
  RunReport report;
  const auto runs = run_realistic_voronoi(c, &report);
  CHECK(report.realizations == 40);
  for (const auto& r : runs) {
    CHECK(r.user_distances.size() == 25);
    CHECK(r.interferers.size() + 1 == r.bs_count);
    // Each interferer is served by its own, nearest, BS.
    for (const auto& x : r.interferers) CHECK(x.R_x <= x.D_x);
  }
  CHECK(c.effective_bs_intensity() == doctest::Approx(0.24 / 25));
}

TEST_CASE("empirical coverage") {
  const std::vector<double> thresholds{-10, 0, 10};
  const std::vector<double> high{1e6, 1e7, std::numeric_limits<double>::infinity()};
  auto c = coverage_from_sinr(high, thresholds);
  for (double v : c.coverage) CHECK(v == 1.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(c.ci_low[i] < 1.0);
  CHECK_FALSE(c.degenerate_ci);

  const std::vector<double> one{2.0};
  c = coverage_from_sinr(one, thresholds);
  CHECK(c.degenerate_ci);
  CHECK(c.coverage == std::vector<double>{1.0, 1.0, 0.0});

  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> s(500);
  for (auto& x : s) x = e(rng);
  std::vector<double> grid;
  for (int i = -20; i <= 20; ++i) grid.push_back(i);
  c = coverage_from_sinr(s, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(c.ci_low[i] <= c.coverage[i]);
    CHECK(c.coverage[i] <= c.ci_high[i]);
    if (i > 0) CHECK(c.coverage[i] <= c.coverage[i - 1]);
  }

  SimConfig cfg = thinning(3, 1.0, 50);
  const auto runs = run_conditional_thinning(cfg);
  const auto curve = empirical_coverage(runs, 2, thresholds, cfg.params);
  CHECK(curve.realizations == 50);
}

TEST_CASE("simulate_coverage matches the materialized run") {
  SimConfig cfg = thinning(5, 0.5, 300, 8);
  const std::vector<double> thresholds{-5, 0, 5};
  const std::vector<int> orders{1, 5};
  const auto streamed = simulate_coverage(cfg, orders, thresholds);
  const auto runs = run_conditional_thinning(cfg);
  for (std::size_t o = 0; o < orders.size(); ++o) {
    const auto direct = empirical_coverage(runs, orders[o], thresholds, cfg.params);
    CHECK(streamed.curves[o].coverage == direct.coverage);
  }
  CHECK(streamed.interferer_counts[7] == runs[7].interferers.size());
}

TEST_CASE("empirical pdf") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(1000000);
  for (auto& x : s) x = u(rng);
  const Histogram h = empirical_pdf(s, 10);
  REQUIRE(h.density.size() == 10);
  double area = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(std::abs(h.density[i] - 1.0) < 0.01);
    area += h.density[i] * (h.edges[i + 1] - h.edges[i]);
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> flat(10, 2.5);
  CHECK(empirical_pdf(flat, 5).degenerate);

  // Rayleigh draws by inversion against the interferer link law.
  const auto dp = DistanceParams::with_default_p(0.24, 25, 25);
  std::vector<double> r(100000);
  for (auto& x : r) x = std::sqrt(-std::log(1.0 - u(rng)) / (dp.p * dp.lambda * kPi));
  CHECK(stats::ks_distance(r, [&](double v) { return interferer_link_cdf(v, dp); }) < 0.01);
  const Histogram hr = empirical_pdf(r, 40, 0.0, 15.0);
  for (std::size_t i = 0; i < 40; ++i) {
    const double mid = 0.5 * (hr.edges[i] + hr.edges[i + 1]);
    CHECK(std::abs(hr.density[i] - interferer_link_pdf(mid, dp)) < 0.01);
  }
}
