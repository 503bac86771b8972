#include <doctest.h>

#include <cmath>

#include "capplan/error.hpp"
#include "capplan/radio.hpp"
#include "oracles.hpp"

using namespace capplan;

TEST_CASE("link budget constants") {
  const PropagationParams p;
  CHECK(path_loss_db(10.0, p) == doctest::Approx(43.3 + 11.5 + 20.0 * std::log10(5.0)));
  CHECK(path_loss_db(0.2, p) == path_loss_db(1.0, p));
  PropagationParams los = p;
  los.pathloss = PathLossVariant::los;
  CHECK(path_loss_db(100.0, los) == doctest::Approx(2 * 16.9 + 32.8 + 20.0 * std::log10(5.0)));
  CHECK(noise_power_dbm(p) == doctest::Approx(-91.9897).epsilon(1e-5));
}

TEST_CASE("spectral efficiency mapping") {
  const PropagationParams p;
  CHECK(spectral_efficiency(-10.5, p) == 0.0);
  CHECK(spectral_efficiency(-10.0, p) > 0.0);
  CHECK(spectral_efficiency(9.0, p) == doctest::Approx(0.6 * std::log2(1.0 + std::pow(10.0, 0.9))));
  CHECK(spectral_efficiency(40.0, p) == 4.4);
  double prev = 0.0;
  for (double s = -10.0; s <= 40.0; s += 0.5) {
    const double se = spectral_efficiency(s, p);
    CHECK(se >= prev);
    prev = se;
  }
}

TEST_CASE("serving assignment partitions the grid, ties to lowest id") {
  const GridSpec g(30.0, 3.0, 3.0);
  const PropagationParams p;
  NetworkState s;
  s.add_cell(SmallCell{1, 2, {0}, 20.0, true});
  s.add_cell(SmallCell{2, 7, {1}, 20.0, true});
  const auto serving = serving_assignment(s, g, p);
  CHECK(serving.pixel_count() == 10);
  // pixels 4 and 5 are 1.5 m from the midpoint; 4 is closer to cell 1
  CHECK(serving.cell_of(0) == 1);
  CHECK(serving.cell_of(4) == 1);
  CHECK(serving.cell_of(5) == 2);
  // symmetric layout: pixel 2 and 7 equidistant from a third configuration
  NetworkState tie;
  tie.add_cell(SmallCell{5, 0, {0}, 20.0, true});
  tie.add_cell(SmallCell{6, 2, {0}, 20.0, true});
  CHECK(serving_assignment(tie, g, p).cell_of(1) == 5);
  CHECK_THROWS_WITH_AS(serving_assignment(NetworkState{}, g, p), "empty network", PlanningError);
}

TEST_CASE("snapshot matches the independent link budget") {
  const GridSpec g(24.0, 24.0, 3.0);
  const PropagationParams p;
  NetworkState s;
  s.add_cell(SmallCell{1, 9, {0, 1}, 17.0, true});
  s.add_cell(SmallCell{2, 54, {1}, 12.0, true});
  s.add_cell(SmallCell{3, 60, {0}, 23.0, true});
  std::vector<oracle::Site> sites;
  for (const auto& c : s.cells) {
    const Point pos = g.position(c.site);
    sites.push_back({pos.x_m, pos.y_m, c.power_dbm, c.channels});
  }
  const std::vector<double> w(g.pixel_count(), 1.0);
  const auto snap = evaluate_radio(s, g, p, w);
  for (PixelIndex u = 0; u < g.pixel_count(); ++u) {
    const Point pos = g.position(u);
    for (Channel ch = 0; ch < 2; ++ch) {
      const double expect = oracle::sinr_db(sites, pos.x_m, pos.y_m, ch);
      if (std::isnan(expect)) {
        CHECK(std::isnan(snap.sinr(u, ch)));
        CHECK_THROWS_WITH_AS(sinr_db(s, g, u, ch, p), "channel not allocated at serving cell",
                             PlanningError);
      } else {
        CHECK(std::abs(snap.sinr(u, ch) - expect) < 1e-9);
      }
    }
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(snap.avg_se[i] >= 0.0);
    CHECK(snap.avg_se[i] <= 4.4);
    CHECK(snap.capacity_mbps[i] ==
          static_cast<double>(s.cells[i].channels.size()) * 20.0 * snap.avg_se[i]);
  }
}

TEST_CASE("average SE weighting") {
  const GridSpec g(30.0, 3.0, 3.0);
  const PropagationParams p;
  NetworkState s;
  s.add_cell(SmallCell{1, 0, {0}, 20.0, true});
  s.add_cell(SmallCell{2, 9, {0}, 20.0, true});
  std::vector<double> w(10, 0.0);
  const auto uniform = evaluate_radio(s, g, p, w);
  double mean = 0.0;
  int n = 0;
  for (PixelIndex u = 0; u < 10; ++u) {
    if (uniform.serving.cell_of(u) == 1) {
      mean += uniform.pixel_se[u];
      ++n;
    }
  }
  CHECK(uniform.avg_se[0] == doctest::Approx(mean / n));
  w[0] = 1.0;
  const auto weighted = evaluate_radio(s, g, p, w);
  CHECK(weighted.avg_se[0] == doctest::Approx(weighted.pixel_se[0]));
}

TEST_CASE("power configuration") {
  const PropagationParams p;
  const GridSpec g(200.0, 10.0, 1.0);
  SUBCASE("single cell keeps power_max") {
    NetworkState s;
    s.add_cell(SmallCell{1, 5, {0}, 15.0, false});
    CHECK(configure_powers(s, g, p) == std::vector<double>{24.0});
  }
  SUBCASE("fixed powers are untouched and results stay in range") {
    NetworkState s;
    s.add_cell(SmallCell{1, 5, {0}, 15.0, true});
    s.add_cell(SmallCell{2, 45, {0}, 15.0, false});
    s.add_cell(SmallCell{3, 90, {1}, 15.0, false});
    const auto powers = configure_powers(s, g, p);
    CHECK(powers[0] == 15.0);
    for (double pw : powers) {
      CHECK(pw >= 10.0);
      CHECK(pw <= 24.0);
    }
  }
  SUBCASE("unclamped solution hits the edge target") {
    NetworkState s;
    s.add_cell(SmallCell{1, 500, {0}, 24.0, false});
    s.add_cell(SmallCell{2, 560, {1}, 24.0, false});
    apply_configured_powers(s, g, p);
    CHECK(s.cells[0].power_dbm > 10.0);
    CHECK(s.cells[0].power_dbm < 24.0);
    CHECK(power_edge_probe(s, 0, g, p).sinr_db == doctest::Approx(9.0).epsilon(1e-3));
    CHECK(power_edge_probe(s, 1, g, p).sinr_db == doctest::Approx(9.0).epsilon(1e-3));
  }
  SUBCASE("deterministic and idempotent") {
    NetworkState s;
    s.add_cell(SmallCell{1, 500, {0}, 24.0, false});
    s.add_cell(SmallCell{2, 530, {0}, 24.0, false});
    s.add_cell(SmallCell{3, 580, {0, 1}, 24.0, false});
    const auto first = configure_powers(s, g, p);
    apply_configured_powers(s, g, p);
    CHECK(configure_powers(s, g, p) == first);
  }
}

TEST_CASE("path loss cache is transparent") {
  const GridSpec g(60.0, 60.0, 3.0);
  const PropagationParams p;
  NetworkState s;
  s.add_cell(SmallCell{1, 10, {0}, 20.0, false});
  s.add_cell(SmallCell{2, 300, {0}, 18.0, false});
  const std::vector<PixelIndex> sites{10};
  const PathLossTable table(g, p, sites);
  CHECK(table.loss_db(300) == nullptr);
  const std::vector<double> w(g.pixel_count(), 1.0);
  const auto a = evaluate_radio(s, g, p, w);
  const auto b = evaluate_radio(s, g, p, w, &table);
  CHECK(a.serving == b.serving);
  CHECK(a.avg_se == b.avg_se);
}
