#include <doctest.h>

#include <numeric>
#include <random>

#include "capplan/error.hpp"
#include "capplan/sla.hpp"

using namespace capplan;

namespace {

NetworkState three_cells() {
  NetworkState s;
  for (CellId id = 1; id <= 3; ++id) s.add_cell(SmallCell{id, static_cast<PixelIndex>(id), {0}, 20.0, true});
  return s;
}

}  // namespace

TEST_CASE("busy-hour spec scales the contract") {
  TenantProfile t{"x", 100.0, {0.5, 1.0}, std::nullopt};
  CHECK(busy_hour_spec(t).a_busy_mbps == 100.0);
  CHECK(busy_hour_spec(t, 0.5).a_busy_mbps == 50.0);
  CHECK_THROWS(busy_hour_spec(t, 0.0));
  CHECK_THROWS(busy_hour_spec(t, 1.5));
}

TEST_CASE("SC-level translation") {
  const NetworkState s = three_cells();
  const auto uni = translate_sc_level(90.0, s, SpecMethod::uniform, {});
  CHECK(uni.cell_values == std::vector<double>{30.0, 30.0, 30.0});
  CHECK(uni.cell_value(2) == 30.0);
  CHECK_THROWS_AS(uni.cell_value(9), PlanningError);

  const std::vector<double> d{1.0, 3.0, 0.0};
  const auto corr = translate_sc_level(80.0, s, SpecMethod::correlated, d);
  CHECK(corr.cell_values == std::vector<double>{20.0, 60.0, 0.0});
  CHECK(corr.cell_total() == doctest::Approx(80.0));

  const std::vector<double> zero(3, 0.0);
  CHECK_THROWS_WITH_AS(translate_sc_level(80.0, s, SpecMethod::correlated, zero),
                       "no correlation basis", PlanningError);
  CHECK_THROWS_WITH_AS(translate_sc_level(1.0, NetworkState{}, SpecMethod::uniform, {}),
                       "empty network", PlanningError);
}

TEST_CASE("pixel-level translation aggregates over the serving map") {
  const GridSpec g(12.0, 3.0, 3.0);
  const ServingMap serving({4, 7}, {0, 0, 1, 1});
  const auto uni = translate_pixel_level(40.0, g, SpecMethod::uniform, {}, serving);
  CHECK(uni.pixel_values == std::vector<double>{10.0, 10.0, 10.0, 10.0});
  CHECK(uni.cell_ids == std::vector<CellId>{4, 7});
  CHECK(uni.cell_values == std::vector<double>{20.0, 20.0});

  const std::vector<double> d{1.0, 0.0, 2.0, 1.0};
  const auto corr = translate_pixel_level(40.0, g, SpecMethod::correlated, d, serving);
  CHECK(corr.pixel_values == std::vector<double>{10.0, 0.0, 20.0, 10.0});
  CHECK(corr.cell_value(7) == 30.0);
  CHECK(pixel_specs_to_cell(corr, serving) == corr.cell_values);
  CHECK_THROWS(pixel_specs_to_cell(translate_sc_level(1.0, three_cells(), SpecMethod::uniform, {}),
                                   serving));
}

TEST_CASE("translation conserves the busy-hour spec") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const GridSpec g(30.0, 30.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> d(g.pixel_count());
    for (double& v : d) v = unit(rng) < 0.3 ? 0.0 : unit(rng);
    std::vector<std::uint32_t> slots(g.pixel_count());
    for (auto& s : slots) s = static_cast<std::uint32_t>(rng() % 3);
    const ServingMap serving({1, 2, 3}, slots);
    const double a = 1.0 + 100.0 * unit(rng);
    for (SpecMethod m : {SpecMethod::uniform, SpecMethod::correlated}) {
      const auto px = translate_pixel_level(a, g, m, d, serving);
      CHECK(std::accumulate(px.pixel_values.begin(), px.pixel_values.end(), 0.0) ==
            doctest::Approx(a));
      CHECK(px.cell_total() == doctest::Approx(a));
      for (double v : px.pixel_values) CHECK(v >= 0.0);
      const auto sc = translate_sc_level(a, three_cells(), m, serving.sum_by_cell(d));
      CHECK(sc.cell_total() == doctest::Approx(a));
    }
  }
}
