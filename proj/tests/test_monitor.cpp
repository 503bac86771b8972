#include <doctest.h>

#include <limits>

#include "capplan/error.hpp"
#include "capplan/monitor.hpp"

using namespace capplan;

TEST_CASE("required bandwidth caps demand by specs") {
  const std::vector<double> d{10.0, 30.0};
  const std::vector<double> a{20.0, 5.0};
  CHECK(required_bandwidth(d, a, 2.5).mhz() == doctest::Approx(6.0));
  CHECK(required_bandwidth(d, a, 0.0).is_unservable());
  // nothing to carry is servable at any SE
  const std::vector<double> none{0.0, 0.0};
  CHECK(required_bandwidth(none, a, 0.0).mhz() == 0.0);
  CHECK_THROWS(required_bandwidth(d, std::vector<double>{1.0}, 1.0));
}

TEST_CASE("unservable sentinel ordering") {
  const auto inf = RequiredBandwidth::unservable();
  CHECK(inf.exceeds(1e300));
  CHECK_FALSE(inf.below(1e300));
  CHECK(inf.value_or_inf() == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(inf.mhz(), PlanningError);
  const auto f = RequiredBandwidth::finite(10.0);
  CHECK(f.exceeds(9.0));
  CHECK_FALSE(f.exceeds(10.0));
  CHECK(f.below(10.5));
  CHECK_FALSE(f.below(10.0));
}

TEST_CASE("history window and busy hour") {
  DemandHistory h(3);
  h.record(0, 1, RequiredBandwidth::finite(5.0));
  h.record(1, 1, RequiredBandwidth::finite(7.0));
  h.record(2, 1, RequiredBandwidth::finite(7.0));
  CHECK(busy_hour(h, 1) == 2);  // ties to the most recent
  h.record(3, 1, RequiredBandwidth::finite(1.0));
  CHECK(h.entries(1).size() == 3);
  CHECK(h.entries(1).front().t == 1);
  h.record(4, 1, RequiredBandwidth::unservable());
  CHECK(busy_hour(h, 1) == 4);
  CHECK_THROWS_WITH_AS(busy_hour(h, 2), "empty history", PlanningError);
  CHECK_THROWS(DemandHistory(0));
  h.clear();
  CHECK(h.empty(1));
}

TEST_CASE("trigger needs L consecutive violations") {
  NetworkState s;
  s.add_cell(SmallCell{1, 0, {0}, 20.0, true});
  s.add_cell(SmallCell{2, 5, {0, 1}, 20.0, true});
  const MonitorParams p{0.9, 1, 3};
  DemandHistory h(1);
  auto step = [&](TimeIndex t, double b1, double b2) {
    h.record(t, 1, RequiredBandwidth::finite(b1));
    h.record(t, 2, RequiredBandwidth::finite(b2));
    return check_trigger(h, s, p, 20.0);
  };
  CHECK_FALSE(step(0, 19.0, 10.0).fire);
  CHECK_FALSE(step(1, 19.0, 10.0).fire);
  const auto d = step(2, 19.0, 37.0);
  CHECK(d.fire);
  CHECK(d.violating_cells == std::vector<CellId>{1, 2});
  CHECK(d.checks[0].threshold_mhz == doctest::Approx(18.0));
  CHECK(d.checks[1].threshold_mhz == doctest::Approx(36.0));
  CHECK(d.checks[0].counter == 3);
  CHECK(h.counter(1) == 0);  // reset after firing

  // an interruption restarts the count
  CHECK_FALSE(step(3, 19.0, 0.0).fire);
  CHECK_FALSE(step(4, 1.0, 0.0).fire);
  CHECK_FALSE(step(5, 19.0, 0.0).fire);
  CHECK_FALSE(step(6, 19.0, 0.0).fire);
  CHECK(step(7, 19.0, 0.0).fire);
}

TEST_CASE("cells without history never violate") {
  NetworkState s;
  s.add_cell(SmallCell{1, 0, {0}, 20.0, true});
  DemandHistory h(4);
  const auto d = check_trigger(h, s, MonitorParams{0.9, 4, 1}, 20.0);
  CHECK_FALSE(d.fire);
  CHECK_FALSE(d.checks[0].violation);
}

TEST_CASE("SLA exceed notification is strict") {
  CHECK_FALSE(sla_exceed_check("a", 50.0, 50.0));
  const auto n = sla_exceed_check("a", 50.5, 50.0);
  REQUIRE(n);
  CHECK(n->tenant_id == "a");
  CHECK(n->demand_mbps == 50.5);
}
