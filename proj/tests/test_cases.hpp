#pragma once

// Programmatic fixture cases shared by the unit tests: a two-node system
// with RES + electrolyser at node 1, a sale junction and a demand-site
// electrolyser at node 2, and a configurable candidate menu.

#include <cmath>
#include <string>
#include <vector>

#include "netmodel.hpp"

namespace h2plan::testing {

struct TinyCaseSpec {
  int steps = 4;
  double step_hours = 6.0;
  double distance_km = 200.0;
  double res_mw = 1000.0;  // split equally wind/solar
  bool with_pipe = true;
  bool with_hvdc = false;
  bool with_hvac = true;
  int hvdc_links = 1;       // on dc_2gw
  int hvac_345s_links = 2;  // on ac_345_single
  bool with_hvac_500d = false;
  double electrolyser_cap_mw = 0.0;  // 0 -> res_mw
};

inline PlanningCase make_tiny_case(const TinyCaseSpec& spec) {
  PlanningCase c;
  c.name = "tiny_two_node";
  c.catalog = default_catalog();
  for (auto& o : c.catalog.hvdc)
    if (o.name == "dc_2gw") o.max_links = spec.hvdc_links;
  for (auto& o : c.catalog.hvac) {
    if (o.name == "ac_345_single") o.max_links = spec.hvac_345s_links;
    if (o.name == "ac_500_double") o.max_links = 1;
  }

  TimeConfig tc;
  tc.step_hours = spec.step_hours;
  tc.weeks = spec.steps * spec.step_hours / (24.0 * 7.0);
  c.time = build_time_index(tc);

  const double cap = spec.electrolyser_cap_mw > 0 ? spec.electrolyser_cap_mw
                                                  : spec.res_mw;

  Bus n1;
  n1.id = "n1";
  n1.svc_allowed = true;
  n1.q_var_min_mvar = -4000;
  n1.q_var_max_mvar = 4000;
  n1.res = {{"wind", spec.res_mw / 2}, {"solar", spec.res_mw / 2}};
  Bus n2 = n1;
  n2.id = "n2";
  n2.res.clear();
  c.buses = {n1, n2};

  Junction j1;
  j1.id = "j1";
  Junction j2;
  j2.id = "j2";
  j2.sale = true;
  c.junctions = {j1, j2};

  ElectrolyserSite s1;
  s1.bus = "n1";
  s1.junction = "j1";
  s1.cap_mw = cap;
  s1.w0_kg = 1e10;
  ElectrolyserSite s2 = s1;
  s2.bus = "n2";
  s2.junction = "j2";
  s2.demand_site = true;
  c.sites = {s1, s2};

  if (spec.with_pipe) {
    Corridor g;
    g.from = "j1";
    g.to = "j2";
    g.kind = CorridorKind::Pipeline;
    g.length_km = spec.distance_km;
    g.options = {"pipe_d500"};
    c.corridors.push_back(g);
  }
  if (spec.with_hvdc) {
    Corridor e;
    e.from = "n1";
    e.to = "n2";
    e.kind = CorridorKind::Hvdc;
    e.length_km = spec.distance_km;
    e.options = {"dc_2gw"};
    c.corridors.push_back(e);
  }
  if (spec.with_hvac) {
    Corridor e;
    e.from = "n1";
    e.to = "n2";
    e.kind = CorridorKind::Hvac;
    e.length_km = spec.distance_km;
    e.options = {"ac_345_single"};
    if (spec.with_hvac_500d) e.options.push_back("ac_500_double");
    c.corridors.push_back(e);
  }

  // deterministic wind/solar shapes at the stated capacity factors
  std::vector<double> wind(c.time.steps), solar(c.time.steps);
  const double hours_per_step = spec.step_hours;
  for (int t = 0; t < c.time.steps; ++t) {
    const double hour = std::fmod(t * hours_per_step, 24.0);
    wind[t] = 0.30 + 0.25 * std::sin(2.0 * M_PI * (hour - 19.0) / 24.0) +
              0.10 * std::sin(2.0 * M_PI * t / 11.0);
    const double sd = std::sin(M_PI * (hour - 6.0) / 12.0);
    solar[t] = hour >= 6.0 && hour <= 18.0 ? 0.75 * sd * sd : 0.0;
  }
  auto rescale = [](std::vector<double>& v, double cf) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= v.size();
    if (mean > 0)
      for (double& x : v) x = std::min(1.0, x * cf / mean);
  };
  rescale(wind, 0.4041);
  rescale(solar, 0.2731);
  c.profiles["wind"] = wind;
  c.profiles["solar"] = solar;
  c.si_normalized = false;  // pressures above are in MPa defaults
  return c;
}

inline PlanningCase validated_tiny_case(const TinyCaseSpec& spec) {
  auto r = validate_case(make_tiny_case(spec));
  if (!r.ok()) throw std::runtime_error("tiny case invalid: " + r.to_string());
  return r.normalized;
}

}  // namespace h2plan::testing
