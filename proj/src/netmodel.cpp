#include "netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace h2plan {

namespace {

constexpr double kDeg45 = 0.785398163397448280;

HvacOption make_hvac(const std::string& name, double kv, double cap_mw,
                     double cond, double sub_pair, double r, double x,
                     double bch, int links) {
  HvacOption o;
  o.name = name;
  o.voltage_kv = kv;
  o.capacity_mw = cap_mw;
  o.conductor_cost_per_km = cond;
  o.substation_pair_cost_per_km = sub_pair;
  o.r_ohm_per_km = r;
  o.x_ohm_per_km = x;
  o.b_ch_us_per_km = bch;
  o.theta_min_rad = -kDeg45;
  o.theta_max_rad = kDeg45;
  o.max_links = links;
  return o;
}

HvdcOption make_hvdc(const std::string& name, double cap_mw, double cond,
                     double pair_cost, int links) {
  HvdcOption o;
  o.name = name;
  o.capacity_mw = cap_mw;
  o.conductor_cost_per_km = cond;
  o.converter_pair_cost = pair_cost;
  o.max_links = links;
  return o;
}

PipelineOption make_pipe(const std::string& name, double d, double cost) {
  PipelineOption o;
  o.name = name;
  o.diameter_m = d;
  o.efficiency = 0.95;
  o.cost_per_km = cost;
  return o;
}

}  // namespace

Catalog default_catalog() {
  Catalog c;
  c.pipeline = {
      make_pipe("pipe_d500", 0.5, 1.829),
      make_pipe("pipe_d900", 0.9, 2.682),
      make_pipe("pipe_d1200", 1.2, 3.414),
  };
  c.hvdc = {
      make_hvdc("dc_1gw", 1000.0, 0.78, 2 * 170.0, 2),
      make_hvdc("dc_2gw", 2000.0, 0.95, 2 * 237.4, 2),
      make_hvdc("dc_3gw", 3000.0, 1.00, 2 * 301.4, 2),
  };
  c.hvac = {
      make_hvac("ac_345_single", 345.0, 750.0, 0.84, 2 * 0.0706, 0.0339,
                0.288, 3.803, 4),
      make_hvac("ac_345_double", 345.0, 1500.0, 1.34, 2 * 0.1412, 0.0339,
                0.288, 3.803, 3),
      make_hvac("ac_500_single", 500.0, 1500.0, 1.19, 2 * 0.0986, 0.0226,
                0.276, 3.968, 4),
      make_hvac("ac_500_double", 500.0, 3000.0, 1.91, 2 * 0.1971, 0.0226,
                0.276, 3.968, 2),
      make_hvac("ac_765_single", 765.0, 1500.0, 1.67, 2 * 0.1168, 0.01695,
                0.278, 3.937, 4),
      make_hvac("ac_765_double", 765.0, 3000.0, 2.38, 2 * 0.2336, 0.01695,
                0.278, 3.937, 2),
  };
  return c;
}

const PipelineOption* Catalog::find_pipeline(const std::string& name) const {
  for (const auto& o : pipeline)
    if (o.name == name) return &o;
  return nullptr;
}
const HvdcOption* Catalog::find_hvdc(const std::string& name) const {
  for (const auto& o : hvdc)
    if (o.name == name) return &o;
  return nullptr;
}
const HvacOption* Catalog::find_hvac(const std::string& name) const {
  for (const auto& o : hvac)
    if (o.name == name) return &o;
  return nullptr;
}

int PlanningCase::bus_index(const std::string& id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  return -1;
}

int PlanningCase::junction_index(const std::string& id) const {
  for (size_t i = 0; i < junctions.size(); ++i)
    if (junctions[i].id == id) return static_cast<int>(i);
  return -1;
}

double PlanningCase::res_bound(int bus, int t) const {
  double v = 0.0;
  for (const auto& term : buses[bus].res) {
    auto it = profiles.find(term.column);
    if (it == profiles.end() || t >= static_cast<int>(it->second.size()))
      throw std::out_of_range("res_bound: missing profile " + term.column);
    v += term.scale_mw * it->second[t];
  }
  return v;
}

double PlanningCase::total_electrolyser_flow_cap() const {
  double v = 0.0;
  for (const auto& s : sites)
    v += s.cap_mw * s.eta_ptg / constants.hhv_mj_per_m3;
  return v;
}

std::string ValidationResult::to_string() const {
  std::ostringstream os;
  for (const auto& i : issues) os << i.path << ": " << i.message << "\n";
  return os.str();
}

PuBranch per_unit_line(const HvacOption& option, double length_km,
                       double base_mva, double base_kv) {
  if (base_mva <= 0.0 || base_kv <= 0.0)
    throw std::invalid_argument("per_unit_line: non-positive base");
  const double z_base = base_kv * base_kv / base_mva;
  PuBranch p;
  p.r = option.r_ohm_per_km * length_km / z_base;
  p.x = option.x_ohm_per_km * length_km / z_base;
  if (p.r == 0.0 && p.x == 0.0)
    throw std::invalid_argument("per_unit_line: zero impedance");
  const std::complex<double> y = 1.0 / std::complex<double>(p.r, p.x);
  p.g = y.real();
  p.b = y.imag();
  p.b_ch = option.b_ch_us_per_km * 1e-6 * length_km * z_base;
  p.g_c = p.g;
  p.b_c = -p.b - 0.5 * p.b_ch;
  return p;
}

TimeIndex build_time_index(const TimeConfig& config) {
  if (config.weeks <= 0.0)
    throw std::invalid_argument("build_time_index: non-positive week count");
  if (config.step_hours <= 0.0 ||
      std::abs(24.0 / config.step_hours -
               std::round(24.0 / config.step_hours)) > 1e-9)
    throw std::invalid_argument(
        "build_time_index: step length must divide a day");
  const double raw_steps = (24.0 / config.step_hours) * 7.0 * config.weeks;
  if (std::abs(raw_steps - std::round(raw_steps)) > 1e-6)
    throw std::invalid_argument(
        "build_time_index: week count yields a fractional step count");
  TimeIndex t;
  t.dt_s = config.step_hours * 3600.0;
  t.steps = static_cast<int>(std::llround(raw_steps));
  t.scale = 365.25 / (7.0 * config.weeks);
  t.discount_rate = config.discount_rate;
  t.life_years = config.life_years;
  return t;
}

namespace {

class Checker {
 public:
  explicit Checker(std::vector<ValidationIssue>& issues) : issues_(issues) {}
  void fail(const std::string& path, const std::string& msg) {
    issues_.push_back({path, msg});
  }
  void require(bool ok, const std::string& path, const std::string& msg) {
    if (!ok) fail(path, msg);
  }

 private:
  std::vector<ValidationIssue>& issues_;
};

}  // namespace

ValidationResult validate_case(const PlanningCase& raw) {
  ValidationResult out;
  out.normalized = raw;
  PlanningCase& c = out.normalized;
  Checker chk(out.issues);

  const bool convert = !raw.si_normalized;
  const double pscale = convert ? 1e6 : 1.0;  // MPa -> Pa

  chk.require(c.time.steps > 0, "time.steps", "step count must be positive");
  chk.require(c.time.dt_s > 0, "time.dt_s", "step length must be positive");
  chk.require(c.time.scale > 0, "time.scale", "scale factor must be positive");
  chk.require(c.time.discount_rate > 0 && c.time.discount_rate < 1,
              "time.discount_rate", "discount rate must lie in (0,1)");

  const Constants& k = c.constants;
  for (auto [v, name] : std::initializer_list<std::pair<double, const char*>>{
           {k.hhv_mj_per_m3, "hhv"},
           {k.rho_kg_per_m3, "rho"},
           {k.isentropic_exponent, "isentropic_exponent"},
           {k.compressor_k_mj_per_k_m3, "compressor_k"},
           {k.gas_temperature_k, "gas_temperature"},
           {k.compressor_fuel_m3_per_mj, "compressor_fuel_rate"},
           {k.gas_constant_j_per_kg_k, "gas_constant"},
           {k.base_mva, "base_mva"}}) {
    chk.require(v > 0, std::string("constants.") + name,
                "must be strictly positive");
  }

  std::set<std::string> bus_ids, junction_ids;
  for (size_t i = 0; i < c.buses.size(); ++i) {
    Bus& b = c.buses[i];
    const std::string path = "buses[" + b.id + "]";
    chk.require(!b.id.empty(), path, "empty id");
    chk.require(bus_ids.insert(b.id).second, path, "duplicate bus id");
    chk.require(b.v_min > 0, path + ".v_min", "must be positive");
    chk.require(b.v_min <= b.v_max, path + ".v_min",
                "v_min must not exceed v_max");
    if (b.svc_allowed) {
      chk.require(b.q_var_min_mvar <= 0, path + ".q_var_min",
                  "must be <= 0 when SVC allowed");
      chk.require(b.q_var_max_mvar >= 0, path + ".q_var_max",
                  "must be >= 0 when SVC allowed");
    }
    for (const auto& term : b.res) {
      const auto it = c.profiles.find(term.column);
      if (it == c.profiles.end()) {
        chk.fail(path + ".res", "unknown profile column '" + term.column + "'");
      } else {
        chk.require(static_cast<int>(it->second.size()) == c.time.steps,
                    "profiles[" + term.column + "]",
                    "length " + std::to_string(it->second.size()) +
                        " does not match |T| = " +
                        std::to_string(c.time.steps));
      }
    }
  }

  for (size_t i = 0; i < c.junctions.size(); ++i) {
    Junction& j = c.junctions[i];
    const std::string path = "junctions[" + j.id + "]";
    chk.require(!j.id.empty(), path, "empty id");
    chk.require(junction_ids.insert(j.id).second, path, "duplicate id");
    j.p_min *= pscale;
    j.p_max *= pscale;
    chk.require(j.p_min > 0, path + ".p_min", "must be positive");
    chk.require(j.p_min < j.p_max, path + ".p_min",
                "minimum pressure must lie below maximum pressure");
    if (!j.sale && !j.demand.empty()) {
      chk.require(static_cast<int>(j.demand.size()) == c.time.steps,
                  path + ".demand",
                  "length " + std::to_string(j.demand.size()) +
                      " does not match |T| = " + std::to_string(c.time.steps));
      for (double d : j.demand)
        if (d < 0) {
          chk.fail(path + ".demand", "fixed demand must be nonnegative");
          break;
        }
    }
  }

  double network_p_max = 0.0;
  for (const auto& j : c.junctions) network_p_max = std::max(network_p_max, j.p_max);

  for (size_t i = 0; i < c.sites.size(); ++i) {
    ElectrolyserSite& s = c.sites[i];
    const std::string path = "electrolysers[" + s.bus + ":" + s.junction + "]";
    chk.require(c.bus_index(s.bus) >= 0, path + ".bus", "unknown bus");
    chk.require(c.junction_index(s.junction) >= 0, path + ".junction",
                "unknown junction");
    s.out_pressure *= pscale;
    chk.require(s.eta_ptg > 0 && s.eta_ptg <= 1, path + ".eta_ptg",
                "efficiency must lie in (0,1]");
    chk.require(s.eta_cp > 0 && s.eta_cp <= 1, path + ".eta_cp",
                "efficiency must lie in (0,1]");
    chk.require(s.cap_mw >= 0, path + ".cap_mw", "must be nonnegative");
    chk.require(s.w0_kg >= 0, path + ".w0_kg", "must be nonnegative");
    if (network_p_max > 0)
      chk.require(s.out_pressure <= network_p_max, path + ".out_pressure",
                  "exceeds the network maximum pressure");
  }

  for (size_t ci = 0; ci < c.corridors.size(); ++ci) {
    Corridor& co = c.corridors[ci];
    const std::string path =
        "corridors[" + co.from + "->" + co.to + "]";
    chk.require(co.from != co.to, path, "endpoints must be distinct");
    chk.require(co.length_km > 0, path + ".length_km", "must be positive");
    chk.require(!co.options.empty(), path + ".options",
                "at least one candidate option required");
    if (co.kind == CorridorKind::Pipeline) {
      chk.require(c.junction_index(co.from) >= 0, path + ".from",
                  "gas corridors carry junction endpoints only");
      chk.require(c.junction_index(co.to) >= 0, path + ".to",
                  "gas corridors carry junction endpoints only");
    } else {
      chk.require(c.bus_index(co.from) >= 0, path + ".from", "unknown bus");
      chk.require(c.bus_index(co.to) >= 0, path + ".to", "unknown bus");
    }

    if (convert || co.pipe_options.empty()) co.pipe_options.clear();
    if (convert || co.hvdc_options.empty()) co.hvdc_options.clear();
    if (convert || co.hvac_options.empty()) co.hvac_options.clear();
    for (const std::string& name : co.options) {
      switch (co.kind) {
        case CorridorKind::Pipeline: {
          const PipelineOption* o = c.catalog.find_pipeline(name);
          if (!o) {
            chk.fail(path, "unknown pipeline option '" + name + "'");
            break;
          }
          PipelineOption inst = *o;
          inst.length_m = co.length_km * 1000.0;
          chk.require(inst.diameter_m > 0, path + "." + name + ".diameter",
                      "must be positive");
          chk.require(inst.efficiency > 0 && inst.efficiency <= 1,
                      path + "." + name + ".efficiency",
                      "must lie in (0,1]");
          co.pipe_options.push_back(inst);
          break;
        }
        case CorridorKind::Hvdc: {
          const HvdcOption* o = c.catalog.find_hvdc(name);
          if (!o) {
            chk.fail(path, "unknown hvdc option '" + name + "'");
            break;
          }
          HvdcOption inst = *o;
          inst.length_km = co.length_km;
          if (inst.s_cv_mva <= 0) inst.s_cv_mva = inst.capacity_mw;
          if (inst.p_cv_min_mw == 0 && inst.p_cv_max_mw == 0) {
            inst.p_cv_max_mw = inst.s_cv_mva;
            inst.p_cv_min_mw = -inst.s_cv_mva;
          }
          if (inst.q_cv_min_mvar == 0 && inst.q_cv_max_mvar == 0) {
            inst.q_cv_max_mvar = inst.s_cv_mva;
            inst.q_cv_min_mvar = -inst.s_cv_mva;
          }
          if (inst.i_cv_max_ka <= 0)
            inst.i_cv_max_ka =
                inst.s_cv_mva / (std::sqrt(3.0) * inst.ac_kv * 0.9);
          if (inst.vdc_min_kv == 0 && inst.vdc_max_kv == 0) {
            inst.vdc_min_kv = 0.9 * inst.dc_kv;
            inst.vdc_max_kv = 1.1 * inst.dc_kv;
          }
          chk.require(inst.capacity_mw > 0, path + "." + name + ".capacity",
                      "must be positive");
          chk.require(inst.loss_alpha_mw >= 0 && inst.loss_beta_v >= 0 &&
                          inst.loss_gamma_ohm >= 0,
                      path + "." + name + ".loss",
                      "loss coefficients must be nonnegative");
          chk.require(inst.max_links >= 1, path + "." + name + ".max_links",
                      "must be at least 1");
          co.hvdc_options.push_back(inst);
          break;
        }
        case CorridorKind::Hvac: {
          const HvacOption* o = c.catalog.find_hvac(name);
          if (!o) {
            chk.fail(path, "unknown hvac option '" + name + "'");
            break;
          }
          HvacOption inst = *o;
          inst.length_km = co.length_km;
          chk.require(inst.r_ohm_per_km >= 0 && inst.x_ohm_per_km > 0,
                      path + "." + name + ".impedance",
                      "r must be >= 0 and x > 0");
          chk.require(inst.b_ch_us_per_km >= 0, path + "." + name + ".b_ch",
                      "must be nonnegative");
          chk.require(std::abs(inst.theta_min_rad) <= kDeg45 + 1e-12 &&
                          inst.theta_max_rad <= kDeg45 + 1e-12,
                      path + "." + name + ".theta",
                      "angle bounds must stay within 45 degrees");
          chk.require(inst.max_links >= 1, path + "." + name + ".max_links",
                      "must be at least 1");
          if (inst.x_ohm_per_km > 0) {
            inst.pu = per_unit_line(inst, inst.length_km, k.base_mva,
                                    inst.voltage_kv);
          }
          co.hvac_options.push_back(inst);
          break;
        }
      }
    }
  }

  c.si_normalized = true;
  return out;
}

}  // namespace h2plan
