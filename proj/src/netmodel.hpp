#pragma once

// Domain data model for the integrated electricity / hydrogen transport
// planning problem: buses, gas junctions, electrolyser sites, candidate
// corridor options, time grid and physical constants.
//
// Unit conventions (after validation): SI internally (Pa, m, s, kg),
// money in M$, electric power in MW / MVAr, voltages in per-unit on
// `Constants::base_mva` except where a field name says kV/kA/Ohm.
// Per-unit branch parameters are precomputed here and consumed by the
// hvac emitter only.

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace h2plan {

struct Constants {
  double hhv_mj_per_m3 = 12.1948;          // higher heating value of H2
  double rho_kg_per_m3 = 0.086;            // H2 density at standard conditions
  double isentropic_exponent = 1.296;      // gamma
  double compressor_k_mj_per_k_m3 = 0.351121e-3;
  double gas_temperature_k = 288.15;
  double compressor_fuel_m3_per_mj = 0.2624;  // mu, gas-turbine drive fuel rate
  double gas_constant_j_per_kg_k = 4124.2;    // specific R for H2
  double base_mva = 100.0;
  double water_per_kg_h2 = 10.0;           // kept separate from rho on purpose
  // SRK critical data for H2
  double critical_temperature_k = 33.145;
  double critical_pressure_pa = 1.2964e6;
  double acentric_factor = -0.219;
};

// (profile column, scale in MW applied to the per-unit column)
struct ResProfileTerm {
  std::string column;
  double scale_mw = 1.0;
};

struct Bus {
  std::string id;
  double v_min = 0.9;  // pu
  double v_max = 1.1;  // pu
  bool svc_allowed = false;
  double q_var_min_mvar = 0.0;
  double q_var_max_mvar = 0.0;
  double c_var1 = 0.088;  // M$/MVAr on the peak SVC output
  std::vector<ResProfileTerm> res;  // empty -> no RES at this bus
};

struct Junction {
  std::string id;
  double p_min = 3.5;  // MPa before validation, Pa after
  double p_max = 10.0;
  bool sale = false;                 // revenue-maximising free off-take
  std::vector<double> demand;        // m3/s per step when !sale; empty -> 0
  double h2_price_per_m3 = 0.277;    // $/m3 (loader converts from $/kg)
};

struct ElectrolyserSite {
  std::string bus;
  std::string junction;
  double cap_mw = 0.0;
  double eta_ptg = 0.70;
  double eta_cp = 0.81;
  double out_pressure = 3.5;   // MPa before validation, Pa after
  double w0_kg = 0.0;          // initial water stock
  double c0 = 0.0;             // M$ base cost (binary dropped while c0 == 0)
  double c1 = 0.6;             // M$/MW on peak input power
  double c_cp = 4.15;          // M$/MW on peak compressor power
  bool demand_site = false;    // compressor power forced to zero
};

struct PipelineOption {
  std::string name;
  double diameter_m = 0.5;
  double length_m = 0.0;       // resolved from the corridor
  double efficiency = 0.95;
  double cost_per_km = 1.829;  // M$/km
  double flow_cap = 0.0;       // m3/s; <= 0 means "physical maximum" default

  double install_cost() const { return cost_per_km * length_m / 1000.0; }
};

struct HvdcOption {
  std::string name;
  double capacity_mw = 1000.0;
  double conductor_cost_per_km = 0.78;   // M$/km
  double converter_pair_cost = 340.0;    // M$, both stations
  double resistance_ohm_per_km = 0.0059; // equivalent bipole resistance
  double loss_alpha_mw = 6.62;
  double loss_beta_v = 1800.0;
  double loss_gamma_ohm = 1.98;
  double s_cv_mva = 0.0;       // 0 -> capacity_mw
  double p_cv_min_mw = 0.0, p_cv_max_mw = 0.0;       // 0/0 -> +-s_cv
  double q_cv_min_mvar = 0.0, q_cv_max_mvar = 0.0;   // 0/0 -> +-s_cv
  double i_cv_max_ka = 0.0;    // 0 -> s_cv / (sqrt(3) * ac_kv * 0.9)
  double ac_kv = 500.0;
  double dc_kv = 500.0;
  double vdc_min_kv = 0.0, vdc_max_kv = 0.0;  // 0/0 -> +-10% around dc_kv
  int max_links = 2;
  double length_km = 0.0;      // resolved from the corridor

  double resistance_ohm() const { return resistance_ohm_per_km * length_km; }
  double install_cost() const {
    return conductor_cost_per_km * length_km + converter_pair_cost;
  }
};

// Per-unit pi-model parameters of one HVAC option instance.
struct PuBranch {
  double r = 0.0, x = 0.0;    // series, pu
  double g = 0.0, b = 0.0;    // series admittance, pu
  double b_ch = 0.0;          // total charging susceptance, pu
  double g_c = 0.0, b_c = 0.0;
};

struct HvacOption {
  std::string name;
  double voltage_kv = 345.0;
  double capacity_mw = 750.0;              // MVA rating at unity factor
  double conductor_cost_per_km = 0.84;     // M$/km
  double substation_pair_cost_per_km = 0.1412;  // M$/km, both ends
  double r_ohm_per_km = 0.0339;
  double x_ohm_per_km = 0.288;
  double b_ch_us_per_km = 3.803;           // micro-Siemens/km
  double theta_min_rad = -0.785398163397448280;  // -45 deg
  double theta_max_rad = 0.785398163397448280;
  int max_links = 1;
  double length_km = 0.0;                  // resolved from the corridor
  PuBranch pu;                             // filled by validate_case

  double install_cost() const {
    return (conductor_cost_per_km + substation_pair_cost_per_km) * length_km;
  }
};

enum class CorridorKind { Pipeline, Hvdc, Hvac };

struct Corridor {
  std::string from;  // junction ids for gas, bus ids for electric
  std::string to;    // gas orientation from->to is fixed a-priori
  CorridorKind kind = CorridorKind::Pipeline;
  double length_km = 0.0;
  std::vector<std::string> options;  // catalog names
  // Resolved per-corridor instances (validate_case fills the matching list):
  std::vector<PipelineOption> pipe_options;
  std::vector<HvdcOption> hvdc_options;
  std::vector<HvacOption> hvac_options;
};

struct TimeIndex {
  double dt_s = 1800.0;     // step length
  int steps = 0;            // |T|
  double scale = 1.0;       // representative-period to year factor
  double discount_rate = 0.06;
  double life_years = 20.0;

  double dt_hours() const { return dt_s / 3600.0; }
};

// Catalog of candidate technology options (lengths unresolved).
struct Catalog {
  std::vector<PipelineOption> pipeline;
  std::vector<HvdcOption> hvdc;
  std::vector<HvacOption> hvac;

  const PipelineOption* find_pipeline(const std::string& name) const;
  const HvdcOption* find_hvdc(const std::string& name) const;
  const HvacOption* find_hvac(const std::string& name) const;
};

// Bundled defaults: the technology cost/parameter tables used throughout.
Catalog default_catalog();

struct PlanningCase {
  std::string name;
  Constants constants;
  TimeIndex time;
  Catalog catalog;  // defaults merged with case overrides
  std::vector<Bus> buses;
  std::vector<Junction> junctions;
  std::vector<ElectrolyserSite> sites;
  std::vector<Corridor> corridors;
  std::map<std::string, std::vector<double>> profiles;  // column -> series

  // False while pressure fields are still MPa and corridor options are
  // unresolved; validate_case() normalizes and sets it.
  bool si_normalized = false;

  int bus_index(const std::string& id) const;
  int junction_index(const std::string& id) const;
  // Available RES power bound at bus b, step t (MW).
  double res_bound(int bus, int t) const;
  double total_electrolyser_flow_cap() const;  // m3/s, Sum cap*eta/HHV
};

struct ValidationIssue {
  std::string path;
  std::string message;
};

struct ValidationResult {
  PlanningCase normalized;
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// Checks every type invariant, resolves corridor option references and
// profile lengths, converts MPa -> Pa and fills derived per-unit branch
// parameters. Collects every violation instead of stopping at the first.
ValidationResult validate_case(const PlanningCase& raw);

// pi-model per-unit parameters from total ohmic values on the given bases.
// Rejects r == x == 0.
PuBranch per_unit_line(const HvacOption& option, double length_km,
                       double base_mva, double base_kv);

struct TimeConfig {
  double step_hours = 0.5;
  double weeks = 4.0;  // fractional weeks allowed (e.g. 1/7 for one day)
  double discount_rate = 0.06;
  double life_years = 20.0;
};

// |T| = (24/step_hours) * 7 * weeks, scale = 365.25 / (7 * weeks).
// Requires step_hours to divide 24 and the step count to come out integral.
TimeIndex build_time_index(const TimeConfig& config);

}  // namespace h2plan
