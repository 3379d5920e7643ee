#include "electrolyser.hpp"

#include <cmath>
#include <stdexcept>

#include "gaspipe.hpp"

namespace h2plan {

double power_to_flow(double p_mw, double eta, double hhv) {
  if (p_mw < 0) throw std::invalid_argument("power_to_flow: negative power");
  return p_mw * eta / hhv;
}

double water_step(double w_prev_kg, double flow_m3s, double rho_kg_m3,
                  double dt_s) {
  if (w_prev_kg < 0)
    throw std::invalid_argument("water_step: negative stock");
  return w_prev_kg - 10.0 * flow_m3s * rho_kg_m3 * dt_s;
}

double compressor_coefficient(double inlet_pa, double outlet_pa,
                              const Constants& k, double eta_cp, double z) {
  if (inlet_pa <= 0) throw std::invalid_argument("compressor: inlet <= 0");
  if (outlet_pa < inlet_pa)
    throw std::invalid_argument("compressor: outlet below inlet");
  const double g = k.isentropic_exponent;
  const double ratio_term = std::pow(outlet_pa / inlet_pa, (g - 1.0) / g) - 1.0;
  return k.compressor_k_mj_per_k_m3 * k.gas_temperature_k * z * g /
         ((g - 1.0) * eta_cp) * ratio_term;
}

double compressor_power(double flow_m3s, double inlet_pa, double outlet_pa,
                        const Constants& k, double eta_cp, double z) {
  if (flow_m3s < 0) throw std::invalid_argument("compressor: negative flow");
  return compressor_coefficient(inlet_pa, outlet_pa, k, eta_cp, z) * flow_m3s;
}

ElectrolyserRows emit_electrolyser(ConicProgram& prog, Registry& reg,
                                   const PlanningCase& c, int site_index) {
  const ElectrolyserSite& site = c.sites[site_index];
  SiteVars& sv = reg.sites[site_index];
  if (sv.emitted())
    throw std::logic_error("emit_electrolyser: duplicate emission for site " +
                           site.bus);
  const int T = c.time.steps;
  const Constants& k = c.constants;
  const std::string base = "ptg[" + site.bus + "]";

  const double flow_cap = site.cap_mw * site.eta_ptg / k.hhv_mj_per_m3;
  const int jm = c.junction_index(site.junction);
  const double outlet = c.junctions[jm].p_max;
  const double z_cp = srk_z(k.gas_temperature_k, site.out_pressure, k);
  const double kappa =
      site.demand_site
          ? 0.0
          : compressor_coefficient(site.out_pressure, outlet, k, site.eta_cp,
                                   z_cp);

  sv.p_hat = prog.add_var(VarKind::Continuous, 0.0, site.cap_mw,
                          base + ".p_peak");
  sv.pcp_hat = prog.add_var(VarKind::Continuous, 0.0, kappa * flow_cap,
                            base + ".pcp_peak");
  const double inf = std::numeric_limits<double>::infinity();
  for (int t = 0; t < T; ++t) {
    const std::string st = "[t" + std::to_string(t) + "]";
    sv.p.push_back(prog.add_var(VarKind::Continuous, 0.0, site.cap_mw,
                                base + ".p" + st));
    sv.phi.push_back(prog.add_var(VarKind::Continuous, 0.0, flow_cap,
                                  base + ".phi" + st));
    // the stock floor is an explicit row below
    sv.w.push_back(prog.add_var(VarKind::Continuous, -inf, site.w0_kg,
                                base + ".w" + st));
    sv.pcp.push_back(prog.add_var(VarKind::Continuous, 0.0,
                                  site.demand_site ? 0.0 : kappa * flow_cap,
                                  base + ".pcp" + st));
  }

  ElectrolyserRows rows;
  const double water_rate = k.water_per_kg_h2 * k.rho_kg_per_m3 * c.time.dt_s;
  for (int t = 0; t < T; ++t) {
    // conversion: phi - (eta/HHV) p = 0
    prog.add_row(Sense::EQ, 0.0,
                 {{sv.phi[t], 1.0},
                  {sv.p[t], -site.eta_ptg / k.hhv_mj_per_m3}});
    ++rows.conversion;
    // water recursion: w_t - w_{t-1} + 10 rho dt phi_t = 0
    if (t == 0) {
      prog.add_row(Sense::EQ, site.w0_kg,
                   {{sv.w[0], 1.0}, {sv.phi[0], water_rate}});
    } else {
      prog.add_row(Sense::EQ, 0.0,
                   {{sv.w[t], 1.0},
                    {sv.w[t - 1], -1.0},
                    {sv.phi[t], water_rate}});
    }
    ++rows.water;
    prog.add_row(Sense::GE, 0.0, {{sv.w[t], 1.0}});
    ++rows.water_floor;
    // compressor sizing, linear with both pressures fixed
    if (site.demand_site) {
      prog.add_row(Sense::EQ, 0.0, {{sv.pcp[t], 1.0}});
    } else {
      prog.add_row(Sense::EQ, 0.0, {{sv.pcp[t], 1.0}, {sv.phi[t], -kappa}});
    }
    ++rows.compressor;
    // peak epigraphs for the investment cost
    prog.add_row(Sense::LE, 0.0, {{sv.p[t], 1.0}, {sv.p_hat, -1.0}});
    prog.add_row(Sense::LE, 0.0, {{sv.pcp[t], 1.0}, {sv.pcp_hat, -1.0}});
    rows.epigraph += 2;
  }
  return rows;
}

}  // namespace h2plan
