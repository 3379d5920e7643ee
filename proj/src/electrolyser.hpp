#pragma once

// Electrolyser station: power-to-gas conversion, water stock recursion,
// station size cap and compressor power, emitted per site into a
// ConicProgram. The compressor runs between the fixed module output
// pressure and the junction's maximum operating pressure, which keeps its
// power linear in the H2 flow.

#include "netmodel.hpp"
#include "program.hpp"
#include "registry.hpp"

namespace h2plan {

// phi = p * eta / HHV  (m3/s from MW)
double power_to_flow(double p_mw, double eta, double hhv);

// w_next = w_prev - 10 * phi * rho * dt
double water_step(double w_prev_kg, double flow_m3s, double rho_kg_m3,
                  double dt_s);

// Compressor power (MW) for a given flow between inlet and outlet pressure.
double compressor_power(double flow_m3s, double inlet_pa, double outlet_pa,
                        const Constants& k, double eta_cp, double z);

// Linear coefficient MW per (m3/s) with both pressures fixed.
double compressor_coefficient(double inlet_pa, double outlet_pa,
                              const Constants& k, double eta_cp, double z);

struct ElectrolyserRows {
  int conversion = 0;
  int water = 0;
  int compressor = 0;
  int epigraph = 0;
  int water_floor = 0;
  int total() const {
    return conversion + water + compressor + epigraph + water_floor;
  }
};

// Emits all per-step rows for one site. Throws on duplicate emission.
ElectrolyserRows emit_electrolyser(ConicProgram& prog, Registry& reg,
                                   const PlanningCase& c, int site_index);

}  // namespace h2plan
