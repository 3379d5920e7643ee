#pragma once

// Hydrogen pipeline physics and constraints: SRK compressibility,
// Weymouth flow coefficient, linepack dynamics, the option binaries with
// their pressure couplings, junction gas balances, and the stand-alone
// residual evaluation used as the relaxation-tightness oracle.

#include <vector>

#include "netmodel.hpp"
#include "program.hpp"
#include "registry.hpp"

namespace h2plan {

// Compressibility factor of H2 from the Soave-Redlich-Kwong cubic
// (largest real root).
double srk_z(double temperature_k, double pressure_pa, const Constants& k);

// Weymouth friction factor f = 4 (20.621 D^{1/6})^{-2}.
double weymouth_friction(double diameter_m);

// Flow coefficient Phi (m^6 s^-2 Pa^-2); Z evaluated once at the midpoint
// of the corridor pressure range.
double weymouth_coefficient(const PipelineOption& o, const Constants& k,
                            double p_min_pa, double p_max_pa);

// Linepack coefficient Psi (m^3/Pa), Z at the midpoint pressure.
double linepack_coefficient(const PipelineOption& o, const Constants& k,
                            double p_min_pa, double p_max_pa);

// Physical maximum steady flow sqrt(Phi (pmax^2 - pmin^2)).
double default_flow_cap(const PipelineOption& o, const Constants& k,
                        double p_min_pa, double p_max_pa);

// Exact average pressure across a pipe; 0 at x = y = 0.
double exact_avg_pressure(double p_m, double p_n);

struct PipelineRows {
  int binaries = 0;
  int weymouth_cones = 0;
  int bigm_rows = 0;       // on/off pressure bounds + junction couplings
  int split_rows = 0;
  int linepack_rows = 0;   // definition + continuity
  int envelope_rows = 0;
};

// Emits one gas corridor (all candidate options) with the supplied
// average-pressure envelope geometry. Throws on duplicate emission or a
// corridor without options.
PipelineRows emit_pipeline(ConicProgram& prog, Registry& reg,
                           const PlanningCase& c, int corridor_index,
                           const std::vector<EnvelopeCut>& cuts);

// One gas-balance row per junction and step, including the compressor
// fuel take. Call after every pipeline and electrolyser emitter ran.
int emit_gas_balances(ConicProgram& prog, Registry& reg,
                      const PlanningCase& c);

struct GasResidualEntry {
  int corridor = 0, option = 0, t = 0;
  double weymouth_slack = 0.0;   // Phi(pm^2-pn^2) - phi^2, >= 0 feasible
  double avgpress_slack = 0.0;   // p_avg - exact average pressure
};

struct GasResiduals {
  std::vector<GasResidualEntry> pipes;
  std::vector<double> balance;  // junction*T+t, lhs - rhs of the balance
  double max_balance_abs = 0.0;
  double min_weymouth_slack = 0.0;
};

GasResiduals gas_residuals(const std::vector<double>& x,
                           const PlanningCase& c, const Registry& reg);

}  // namespace h2plan
