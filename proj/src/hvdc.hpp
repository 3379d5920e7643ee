#pragma once

// VSC-HVDC link model in lifted variables: option/parallel-circuit
// binaries with sequential installation, converter ratings and loss
// curve, AC/DC coupling, and the DC line flow in squared-voltage
// variables with its rotated-cone relaxation.
//
// Convention per circuit: two converters, end 0 at the from-bus and end 1
// at the to-bus. p_ac/q_ac measure power flowing from the bus into the
// converter; p_dc measures power flowing from the DC node into the
// converter, so p_ac + p_dc = loss at each converter.

#include <vector>

#include "netmodel.hpp"
#include "program.hpp"
#include "registry.hpp"

namespace h2plan {

// Converter loss curve alpha z + beta i + gamma i^2 in MW for i in kA
// (beta in V, gamma in Ohm).
double converter_loss(double i_ka, double z, double alpha_mw, double beta_v,
                      double gamma_ohm);

struct HvdcRows {
  int binaries = 0;
  int seq_rows = 0;        // cardinality + prefix ordering
  int box_rows = 0;        // converter p/q boxes, both ends
  int mva_cones = 0;       // converter MVA, both ends
  int loss_rows = 0;       // loss definition in (i, l)
  int current_rows = 0;    // current cap and lifted-square cap
  int cur2_cones = 0;      // l >= i^2
  int coupling_rows = 0;   // AC/DC and DC-side link equalities
  int conv_cones = 0;      // p^2 + q^2 <= 3 kv^2 w l
  int dcflow_rows = 0;     // line power in squared-voltage variables
  int wdc_rows = 0;        // on/off bounds of the DC lifted voltages
  int dc_cones = 0;        // w_i w_j >= w_ij^2
};

HvdcRows emit_hvdc(ConicProgram& prog, Registry& reg, const PlanningCase& c,
                   int corridor_index);

struct HvdcResidualEntry {
  int corridor = 0, option = 0, circuit = 0, t = 0, end = 0;
  double current_gap = 0.0;  // l - i^2
  double cone_gap = 0.0;     // 3 kv^2 w l - (p^2 + q^2)
};

struct HvdcResiduals {
  std::vector<HvdcResidualEntry> converters;
  // per (corridor, option, circuit, t): w_i w_j - w_ij^2
  std::vector<double> dc_ohm_gap;
  double min_current_gap = 0.0;
  double min_cone_gap = 0.0;
  double min_dc_ohm_gap = 0.0;
};

HvdcResiduals hvdc_residuals(const std::vector<double>& x,
                             const PlanningCase& c, const Registry& reg);

}  // namespace h2plan
