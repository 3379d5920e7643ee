#pragma once

// HVAC link model in the lifted w-space: option/circuit binaries with
// sequential installation, branch flows, on/off lift bounds, coupling to
// the shared bus voltage, parallel-circuit ties, rotated-cone and angle
// rows, SVCs and the nodal active/reactive balances.

#include <vector>

#include "netmodel.hpp"
#include "program.hpp"
#include "registry.hpp"

namespace h2plan {

struct BranchFlow {
  double p = 0.0, q = 0.0;
};

// Power flow over a branch in lifted variables, sending-end convention:
// p = g_c w_i - g w_r - b w_im, q = b_c w_i + b w_r - g w_im.
// The receiving end uses the same identity with w_im negated.
BranchFlow branch_flow(double w_i, double w_r, double w_im, const PuBranch& pu);

struct HvacRows {
  int binaries = 0;
  int seq_rows = 0;
  int flow_rows = 0;       // p/q definitions, both directions
  int lift_onoff_rows = 0; // w_i, w_j, w_r, w_im switched by z
  int coupling_rows = 0;   // per-circuit lift equals bus voltage when on
  int tie_rows = 0;        // parallel circuits share w_r, w_im
  int cones = 0;           // rotated cone w_i w_j >= w_r^2 + w_im^2
  int angle_rows = 0;
  int mva_cones = 0;
};

// Cone/angle/MVA rows go on the first circuit only unless
// `cones_all_circuits` is set.
HvacRows emit_hvac(ConicProgram& prog, Registry& reg, const PlanningCase& c,
                   int corridor_index, bool cones_all_circuits = false);

struct BalanceRows {
  int active = 0;
  int reactive = 0;
  int svc_epigraph = 0;
};

// Nodal balances; every link and electrolyser emitter must already have
// run. Throws for a bus with no incident device and no profile.
BalanceRows emit_balances(ConicProgram& prog, Registry& reg,
                          const PlanningCase& c);

struct AngleRecovery {
  int corridor = 0, option = 0, t = 0;
  double theta_rad = 0.0;
  double cone_gap = 0.0;  // w_i w_j - (w_r^2 + w_im^2) on circuit 1
};

// Four-quadrant angle recovery on installed first circuits.
std::vector<AngleRecovery> recover_angles(const std::vector<double>& x,
                                          const PlanningCase& c,
                                          const Registry& reg);

}  // namespace h2plan
