#pragma once

// Composes the full mixed-integer conic relaxation: shared bus/junction
// variables, every module emitter, the polyhedral average-pressure
// envelope, investment costs and the NPV hydrogen-sales objective.

#include <string>
#include <vector>

#include "gaspipe.hpp"
#include "hvac.hpp"
#include "hvdc.hpp"
#include "netmodel.hpp"
#include "program.hpp"
#include "registry.hpp"

namespace h2plan {

// Supporting-hyperplane cuts of h(x,y) = -xy/(x+y) at an n x n tangent
// grid over the box; duplicates (h is homogeneous, so a whole ray shares
// one plane) are removed. Each cut under-estimates h on the whole box.
std::vector<EnvelopeCut> envelope_avg_pressure(double x_lo, double x_hi,
                                               double y_lo, double y_hi,
                                               int n_cuts);

// Evaluate one cut's contribution to the average-pressure lower bound:
// (2/3) ((1+gx) x + (1+gy) y + c0).
double envelope_cut_value(const EnvelopeCut& cut, double x, double y);

// scale * (1/iota) * (1 - (1+iota)^-life)
double annuity_factor(double iota, double life_years, double scale);

struct AssembleOptions {
  int envelope_cuts = 5;          // tangent grid points per axis
  bool cones_all_circuits = false;
};

struct Assembled {
  ConicProgram program;
  Registry registry;
  double annuity = 0.0;
};

// Builds the complete program from a validated case. Throws on emitter
// failure or when the structural convexity audit finds an issue.
Assembled assemble(const PlanningCase& c, const AssembleOptions& opt = {});

struct CostBreakdown {
  double ptg = 0.0;       // electrolyser + compressor, M$
  double pipe = 0.0;
  double hvdc = 0.0;
  double hvac = 0.0;      // lines + SVCs
  double h2_revenue = 0.0;  // NPV of sales, M$
  double total() const { return ptg + pipe + hvdc + hvac - h2_revenue; }
};

struct ChosenTech {
  int corridor = -1;
  CorridorKind kind = CorridorKind::Pipeline;
  std::string option;
  int circuits = 0;
  double invest_cost = 0.0;  // M$
};

struct PlanSolution {
  std::vector<double> x;
  double objective = 0.0;  // program objective at x
  std::vector<ChosenTech> chosen;
  CostBreakdown costs;
  double tf = 0.0;  // energy transmission factor
  double available_mwh = 0.0, accommodated_mwh = 0.0;
  GasResiduals gas;
  HvdcResiduals hvdc;
  std::vector<AngleRecovery> angles;
  double linepack_telescoping_max = 0.0;
  double cost_audit_gap = 0.0;  // |recomputed objective - solver objective|
};

// Decodes a primal vector into investment decisions, derived metrics and
// the three residual reports. Throws on dimension mismatch.
PlanSolution decode(const std::vector<double>& x, const Assembled& a,
                    const PlanningCase& c);

}  // namespace h2plan
