#pragma once

// Continuous conic backend contract used by the branch-and-bound driver:
// solves the program's continuous relaxation with binaries fixed or
// relaxed to [0,1]. Deterministic for fixed inputs and tolerances.

#include <memory>
#include <vector>

#include "program.hpp"
#include "socp.hpp"

namespace h2plan {

enum class BackendStatus {
  Optimal,
  Infeasible,
  Unbounded,
  NumericalTrouble,
  TimeLimit,
};

struct BackendResult {
  BackendStatus status = BackendStatus::NumericalTrouble;
  std::vector<double> x;     // primal point in program variable space
  double objective = 0.0;    // program objective at x (incl. constant)
  double dual_bound = 0.0;   // valid lower bound; -inf when not proven
  bool certificate = false;  // dual value / infeasibility certificate held
  int iters = 0;
};

// Binary fixing states, indexed like ConicProgram::binaries().
enum : int8_t { kBinFree = -1, kBinZero = 0, kBinOne = 1 };

class ConicBackend {
 public:
  virtual ~ConicBackend() = default;
  // `tightened` requests a retry at sharper tolerances after numerical
  // trouble; backends may ignore it.
  virtual BackendResult solve(const std::vector<int8_t>& fixings,
                              double time_limit_s,
                              bool tightened = false) = 0;
  virtual std::unique_ptr<ConicBackend> clone() const = 0;
  virtual int num_binaries() const = 0;
};

// Interior-point backend over the bundled SOCP solver. `tol` sets the
// solver's feasibility/duality targets.
std::unique_ptr<ConicBackend> make_ipm_backend(const ConicProgram& program,
                                               const SocpSettings& settings);

}  // namespace h2plan
