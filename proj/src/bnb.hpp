#pragma once

// Branch-and-bound over the program's investment binaries with continuous
// conic node relaxations through the backend contract. Best-bound node
// selection, most-fractional branching with prefix propagation across
// parallel-circuit groups, deterministic in single-worker mode.

#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "backend.hpp"
#include "program.hpp"
#include "registry.hpp"

namespace h2plan {

// Per-binary prefix-group metadata (parallel circuits of one option).
struct BinaryGroups {
  std::vector<int> group;    // -1: independent binary
  std::vector<int> circuit;  // position within the group
};

BinaryGroups groups_from_registry(const ConicProgram& p, const Registry& reg);

struct NodeRelaxation {
  std::vector<int8_t> fixings;  // kBinFree / kBinZero / kBinOne per binary
  double parent_bound = -std::numeric_limits<double>::infinity();
  int depth = 0;
  long seq = 0;
  enum class Status { Pending, Solved, Pruned, Infeasible } status =
      Status::Pending;
};

struct SolveOptions {
  double rel_gap = 1e-6;
  double abs_gap = 1e-9;
  long node_limit = 1000000;
  double time_limit_s = 0.0;  // <= 0: none
  double node_time_limit_s = 600.0;
  int workers = 1;
  double int_tol = 1e-5;
  bool record_prunes = false;
  std::ostream* progress = nullptr;
  SocpSettings backend;  // node-solver settings
};

struct Incumbent {
  std::vector<int8_t> assignment;
  std::vector<double> x;
  double objective = 0.0;
  double feas_violation = 0.0;  // certificate: max row violation at x
};

enum class MipStatus {
  Optimal,       // gap target met (possibly proven exactly)
  Infeasible,    // no feasible assignment exists
  Unbounded,
  LimitReached,  // node or time limit hit; honest bound returned
  Error,
};

struct PrunedRecord {
  std::vector<int8_t> fixings;
  double bound = 0.0;
};

struct MipStats {
  long nodes_solved = 0;
  long nodes_pruned_bound = 0;
  long nodes_infeasible = 0;
  long nodes_trouble = 0;  // pruned-with-warning after one retry
  double wall_s = 0.0;
};

struct MipResult {
  MipStatus status = MipStatus::Error;
  std::optional<Incumbent> incumbent;
  double best_bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  MipStats stats;
  std::vector<PrunedRecord> prunes;  // when record_prunes

  bool gap_met(const SolveOptions& o) const {
    if (!incumbent) return false;
    return incumbent->objective - best_bound <=
           std::max(o.abs_gap, o.rel_gap * std::abs(incumbent->objective));
  }
};

// Most-fractional branching with prefix propagation. Throws when every
// free binary is integral.
std::pair<NodeRelaxation, NodeRelaxation> branch(
    const NodeRelaxation& node, const std::vector<double>& x,
    const ConicProgram& prog, const BinaryGroups& groups, double int_tol);

// Best-bound-first: lowest bound, ties to the deeper node, then FIFO.
// Returns an index into `open`.
size_t select_node(const std::vector<NodeRelaxation>& open);

MipResult solve_mip(const ConicProgram& prog, const BinaryGroups& groups,
                    const SolveOptions& options, ConicBackend& backend);

// Convenience: builds an IPM backend from options.backend.
MipResult solve_mip(const ConicProgram& prog, const BinaryGroups& groups,
                    const SolveOptions& options);

struct OracleEntry {
  std::vector<int8_t> assignment;
  double objective = 0.0;
  bool feasible = false;
};

struct OracleResult {
  std::optional<Incumbent> best;
  std::vector<OracleEntry> entries;
};

// Exhaustive enumeration of every prefix/cardinality-consistent binary
// assignment (guarded to <= 20 binaries); ground truth for solver tests.
OracleResult enumerate_oracle(const ConicProgram& prog,
                              const BinaryGroups& groups,
                              ConicBackend& backend,
                              double node_time_limit_s = 600.0);

}  // namespace h2plan
