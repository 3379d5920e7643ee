#pragma once

// Variable registry shared by the constraint emitters and the decoder:
// per-entity tables of ConicProgram variable ids, filled in emission
// order. Indexing convention for time-expanded tables: entity*T + t.

#include <array>
#include <map>
#include <string>
#include <vector>

namespace h2plan {

struct SiteVars {
  std::vector<int> p;    // electrolyser input power, MW
  std::vector<int> phi;  // H2 output flow, m3/s
  std::vector<int> w;    // water stock, kg
  std::vector<int> pcp;  // compressor power, MW
  int p_hat = -1;        // peak epigraphs
  int pcp_hat = -1;
  bool emitted() const { return !p.empty(); }
};

struct PipeOptionVars {
  int z = -1;
  std::vector<int> phi_in, phi_out, phi;  // m3/s
  std::vector<int> p_m, p_n, p_avg;       // Pa
  std::vector<int> lp;                    // linepack, m3
};

struct GasCorridorVars {
  int corridor = -1;
  std::vector<PipeOptionVars> options;
  bool emitted() const { return !options.empty(); }
};

// HVDC circuit; end index 0 = from-bus converter, 1 = to-bus converter.
struct HvdcCircuitVars {
  int z = -1;
  std::array<std::vector<int>, 2> p_ac;   // AC-side injection into converter, MW
  std::array<std::vector<int>, 2> q_ac;   // MVAr
  std::array<std::vector<int>, 2> p_dc;   // DC-side power into converter, MW
  std::array<std::vector<int>, 2> loss;   // MW
  std::array<std::vector<int>, 2> cur;    // AC current magnitude, kA
  std::array<std::vector<int>, 2> cur2;   // lifted current square, kA^2
  std::vector<int> w_i, w_j, w_ij;        // DC squared voltages, kV^2
  std::vector<int> p_fwd, p_rev;          // line power either direction, MW
};

struct HvdcOptionVars {
  std::vector<HvdcCircuitVars> circuits;
};

struct HvdcCorridorVars {
  int corridor = -1;
  std::vector<HvdcOptionVars> options;
  bool emitted() const { return !options.empty(); }
};

struct HvacCircuitVars {
  int z = -1;
  std::vector<int> w_i, w_j;        // lifted per-circuit bus voltages, pu^2
  std::vector<int> w_r, w_im;       // lifted cross terms, pu^2
  std::vector<int> p_fwd, p_rev;    // pu flows
  std::vector<int> q_fwd, q_rev;
};

struct HvacOptionVars {
  std::vector<HvacCircuitVars> circuits;
};

struct HvacCorridorVars {
  int corridor = -1;
  std::vector<HvacOptionVars> options;
  bool emitted() const { return !options.empty(); }
};

// One supporting-hyperplane cut of the average-pressure term:
// p_avg >= (2/3) * ((1 + gx) x + (1 + gy) y + c0).
struct EnvelopeCut {
  double gx = 0.0, gy = 0.0, c0 = 0.0;
};

struct Registry {
  int steps = 0;

  std::vector<int> bus_w;      // bus*T+t, pu^2
  std::vector<int> bus_qvar;   // bus*T+t, MVAr; -1 where no SVC
  std::vector<int> bus_qhat;   // per bus; -1 where no SVC
  std::vector<int> bus_pres;   // bus*T+t, MW; -1 where no RES
  std::vector<int> junc_p;     // junction*T+t, Pa
  std::vector<int> junc_d;     // junction*T+t, m3/s

  std::vector<SiteVars> sites;
  std::vector<GasCorridorVars> gas;
  std::vector<HvdcCorridorVars> hvdc;
  std::vector<HvacCorridorVars> hvac;

  // Branch metadata: prefix group of parallel circuits. Binaries without a
  // group (pipe options) map to group -1.
  struct BinaryMeta {
    int group = -1;    // unique per (corridor, option) circuit family
    int circuit = 0;   // position within the group
  };
  std::map<int, BinaryMeta> binary_meta;

  int at(const std::vector<int>& table, int entity, int t) const {
    return table[static_cast<size_t>(entity) * steps + t];
  }
};

}  // namespace h2plan
