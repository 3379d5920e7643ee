#include "hvac.hpp"

#include <cmath>
#include <stdexcept>

namespace h2plan {

BranchFlow branch_flow(double w_i, double w_r, double w_im,
                       const PuBranch& pu) {
  // As printed, both flow equations repeat w_r where the pi-model
  // derivation requires w_im in the last term (and a q-equation sign);
  // these are the standard identities in the lifted variables.
  BranchFlow f;
  f.p = pu.g_c * w_i - pu.g * w_r - pu.b * w_im;
  f.q = pu.b_c * w_i + pu.b * w_r - pu.g * w_im;
  return f;
}

HvacRows emit_hvac(ConicProgram& prog, Registry& reg, const PlanningCase& c,
                   int corridor_index, bool cones_all_circuits) {
  const Corridor& co = c.corridors[corridor_index];
  if (co.hvac_options.empty())
    throw std::logic_error("emit_hvac: corridor without options");
  HvacCorridorVars* hv = nullptr;
  for (auto& h : reg.hvac)
    if (h.corridor == corridor_index) hv = &h;
  if (!hv) throw std::logic_error("emit_hvac: corridor not registered");
  if (hv->emitted()) throw std::logic_error("emit_hvac: duplicate emission");

  const int T = c.time.steps;
  const Bus& bi = c.buses[c.bus_index(co.from)];
  const Bus& bj = c.buses[c.bus_index(co.to)];
  const double wi_lo = bi.v_min * bi.v_min, wi_hi = bi.v_max * bi.v_max;
  const double wj_lo = bj.v_min * bj.v_min, wj_hi = bj.v_max * bj.v_max;
  const double vv_hi = bi.v_max * bj.v_max;
  HvacRows rows;

  for (size_t oi = 0; oi < co.hvac_options.size(); ++oi) {
    const HvacOption& opt = co.hvac_options[oi];
    const PuBranch& pu = opt.pu;
    const double s_pu = opt.capacity_mw / c.constants.base_mva;
    const double wr_lo = bi.v_min * bj.v_min * std::cos(opt.theta_max_rad);
    const double wim_lo = vv_hi * std::sin(opt.theta_min_rad);
    const double wim_hi = vv_hi * std::sin(opt.theta_max_rad);
    const double flow_cap =
        std::abs(pu.g_c) * wi_hi + std::abs(pu.g) * vv_hi +
        std::abs(pu.b) * vv_hi + std::abs(pu.b_c) * wi_hi;

    HvacOptionVars ov;
    const int group_id = static_cast<int>(reg.binary_meta.size()) + 1;
    for (int ci = 0; ci < opt.max_links; ++ci) {
      HvacCircuitVars cv;
      const std::string base = "hvac[" + co.from + "-" + co.to + "." +
                               opt.name + ".c" + std::to_string(ci) + "]";
      cv.z = prog.add_var(VarKind::Binary, 0.0, 1.0, base + ".z");
      reg.binary_meta[cv.z] = {group_id, ci};
      ++rows.binaries;
      for (int t = 0; t < T; ++t) {
        const std::string st = "[t" + std::to_string(t) + "]";
        cv.w_i.push_back(prog.add_var(VarKind::Continuous, 0.0, wi_hi,
                                      base + ".w_i" + st));
        cv.w_j.push_back(prog.add_var(VarKind::Continuous, 0.0, wj_hi,
                                      base + ".w_j" + st));
        cv.w_r.push_back(prog.add_var(VarKind::Continuous, 0.0, vv_hi,
                                      base + ".w_r" + st));
        cv.w_im.push_back(prog.add_var(VarKind::Continuous,
                                       std::min(0.0, wim_lo),
                                       std::max(0.0, wim_hi),
                                       base + ".w_im" + st));
        cv.p_fwd.push_back(prog.add_var(VarKind::Continuous, -flow_cap,
                                        flow_cap, base + ".p_ij" + st));
        cv.p_rev.push_back(prog.add_var(VarKind::Continuous, -flow_cap,
                                        flow_cap, base + ".p_ji" + st));
        cv.q_fwd.push_back(prog.add_var(VarKind::Continuous, -flow_cap,
                                        flow_cap, base + ".q_ij" + st));
        cv.q_rev.push_back(prog.add_var(VarKind::Continuous, -flow_cap,
                                        flow_cap, base + ".q_ji" + st));
      }

      for (int t = 0; t < T; ++t) {
        // flow definitions in the lifted variables, both directions
        prog.add_row(Sense::EQ, 0.0,
                     {{cv.p_fwd[t], 1.0},
                      {cv.w_i[t], -pu.g_c},
                      {cv.w_r[t], pu.g},
                      {cv.w_im[t], pu.b}});
        prog.add_row(Sense::EQ, 0.0,
                     {{cv.p_rev[t], 1.0},
                      {cv.w_j[t], -pu.g_c},
                      {cv.w_r[t], pu.g},
                      {cv.w_im[t], -pu.b}});
        prog.add_row(Sense::EQ, 0.0,
                     {{cv.q_fwd[t], 1.0},
                      {cv.w_i[t], -pu.b_c},
                      {cv.w_r[t], -pu.b},
                      {cv.w_im[t], pu.g}});
        prog.add_row(Sense::EQ, 0.0,
                     {{cv.q_rev[t], 1.0},
                      {cv.w_j[t], -pu.b_c},
                      {cv.w_r[t], -pu.b},
                      {cv.w_im[t], -pu.g}});
        rows.flow_rows += 4;

        // lifted terms switched off with the circuit
        prog.add_row(Sense::LE, 0.0, {{cv.w_i[t], 1.0}, {cv.z, -wi_hi}});
        prog.add_row(Sense::GE, 0.0, {{cv.w_i[t], 1.0}, {cv.z, -wi_lo}});
        prog.add_row(Sense::LE, 0.0, {{cv.w_j[t], 1.0}, {cv.z, -wj_hi}});
        prog.add_row(Sense::GE, 0.0, {{cv.w_j[t], 1.0}, {cv.z, -wj_lo}});
        prog.add_row(Sense::LE, 0.0, {{cv.w_r[t], 1.0}, {cv.z, -vv_hi}});
        prog.add_row(Sense::GE, 0.0, {{cv.w_r[t], 1.0}, {cv.z, -wr_lo}});
        prog.add_row(Sense::LE, 0.0, {{cv.w_im[t], 1.0}, {cv.z, -wim_hi}});
        prog.add_row(Sense::GE, 0.0, {{cv.w_im[t], 1.0}, {cv.z, -wim_lo}});
        rows.lift_onoff_rows += 8;

        // equal to the shared bus voltage when installed
        const int wbi = reg.at(reg.bus_w, c.bus_index(co.from), t);
        const int wbj = reg.at(reg.bus_w, c.bus_index(co.to), t);
        prog.add_row(Sense::LE, wi_hi,
                     {{wbi, 1.0}, {cv.w_i[t], -1.0}, {cv.z, wi_hi}});
        prog.add_row(Sense::GE, wi_lo,
                     {{wbi, 1.0}, {cv.w_i[t], -1.0}, {cv.z, wi_lo}});
        prog.add_row(Sense::LE, wj_hi,
                     {{wbj, 1.0}, {cv.w_j[t], -1.0}, {cv.z, wj_hi}});
        prog.add_row(Sense::GE, wj_lo,
                     {{wbj, 1.0}, {cv.w_j[t], -1.0}, {cv.z, wj_lo}});
        rows.coupling_rows += 4;

        // parallel circuits tied to circuit 1
        if (ci > 0) {
          const HvacCircuitVars& c1 = ov.circuits[0];
          prog.add_row(Sense::GE, 0.0,
                       {{c1.w_r[t], 1.0}, {cv.w_r[t], -1.0}});
          prog.add_row(Sense::LE, vv_hi,
                       {{c1.w_r[t], 1.0}, {cv.w_r[t], -1.0}, {cv.z, vv_hi}});
          prog.add_row(Sense::GE, wim_lo,
                       {{c1.w_im[t], 1.0}, {cv.w_im[t], -1.0}, {cv.z, wim_lo}});
          prog.add_row(Sense::LE, wim_hi,
                       {{c1.w_im[t], 1.0}, {cv.w_im[t], -1.0}, {cv.z, wim_hi}});
          rows.tie_rows += 4;
        }

        const bool with_cones = cones_all_circuits || ci == 0;
        if (with_cones) {
          prog.add_rsoc({{{cv.w_i[t], 1.0}}, 0.0}, {{{cv.w_j[t], 1.0}}, 0.0},
                        {{{{cv.w_r[t], 1.0}}, 0.0},
                         {{{cv.w_im[t], 1.0}}, 0.0}});
          ++rows.cones;
          prog.add_row(Sense::GE, 0.0,
                       {{cv.w_im[t], 1.0},
                        {cv.w_r[t], -std::tan(opt.theta_min_rad)}});
          prog.add_row(Sense::LE, 0.0,
                       {{cv.w_im[t], 1.0},
                        {cv.w_r[t], -std::tan(opt.theta_max_rad)}});
          rows.angle_rows += 2;
          prog.add_soc({{{cv.z, s_pu}}, 0.0},
                       {{{{cv.p_fwd[t], 1.0}}, 0.0},
                        {{{cv.q_fwd[t], 1.0}}, 0.0}});
          prog.add_soc({{{cv.z, s_pu}}, 0.0},
                       {{{{cv.p_rev[t], 1.0}}, 0.0},
                        {{{cv.q_rev[t], 1.0}}, 0.0}});
          rows.mva_cones += 2;
        }
      }
      ov.circuits.push_back(std::move(cv));
    }

    std::vector<LinTerm> card;
    for (const auto& cv : ov.circuits) card.push_back({cv.z, 1.0});
    prog.add_row(Sense::LE, static_cast<double>(opt.max_links), card);
    ++rows.seq_rows;
    for (size_t ci = 1; ci < ov.circuits.size(); ++ci) {
      prog.add_row(Sense::LE, 0.0,
                   {{ov.circuits[ci].z, 1.0}, {ov.circuits[ci - 1].z, -1.0}});
      ++rows.seq_rows;
    }
    hv->options.push_back(std::move(ov));
  }
  return rows;
}

BalanceRows emit_balances(ConicProgram& prog, Registry& reg,
                          const PlanningCase& c) {
  const int T = c.time.steps;
  const double sb = c.constants.base_mva;
  BalanceRows rows;

  for (size_t b = 0; b < c.buses.size(); ++b) {
    const Bus& bus = c.buses[b];
    // collect incident devices once
    std::vector<const HvacCircuitVars*> ac_out, ac_in;
    std::vector<std::pair<const HvdcCircuitVars*, int>> dc_ends;
    for (const auto& h : reg.hvac) {
      const Corridor& co = c.corridors[h.corridor];
      const bool from = c.bus_index(co.from) == static_cast<int>(b);
      const bool to = c.bus_index(co.to) == static_cast<int>(b);
      if (!from && !to) continue;
      for (const auto& ov : h.options)
        for (const auto& cv : ov.circuits)
          (from ? ac_out : ac_in).push_back(&cv);
    }
    for (const auto& h : reg.hvdc) {
      const Corridor& co = c.corridors[h.corridor];
      int end = -1;
      if (c.bus_index(co.from) == static_cast<int>(b)) end = 0;
      if (c.bus_index(co.to) == static_cast<int>(b)) end = 1;
      if (end < 0) continue;
      for (const auto& ov : h.options)
        for (const auto& cv : ov.circuits) dc_ends.push_back({&cv, end});
    }
    std::vector<int> site_ids;
    for (size_t s = 0; s < c.sites.size(); ++s)
      if (c.bus_index(c.sites[s].bus) == static_cast<int>(b))
        site_ids.push_back(static_cast<int>(s));

    const bool has_res = !bus.res.empty();
    if (!has_res && ac_out.empty() && ac_in.empty() && dc_ends.empty() &&
        site_ids.empty())
      throw std::logic_error("emit_balances: bus " + bus.id +
                             " has no incident device and no profile");

    for (int t = 0; t < T; ++t) {
      // active: p_res = S_b * sum p_ac + sum p_cv + sum p_ptg
      std::vector<LinTerm> act;
      if (has_res) act.push_back({reg.at(reg.bus_pres, b, t), -1.0});
      for (const auto* cv : ac_out) act.push_back({cv->p_fwd[t], sb});
      for (const auto* cv : ac_in) act.push_back({cv->p_rev[t], sb});
      for (const auto& [cv, e] : dc_ends) act.push_back({cv->p_ac[e][t], 1.0});
      for (int s : site_ids) act.push_back({reg.sites[s].p[t], 1.0});
      prog.add_row(Sense::EQ, 0.0, act);
      ++rows.active;

      // reactive: -q_var = S_b * sum q_ac + sum q_cv
      std::vector<LinTerm> rea;
      if (reg.at(reg.bus_qvar, b, t) >= 0)
        rea.push_back({reg.at(reg.bus_qvar, b, t), 1.0});
      for (const auto* cv : ac_out) rea.push_back({cv->q_fwd[t], sb});
      for (const auto* cv : ac_in) rea.push_back({cv->q_rev[t], sb});
      for (const auto& [cv, e] : dc_ends) rea.push_back({cv->q_ac[e][t], 1.0});
      prog.add_row(Sense::EQ, 0.0, rea);
      ++rows.reactive;

      // SVC peak epigraph |q_var| <= q_hat
      if (reg.at(reg.bus_qvar, b, t) >= 0) {
        const int qv = reg.at(reg.bus_qvar, b, t);
        const int qh = reg.bus_qhat[b];
        prog.add_row(Sense::LE, 0.0, {{qv, 1.0}, {qh, -1.0}});
        prog.add_row(Sense::GE, 0.0, {{qv, 1.0}, {qh, 1.0}});
        rows.svc_epigraph += 2;
      }
    }
  }
  return rows;
}

std::vector<AngleRecovery> recover_angles(const std::vector<double>& x,
                                          const PlanningCase& c,
                                          const Registry& reg) {
  std::vector<AngleRecovery> out;
  const int T = c.time.steps;
  for (const auto& h : reg.hvac) {
    for (size_t oi = 0; oi < h.options.size(); ++oi) {
      const auto& c1 = h.options[oi].circuits[0];
      if (x[c1.z] < 0.5) continue;
      for (int t = 0; t < T; ++t) {
        AngleRecovery a;
        a.corridor = h.corridor;
        a.option = static_cast<int>(oi);
        a.t = t;
        const double wr = x[c1.w_r[t]];
        const double wim = x[c1.w_im[t]];
        a.theta_rad = std::atan2(wim, wr);
        a.cone_gap = x[c1.w_i[t]] * x[c1.w_j[t]] - (wr * wr + wim * wim);
        out.push_back(a);
      }
    }
  }
  return out;
}

}  // namespace h2plan
