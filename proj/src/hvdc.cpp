#include "hvdc.hpp"

#include <cmath>
#include <stdexcept>

namespace h2plan {

double converter_loss(double i_ka, double z, double alpha_mw, double beta_v,
                      double gamma_ohm) {
  // V * kA = 1e-3 MW; Ohm * kA^2 = MW
  return alpha_mw * z + beta_v * 1e-3 * i_ka + gamma_ohm * i_ka * i_ka;
}

HvdcRows emit_hvdc(ConicProgram& prog, Registry& reg, const PlanningCase& c,
                   int corridor_index) {
  const Corridor& co = c.corridors[corridor_index];
  if (co.hvdc_options.empty())
    throw std::logic_error("emit_hvdc: corridor without options");
  HvdcCorridorVars* hv = nullptr;
  for (auto& h : reg.hvdc)
    if (h.corridor == corridor_index) hv = &h;
  if (!hv) throw std::logic_error("emit_hvdc: corridor not registered");
  if (hv->emitted()) throw std::logic_error("emit_hvdc: duplicate emission");

  const int T = c.time.steps;
  const int bus_from = c.bus_index(co.from);
  const int bus_to = c.bus_index(co.to);
  HvdcRows rows;

  for (size_t oi = 0; oi < co.hvdc_options.size(); ++oi) {
    const HvdcOption& opt = co.hvdc_options[oi];
    const double r_ohm = opt.resistance_ohm();
    const double w_lo = opt.vdc_min_kv * opt.vdc_min_kv;
    const double w_hi = opt.vdc_max_kv * opt.vdc_max_kv;
    const double i_cap = opt.i_cv_max_ka;
    const double kv2_3 = 3.0 * opt.ac_kv * opt.ac_kv;
    // bound on |line power| from the voltage box
    const double p_line_cap = w_hi / r_ohm;

    HvdcOptionVars ov;
    const int group_id = static_cast<int>(reg.binary_meta.size()) + 1000;
    for (int ci = 0; ci < opt.max_links; ++ci) {
      HvdcCircuitVars cv;
      const std::string base = "hvdc[" + co.from + "-" + co.to + "." +
                               opt.name + ".c" + std::to_string(ci) + "]";
      cv.z = prog.add_var(VarKind::Binary, 0.0, 1.0, base + ".z");
      reg.binary_meta[cv.z] = {group_id, ci};
      ++rows.binaries;

      for (int t = 0; t < T; ++t) {
        const std::string st = "[t" + std::to_string(t) + "]";
        for (int e = 0; e < 2; ++e) {
          const std::string be = base + (e == 0 ? ".i" : ".j");
          cv.p_ac[e].push_back(prog.add_var(VarKind::Continuous,
                                            opt.p_cv_min_mw, opt.p_cv_max_mw,
                                            be + ".p_ac" + st));
          cv.q_ac[e].push_back(prog.add_var(VarKind::Continuous,
                                            opt.q_cv_min_mvar,
                                            opt.q_cv_max_mvar,
                                            be + ".q_ac" + st));
          cv.p_dc[e].push_back(prog.add_var(
              VarKind::Continuous, -p_line_cap - opt.s_cv_mva,
              p_line_cap + opt.s_cv_mva, be + ".p_dc" + st));
          cv.loss[e].push_back(prog.add_var(
              VarKind::Continuous, 0.0,
              converter_loss(i_cap, 1.0, opt.loss_alpha_mw, opt.loss_beta_v,
                             opt.loss_gamma_ohm),
              be + ".loss" + st));
          cv.cur[e].push_back(prog.add_var(VarKind::Continuous, 0.0, i_cap,
                                           be + ".i" + st));
          cv.cur2[e].push_back(prog.add_var(VarKind::Continuous, 0.0,
                                            i_cap * i_cap, be + ".l" + st));
        }
        cv.w_i.push_back(prog.add_var(VarKind::Continuous, 0.0, w_hi,
                                      base + ".w_i" + st));
        cv.w_j.push_back(prog.add_var(VarKind::Continuous, 0.0, w_hi,
                                      base + ".w_j" + st));
        cv.w_ij.push_back(prog.add_var(VarKind::Continuous, 0.0, w_hi,
                                       base + ".w_ij" + st));
        cv.p_fwd.push_back(prog.add_var(VarKind::Continuous, -p_line_cap,
                                        p_line_cap, base + ".p_fwd" + st));
        cv.p_rev.push_back(prog.add_var(VarKind::Continuous, -p_line_cap,
                                        p_line_cap, base + ".p_rev" + st));
      }

      for (int t = 0; t < T; ++t) {
        for (int e = 0; e < 2; ++e) {
          const int bus = (e == 0) ? bus_from : bus_to;
          const int w_bus = reg.at(reg.bus_w, bus, t);
          // converter box bounds switched by z
          prog.add_row(Sense::LE, 0.0,
                       {{cv.p_ac[e][t], 1.0}, {cv.z, -opt.p_cv_max_mw}});
          prog.add_row(Sense::GE, 0.0,
                       {{cv.p_ac[e][t], 1.0}, {cv.z, -opt.p_cv_min_mw}});
          prog.add_row(Sense::LE, 0.0,
                       {{cv.q_ac[e][t], 1.0}, {cv.z, -opt.q_cv_max_mvar}});
          prog.add_row(Sense::GE, 0.0,
                       {{cv.q_ac[e][t], 1.0}, {cv.z, -opt.q_cv_min_mvar}});
          rows.box_rows += 4;
          // MVA rating
          prog.add_soc({{{cv.z, opt.s_cv_mva}}, 0.0},
                       {{{{cv.p_ac[e][t], 1.0}}, 0.0},
                        {{{cv.q_ac[e][t], 1.0}}, 0.0}});
          ++rows.mva_cones;
          // loss curve in the lifted current variables
          prog.add_row(Sense::EQ, 0.0,
                       {{cv.loss[e][t], 1.0},
                        {cv.z, -opt.loss_alpha_mw},
                        {cv.cur[e][t], -opt.loss_beta_v * 1e-3},
                        {cv.cur2[e][t], -opt.loss_gamma_ohm}});
          ++rows.loss_rows;
          // current cap and lifted-square cap, both switched by z
          prog.add_row(Sense::LE, 0.0,
                       {{cv.cur[e][t], 1.0}, {cv.z, -i_cap}});
          prog.add_row(Sense::LE, 0.0,
                       {{cv.cur2[e][t], 1.0}, {cv.z, -i_cap * i_cap}});
          rows.current_rows += 2;
          // l >= i^2
          prog.add_rsoc({{{cv.cur2[e][t], 1.0}}, 0.0}, {{}, 1.0},
                        {{{{cv.cur[e][t], 1.0}}, 0.0}});
          ++rows.cur2_cones;
          // AC plus DC inflow covers the loss
          prog.add_row(Sense::EQ, 0.0,
                       {{cv.p_ac[e][t], 1.0},
                        {cv.p_dc[e][t], 1.0},
                        {cv.loss[e][t], -1.0}});
          ++rows.coupling_rows;
          // p^2 + q^2 <= 3 kv^2 w_bus l
          prog.add_rsoc({{{w_bus, 1.0}}, 0.0}, {{{cv.cur2[e][t], 1.0}}, 0.0},
                        {{{{cv.p_ac[e][t], 1.0 / std::sqrt(kv2_3)}}, 0.0},
                         {{{cv.q_ac[e][t], 1.0 / std::sqrt(kv2_3)}}, 0.0}});
          ++rows.conv_cones;
        }
        // DC-side of each converter feeds the line
        prog.add_row(Sense::EQ, 0.0,
                     {{cv.p_dc[0][t], 1.0}, {cv.p_fwd[t], 1.0}});
        prog.add_row(Sense::EQ, 0.0,
                     {{cv.p_dc[1][t], 1.0}, {cv.p_rev[t], 1.0}});
        rows.coupling_rows += 2;
        // line power in squared-voltage variables: p r = w_end - w_ij
        prog.add_row(Sense::EQ, 0.0,
                     {{cv.p_fwd[t], r_ohm},
                      {cv.w_i[t], -1.0},
                      {cv.w_ij[t], 1.0}});
        prog.add_row(Sense::EQ, 0.0,
                     {{cv.p_rev[t], r_ohm},
                      {cv.w_j[t], -1.0},
                      {cv.w_ij[t], 1.0}});
        rows.dcflow_rows += 2;
        // DC voltage boxes switched by z
        for (int wv : {cv.w_i[t], cv.w_j[t], cv.w_ij[t]}) {
          prog.add_row(Sense::LE, 0.0, {{wv, 1.0}, {cv.z, -w_hi}});
          prog.add_row(Sense::GE, 0.0, {{wv, 1.0}, {cv.z, -w_lo}});
          rows.wdc_rows += 2;
        }
        // w_i w_j >= w_ij^2
        prog.add_rsoc({{{cv.w_i[t], 1.0}}, 0.0}, {{{cv.w_j[t], 1.0}}, 0.0},
                      {{{{cv.w_ij[t], 1.0}}, 0.0}});
        ++rows.dc_cones;
      }
      ov.circuits.push_back(std::move(cv));
    }

    // sequential installation
    if (opt.max_links >= 1) {
      std::vector<LinTerm> card;
      for (const auto& cv : ov.circuits) card.push_back({cv.z, 1.0});
      prog.add_row(Sense::LE, static_cast<double>(opt.max_links), card);
      ++rows.seq_rows;
      for (size_t ci = 1; ci < ov.circuits.size(); ++ci) {
        prog.add_row(Sense::LE, 0.0,
                     {{ov.circuits[ci].z, 1.0}, {ov.circuits[ci - 1].z, -1.0}});
        ++rows.seq_rows;
      }
    }
    hv->options.push_back(std::move(ov));
  }
  return rows;
}

HvdcResiduals hvdc_residuals(const std::vector<double>& x,
                             const PlanningCase& c, const Registry& reg) {
  HvdcResiduals out;
  const int T = c.time.steps;
  for (const auto& h : reg.hvdc) {
    const Corridor& co = c.corridors[h.corridor];
    const int bus_from = c.bus_index(co.from);
    const int bus_to = c.bus_index(co.to);
    for (size_t oi = 0; oi < h.options.size(); ++oi) {
      const HvdcOption& opt = co.hvdc_options[oi];
      const double kv2_3 = 3.0 * opt.ac_kv * opt.ac_kv;
      for (size_t ci = 0; ci < h.options[oi].circuits.size(); ++ci) {
        const auto& cv = h.options[oi].circuits[ci];
        for (int t = 0; t < T; ++t) {
          for (int e = 0; e < 2; ++e) {
            HvdcResidualEntry r;
            r.corridor = h.corridor;
            r.option = static_cast<int>(oi);
            r.circuit = static_cast<int>(ci);
            r.t = t;
            r.end = e;
            const double i = x[cv.cur[e][t]];
            const double l = x[cv.cur2[e][t]];
            r.current_gap = l - i * i;
            const int bus = (e == 0) ? bus_from : bus_to;
            const double w = x[reg.at(reg.bus_w, bus, t)];
            const double p = x[cv.p_ac[e][t]];
            const double q = x[cv.q_ac[e][t]];
            r.cone_gap = kv2_3 * w * l - (p * p + q * q);
            out.min_current_gap = std::min(out.min_current_gap, r.current_gap);
            out.min_cone_gap = std::min(out.min_cone_gap, r.cone_gap);
            out.converters.push_back(r);
          }
          const double g = x[cv.w_i[t]] * x[cv.w_j[t]] -
                           x[cv.w_ij[t]] * x[cv.w_ij[t]];
          out.dc_ohm_gap.push_back(g);
          out.min_dc_ohm_gap = std::min(out.min_dc_ohm_gap, g);
        }
      }
    }
  }
  return out;
}

}  // namespace h2plan
