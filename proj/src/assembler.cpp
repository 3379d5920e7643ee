#include "assembler.hpp"

#include <cmath>
#include <stdexcept>

#include "electrolyser.hpp"

namespace h2plan {

std::vector<EnvelopeCut> envelope_avg_pressure(double x_lo, double x_hi,
                                               double y_lo, double y_hi,
                                               int n_cuts) {
  if (x_lo <= 0 || y_lo <= 0)
    throw std::invalid_argument("envelope: bounds must be positive");
  if (n_cuts < 1) throw std::invalid_argument("envelope: n_cuts < 1");

  auto grid = [&](double lo, double hi) {
    std::vector<double> g;
    if (hi - lo <= 0.0 || n_cuts == 1) {
      g.push_back(0.5 * (lo + hi));
      return g;
    }
    for (int i = 0; i < n_cuts; ++i)
      g.push_back(lo + (hi - lo) * i / (n_cuts - 1));
    return g;
  };

  std::vector<EnvelopeCut> cuts;
  for (double x0 : grid(x_lo, x_hi)) {
    for (double y0 : grid(y_lo, y_hi)) {
      const double s = x0 + y0;
      EnvelopeCut c;
      c.gx = -(y0 / s) * (y0 / s);
      c.gy = -(x0 / s) * (x0 / s);
      c.c0 = -x0 * y0 / s - c.gx * x0 - c.gy * y0;
      bool dup = false;
      for (const EnvelopeCut& d : cuts) {
        if (std::abs(c.gx - d.gx) <= 1e-14 * std::max(1.0, std::abs(d.gx)) &&
            std::abs(c.gy - d.gy) <= 1e-14 * std::max(1.0, std::abs(d.gy))) {
          dup = true;
          break;
        }
      }
      if (!dup) cuts.push_back(c);
    }
  }
  return cuts;
}

double envelope_cut_value(const EnvelopeCut& cut, double x, double y) {
  return (2.0 / 3.0) * ((1.0 + cut.gx) * x + (1.0 + cut.gy) * y + cut.c0);
}

double annuity_factor(double iota, double life_years, double scale) {
  if (iota <= 0) throw std::invalid_argument("annuity: iota <= 0");
  return scale * (1.0 / iota) * (1.0 - std::pow(1.0 + iota, -life_years));
}

Assembled assemble(const PlanningCase& c, const AssembleOptions& opt) {
  if (!c.si_normalized)
    throw std::logic_error("assemble: case must pass validate_case first");
  for (const auto& s : c.sites)
    if (s.c0 != 0.0)
      throw std::logic_error(
          "assemble: nonzero electrolyser base cost needs the installation "
          "binary, which is not built while c0 defaults to zero");

  Assembled a;
  ConicProgram& p = a.program;
  Registry& reg = a.registry;
  const int T = c.time.steps;
  reg.steps = T;
  a.annuity =
      annuity_factor(c.time.discount_rate, c.time.life_years, c.time.scale);

  // shared bus variables
  const size_t nb = c.buses.size();
  reg.bus_w.assign(nb * T, -1);
  reg.bus_qvar.assign(nb * T, -1);
  reg.bus_qhat.assign(nb, -1);
  reg.bus_pres.assign(nb * T, -1);
  for (size_t b = 0; b < nb; ++b) {
    const Bus& bus = c.buses[b];
    const bool has_res = !bus.res.empty();
    for (int t = 0; t < T; ++t) {
      const std::string st = "[" + bus.id + ",t" + std::to_string(t) + "]";
      reg.bus_w[b * T + t] =
          p.add_var(VarKind::Continuous, bus.v_min * bus.v_min,
                    bus.v_max * bus.v_max, "bus.w" + st);
      if (bus.svc_allowed)
        reg.bus_qvar[b * T + t] =
            p.add_var(VarKind::Continuous, bus.q_var_min_mvar,
                      bus.q_var_max_mvar, "bus.qvar" + st);
      if (has_res)
        reg.bus_pres[b * T + t] = p.add_var(
            VarKind::Continuous, 0.0, c.res_bound(static_cast<int>(b), t),
            "bus.pres" + st);
    }
    if (bus.svc_allowed)
      reg.bus_qhat[b] = p.add_var(
          VarKind::Continuous, 0.0,
          std::max(std::abs(bus.q_var_min_mvar), bus.q_var_max_mvar),
          "bus.qvar_peak[" + bus.id + "]");
  }

  // shared junction variables
  const size_t nj = c.junctions.size();
  const double sale_cap = c.total_electrolyser_flow_cap();
  reg.junc_p.assign(nj * T, -1);
  reg.junc_d.assign(nj * T, -1);
  for (size_t j = 0; j < nj; ++j) {
    const Junction& jn = c.junctions[j];
    for (int t = 0; t < T; ++t) {
      const std::string st = "[" + jn.id + ",t" + std::to_string(t) + "]";
      reg.junc_p[j * T + t] = p.add_var(VarKind::Continuous, jn.p_min,
                                        jn.p_max, "junction.p" + st);
      double lo = 0.0, hi = sale_cap;
      if (!jn.sale) {
        const double d = jn.demand.empty() ? 0.0 : jn.demand[t];
        lo = hi = d;
      }
      reg.junc_d[j * T + t] =
          p.add_var(VarKind::Continuous, lo, hi, "junction.d" + st);
    }
  }

  reg.sites.resize(c.sites.size());
  for (size_t s = 0; s < c.sites.size(); ++s)
    emit_electrolyser(p, reg, c, static_cast<int>(s));

  for (size_t ci = 0; ci < c.corridors.size(); ++ci) {
    const Corridor& co = c.corridors[ci];
    switch (co.kind) {
      case CorridorKind::Pipeline: {
        GasCorridorVars gv;
        gv.corridor = static_cast<int>(ci);
        reg.gas.push_back(gv);
        const Junction& jm = c.junctions[c.junction_index(co.from)];
        const Junction& jn = c.junctions[c.junction_index(co.to)];
        const auto cuts = envelope_avg_pressure(
            jm.p_min, jm.p_max, jn.p_min, jn.p_max, opt.envelope_cuts);
        emit_pipeline(p, reg, c, static_cast<int>(ci), cuts);
        break;
      }
      case CorridorKind::Hvdc: {
        HvdcCorridorVars hv;
        hv.corridor = static_cast<int>(ci);
        reg.hvdc.push_back(hv);
        emit_hvdc(p, reg, c, static_cast<int>(ci));
        break;
      }
      case CorridorKind::Hvac: {
        HvacCorridorVars hv;
        hv.corridor = static_cast<int>(ci);
        reg.hvac.push_back(hv);
        emit_hvac(p, reg, c, static_cast<int>(ci), opt.cones_all_circuits);
        break;
      }
    }
  }

  emit_gas_balances(p, reg, c);
  emit_balances(p, reg, c);

  // objective: investments minus NPV hydrogen sales (M$)
  for (const auto& g : reg.gas) {
    const Corridor& co = c.corridors[g.corridor];
    for (size_t oi = 0; oi < g.options.size(); ++oi)
      p.add_objective_term(g.options[oi].z,
                           co.pipe_options[oi].install_cost());
  }
  for (const auto& h : reg.hvdc) {
    const Corridor& co = c.corridors[h.corridor];
    for (size_t oi = 0; oi < h.options.size(); ++oi)
      for (const auto& cv : h.options[oi].circuits)
        p.add_objective_term(cv.z, co.hvdc_options[oi].install_cost());
  }
  for (const auto& h : reg.hvac) {
    const Corridor& co = c.corridors[h.corridor];
    for (size_t oi = 0; oi < h.options.size(); ++oi)
      for (const auto& cv : h.options[oi].circuits)
        p.add_objective_term(cv.z, co.hvac_options[oi].install_cost());
  }
  for (size_t s = 0; s < c.sites.size(); ++s) {
    p.add_objective_term(reg.sites[s].p_hat, c.sites[s].c1);
    p.add_objective_term(reg.sites[s].pcp_hat, c.sites[s].c_cp);
  }
  for (size_t b = 0; b < nb; ++b)
    if (reg.bus_qhat[b] >= 0)
      p.add_objective_term(reg.bus_qhat[b], c.buses[b].c_var1);
  for (size_t j = 0; j < nj; ++j) {
    const double coef =
        -a.annuity * c.junctions[j].h2_price_per_m3 * c.time.dt_s * 1e-6;
    for (int t = 0; t < T; ++t)
      p.add_objective_term(reg.junc_d[j * T + t], coef);
  }

  const auto issues = p.check_convexity();
  if (!issues.empty())
    throw std::logic_error("assemble: convexity audit failed: " + issues[0]);
  return a;
}

PlanSolution decode(const std::vector<double>& x, const Assembled& a,
                    const PlanningCase& c) {
  if (x.size() != static_cast<size_t>(a.program.num_vars()))
    throw std::invalid_argument("decode: dimension mismatch");
  const Registry& reg = a.registry;
  const int T = c.time.steps;

  PlanSolution out;
  out.x = x;
  out.objective = a.program.eval_objective(x);

  for (const auto& g : reg.gas) {
    const Corridor& co = c.corridors[g.corridor];
    for (size_t oi = 0; oi < g.options.size(); ++oi) {
      if (x[g.options[oi].z] > 0.5) {
        out.chosen.push_back({g.corridor, CorridorKind::Pipeline,
                              co.pipe_options[oi].name, 1,
                              co.pipe_options[oi].install_cost()});
        out.costs.pipe += co.pipe_options[oi].install_cost();
      }
    }
  }
  for (const auto& h : reg.hvdc) {
    const Corridor& co = c.corridors[h.corridor];
    for (size_t oi = 0; oi < h.options.size(); ++oi) {
      int n = 0;
      for (const auto& cv : h.options[oi].circuits)
        if (x[cv.z] > 0.5) ++n;
      if (n > 0) {
        const double cost = n * co.hvdc_options[oi].install_cost();
        out.chosen.push_back({h.corridor, CorridorKind::Hvdc,
                              co.hvdc_options[oi].name, n, cost});
        out.costs.hvdc += cost;
      }
    }
  }
  for (const auto& h : reg.hvac) {
    const Corridor& co = c.corridors[h.corridor];
    for (size_t oi = 0; oi < h.options.size(); ++oi) {
      int n = 0;
      for (const auto& cv : h.options[oi].circuits)
        if (x[cv.z] > 0.5) ++n;
      if (n > 0) {
        const double cost = n * co.hvac_options[oi].install_cost();
        out.chosen.push_back({h.corridor, CorridorKind::Hvac,
                              co.hvac_options[oi].name, n, cost});
        out.costs.hvac += cost;
      }
    }
  }
  for (size_t s = 0; s < c.sites.size(); ++s) {
    out.costs.ptg += c.sites[s].c1 * x[reg.sites[s].p_hat] +
                     c.sites[s].c_cp * x[reg.sites[s].pcp_hat];
  }
  for (size_t b = 0; b < c.buses.size(); ++b)
    if (reg.bus_qhat[b] >= 0)
      out.costs.hvac += c.buses[b].c_var1 * x[reg.bus_qhat[b]];
  for (size_t j = 0; j < c.junctions.size(); ++j)
    for (int t = 0; t < T; ++t)
      out.costs.h2_revenue += a.annuity * c.junctions[j].h2_price_per_m3 *
                              c.time.dt_s * 1e-6 *
                              x[reg.at(reg.junc_d, static_cast<int>(j), t)];
  out.cost_audit_gap = std::abs(out.costs.total() - out.objective);

  // energy transmission factor
  const double hours = c.time.dt_s / 3600.0;
  for (size_t b = 0; b < c.buses.size(); ++b) {
    if (c.buses[b].res.empty()) continue;
    for (int t = 0; t < T; ++t) {
      out.available_mwh += c.res_bound(static_cast<int>(b), t) * hours;
      out.accommodated_mwh += x[reg.at(reg.bus_pres, b, t)] * hours;
    }
  }
  out.tf = out.available_mwh <= 0.0
               ? 1.0
               : out.accommodated_mwh / out.available_mwh;

  out.gas = gas_residuals(x, c, reg);
  out.hvdc = hvdc_residuals(x, c, reg);
  out.angles = recover_angles(x, c, reg);

  // linepack telescoping per installed pipe option
  for (const auto& g : reg.gas) {
    const Corridor& co = c.corridors[g.corridor];
    const Junction& jn = c.junctions[c.junction_index(co.to)];
    const Junction& jm = c.junctions[c.junction_index(co.from)];
    for (size_t oi = 0; oi < g.options.size(); ++oi) {
      const auto& pv = g.options[oi];
      if (x[pv.z] < 0.5) continue;
      const double psi = linepack_coefficient(co.pipe_options[oi], c.constants,
                                              jn.p_min, jm.p_max);
      double net = 0.0;
      for (int t = 0; t < T; ++t)
        net += (x[pv.phi_in[t]] - x[pv.phi_out[t]]) * c.time.dt_s;
      const double defect =
          std::abs(x[pv.lp[T - 1]] - psi * jn.p_min * x[pv.z] - net);
      const double scale = std::max(1.0, std::abs(x[pv.lp[T - 1]]));
      out.linepack_telescoping_max =
          std::max(out.linepack_telescoping_max, defect / scale);
    }
  }
  return out;
}

}  // namespace h2plan
