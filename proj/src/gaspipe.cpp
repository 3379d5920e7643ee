#include "gaspipe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace h2plan {

namespace {

constexpr double kMolarGasConstant = 8.314462618;  // J/(mol K)

// Largest real root of z^3 + a2 z^2 + a1 z + a0.
double cubic_max_real_root(double a2, double a1, double a0) {
  const double p = a1 - a2 * a2 / 3.0;
  const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  double y;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    y = std::cbrt(-0.5 * q + sq) + std::cbrt(-0.5 * q - sq);
  } else {
    // three real roots; the largest has k = 0
    const double r = std::sqrt(-p * p * p / 27.0);
    const double phi = std::acos(std::clamp(-0.5 * q / r, -1.0, 1.0));
    y = 2.0 * std::sqrt(-p / 3.0) * std::cos(phi / 3.0);
  }
  const double z = y - a2 / 3.0;
  if (!std::isfinite(z)) throw std::runtime_error("srk: no real root");
  return z;
}

}  // namespace

double srk_z(double temperature_k, double pressure_pa, const Constants& k) {
  if (temperature_k <= 0 || pressure_pa <= 0)
    throw std::invalid_argument("srk_z: nonpositive state");
  const double tc = k.critical_temperature_k;
  const double pc = k.critical_pressure_pa;
  const double om = k.acentric_factor;
  const double m = 0.480 + 1.574 * om - 0.176 * om * om;
  const double alpha =
      std::pow(1.0 + m * (1.0 - std::sqrt(temperature_k / tc)), 2.0);
  const double a =
      0.42748 * kMolarGasConstant * kMolarGasConstant * tc * tc / pc;
  const double b = 0.08664 * kMolarGasConstant * tc / pc;
  const double A = a * alpha * pressure_pa /
                   (kMolarGasConstant * kMolarGasConstant * temperature_k *
                    temperature_k);
  const double B = b * pressure_pa / (kMolarGasConstant * temperature_k);
  return cubic_max_real_root(-1.0, A - B - B * B, -A * B);
}

double weymouth_friction(double diameter_m) {
  if (diameter_m <= 0) throw std::invalid_argument("weymouth: D <= 0");
  const double v = 20.621 * std::pow(diameter_m, 1.0 / 6.0);
  return 4.0 / (v * v);
}

double weymouth_coefficient(const PipelineOption& o, const Constants& k,
                            double p_min_pa, double p_max_pa) {
  const double z = srk_z(k.gas_temperature_k, 0.5 * (p_min_pa + p_max_pa), k);
  const double d5 = std::pow(o.diameter_m, 5.0);
  return o.efficiency * std::numbers::pi * std::numbers::pi * d5 /
         (16.0 * k.rho_kg_per_m3 * k.rho_kg_per_m3 * z *
          k.gas_constant_j_per_kg_k * k.gas_temperature_k * o.length_m *
          weymouth_friction(o.diameter_m));
}

double linepack_coefficient(const PipelineOption& o, const Constants& k,
                            double p_min_pa, double p_max_pa) {
  const double z = srk_z(k.gas_temperature_k, 0.5 * (p_min_pa + p_max_pa), k);
  return std::numbers::pi * o.diameter_m * o.diameter_m * o.length_m /
         (4.0 * k.rho_kg_per_m3 * z * k.gas_constant_j_per_kg_k *
          k.gas_temperature_k);
}

double default_flow_cap(const PipelineOption& o, const Constants& k,
                        double p_min_pa, double p_max_pa) {
  const double phi = weymouth_coefficient(o, k, p_min_pa, p_max_pa);
  return std::sqrt(phi * (p_max_pa * p_max_pa - p_min_pa * p_min_pa));
}

double exact_avg_pressure(double p_m, double p_n) {
  const double s = p_m + p_n;
  if (s <= 0.0) return 0.0;
  return (2.0 / 3.0) * (p_m + p_n - p_m * p_n / s);
}

PipelineRows emit_pipeline(ConicProgram& prog, Registry& reg,
                           const PlanningCase& c, int corridor_index,
                           const std::vector<EnvelopeCut>& cuts) {
  const Corridor& co = c.corridors[corridor_index];
  if (co.pipe_options.empty())
    throw std::logic_error("emit_pipeline: corridor without options");
  GasCorridorVars* gv = nullptr;
  for (auto& g : reg.gas)
    if (g.corridor == corridor_index) gv = &g;
  if (!gv) throw std::logic_error("emit_pipeline: corridor not registered");
  if (gv->emitted())
    throw std::logic_error("emit_pipeline: duplicate emission");

  const int T = c.time.steps;
  const Constants& k = c.constants;
  const int jm = c.junction_index(co.from);
  const int jn = c.junction_index(co.to);
  const Junction& Jm = c.junctions[jm];
  const Junction& Jn = c.junctions[jn];

  PipelineRows rows;
  for (size_t oi = 0; oi < co.pipe_options.size(); ++oi) {
    const PipelineOption& opt = co.pipe_options[oi];
    const double Phi = weymouth_coefficient(opt, k, Jn.p_min, Jm.p_max);
    const double Psi = linepack_coefficient(opt, k, Jn.p_min, Jm.p_max);
    const double sqrt_phi = std::sqrt(Phi);
    const double cap = opt.flow_cap > 0
                           ? opt.flow_cap
                           : default_flow_cap(opt, k, Jn.p_min, Jm.p_max);
    const double pavg_ub = std::max(Jm.p_max, Jn.p_max);

    PipeOptionVars pv;
    const std::string base =
        "pipe[" + co.from + "-" + co.to + "." + opt.name + "]";
    pv.z = prog.add_var(VarKind::Binary, 0.0, 1.0, base + ".z");
    ++rows.binaries;
    for (int t = 0; t < T; ++t) {
      const std::string st = "[t" + std::to_string(t) + "]";
      pv.phi_in.push_back(
          prog.add_var(VarKind::Continuous, 0.0, cap, base + ".fin" + st));
      pv.phi_out.push_back(
          prog.add_var(VarKind::Continuous, 0.0, cap, base + ".fout" + st));
      pv.phi.push_back(
          prog.add_var(VarKind::Continuous, 0.0, cap, base + ".f" + st));
      pv.p_m.push_back(prog.add_var(VarKind::Continuous, 0.0, Jm.p_max,
                                    base + ".pm" + st));
      pv.p_n.push_back(prog.add_var(VarKind::Continuous, 0.0, Jn.p_max,
                                    base + ".pn" + st));
      pv.p_avg.push_back(prog.add_var(VarKind::Continuous, 0.0, pavg_ub,
                                      base + ".pavg" + st));
      pv.lp.push_back(prog.add_var(VarKind::Continuous, 0.0, Psi * pavg_ub,
                                   base + ".lp" + st));
    }

    for (int t = 0; t < T; ++t) {
      // relaxed Weymouth cone: phi^2 + Phi pn^2 <= Phi pm^2
      prog.add_soc({{{pv.p_m[t], sqrt_phi}}, 0.0},
                   {{{{pv.phi[t], 1.0}}, 0.0},
                    {{{pv.p_n[t], sqrt_phi}}, 0.0}});
      ++rows.weymouth_cones;

      // pipe pressures switched by the option binary
      prog.add_row(Sense::LE, 0.0, {{pv.p_m[t], 1.0}, {pv.z, -Jm.p_max}});
      prog.add_row(Sense::GE, 0.0, {{pv.p_m[t], 1.0}, {pv.z, -Jm.p_min}});
      prog.add_row(Sense::LE, 0.0, {{pv.p_n[t], 1.0}, {pv.z, -Jn.p_max}});
      prog.add_row(Sense::GE, 0.0, {{pv.p_n[t], 1.0}, {pv.z, -Jn.p_min}});
      // coupling to the junction pressure when installed
      const int pjm = reg.at(reg.junc_p, jm, t);
      const int pjn = reg.at(reg.junc_p, jn, t);
      prog.add_row(Sense::LE, Jm.p_max,
                   {{pjm, 1.0}, {pv.p_m[t], -1.0}, {pv.z, Jm.p_max}});
      prog.add_row(Sense::GE, Jm.p_min,
                   {{pjm, 1.0}, {pv.p_m[t], -1.0}, {pv.z, Jm.p_min}});
      prog.add_row(Sense::LE, Jn.p_max,
                   {{pjn, 1.0}, {pv.p_n[t], -1.0}, {pv.z, Jn.p_max}});
      prog.add_row(Sense::GE, Jn.p_min,
                   {{pjn, 1.0}, {pv.p_n[t], -1.0}, {pv.z, Jn.p_min}});
      rows.bigm_rows += 8;

      // average flow split
      prog.add_row(Sense::EQ, 0.0,
                   {{pv.phi[t], 1.0},
                    {pv.phi_in[t], -0.5},
                    {pv.phi_out[t], -0.5}});
      ++rows.split_rows;

      // lower polyhedral envelope of the average pressure
      for (const EnvelopeCut& cut : cuts) {
        prog.add_row(Sense::GE, (2.0 / 3.0) * cut.c0,
                     {{pv.p_avg[t], 1.0},
                      {pv.p_m[t], -(2.0 / 3.0) * (1.0 + cut.gx)},
                      {pv.p_n[t], -(2.0 / 3.0) * (1.0 + cut.gy)}});
        ++rows.envelope_rows;
      }

      // linepack definition and continuity
      prog.add_row(Sense::EQ, 0.0, {{pv.lp[t], 1.0}, {pv.p_avg[t], -Psi}});
      if (t == 0) {
        prog.add_row(Sense::EQ, 0.0,
                     {{pv.lp[0], 1.0},
                      {pv.z, -Psi * Jn.p_min},
                      {pv.phi_in[0], -c.time.dt_s},
                      {pv.phi_out[0], c.time.dt_s}});
      } else {
        prog.add_row(Sense::EQ, 0.0,
                     {{pv.lp[t], 1.0},
                      {pv.lp[t - 1], -1.0},
                      {pv.phi_in[t], -c.time.dt_s},
                      {pv.phi_out[t], c.time.dt_s}});
      }
      rows.linepack_rows += 2;
    }
    gv->options.push_back(std::move(pv));
  }
  return rows;
}

int emit_gas_balances(ConicProgram& prog, Registry& reg,
                      const PlanningCase& c) {
  const int T = c.time.steps;
  const double mu = c.constants.compressor_fuel_m3_per_mj;
  int rows = 0;
  for (size_t j = 0; j < c.junctions.size(); ++j) {
    for (int t = 0; t < T; ++t) {
      std::vector<LinTerm> terms;
      for (size_t s = 0; s < c.sites.size(); ++s) {
        if (c.junction_index(c.sites[s].junction) != static_cast<int>(j))
          continue;
        if (!reg.sites[s].emitted())
          throw std::logic_error("gas balance before electrolyser emission");
        terms.push_back({reg.sites[s].phi[t], 1.0});
        terms.push_back({reg.sites[s].pcp[t], -mu});
      }
      for (const auto& g : reg.gas) {
        const Corridor& co = c.corridors[g.corridor];
        if (c.junction_index(co.from) == static_cast<int>(j))
          for (const auto& pv : g.options)
            terms.push_back({pv.phi_in[t], -1.0});
        if (c.junction_index(co.to) == static_cast<int>(j))
          for (const auto& pv : g.options)
            terms.push_back({pv.phi_out[t], 1.0});
      }
      terms.push_back({reg.at(reg.junc_d, static_cast<int>(j), t), -1.0});
      prog.add_row(Sense::EQ, 0.0, terms);
      ++rows;
    }
  }
  return rows;
}

GasResiduals gas_residuals(const std::vector<double>& x,
                           const PlanningCase& c, const Registry& reg) {
  GasResiduals out;
  const int T = c.time.steps;
  const Constants& k = c.constants;

  for (const auto& g : reg.gas) {
    const Corridor& co = c.corridors[g.corridor];
    const Junction& Jm = c.junctions[c.junction_index(co.from)];
    const Junction& Jn = c.junctions[c.junction_index(co.to)];
    for (size_t oi = 0; oi < g.options.size(); ++oi) {
      const auto& pv = g.options[oi];
      const double Phi =
          weymouth_coefficient(co.pipe_options[oi], k, Jn.p_min, Jm.p_max);
      for (int t = 0; t < T; ++t) {
        GasResidualEntry e;
        e.corridor = g.corridor;
        e.option = static_cast<int>(oi);
        e.t = t;
        const double pm = x[pv.p_m[t]];
        const double pn = x[pv.p_n[t]];
        const double f = x[pv.phi[t]];
        e.weymouth_slack = Phi * (pm * pm - pn * pn) - f * f;
        e.avgpress_slack = x[pv.p_avg[t]] - exact_avg_pressure(pm, pn);
        out.min_weymouth_slack =
            std::min(out.min_weymouth_slack, e.weymouth_slack);
        out.pipes.push_back(e);
      }
    }
  }

  const double mu = k.compressor_fuel_m3_per_mj;
  out.balance.assign(c.junctions.size() * T, 0.0);
  for (size_t j = 0; j < c.junctions.size(); ++j) {
    for (int t = 0; t < T; ++t) {
      double lhs = 0.0;
      for (size_t s = 0; s < c.sites.size(); ++s) {
        if (c.junction_index(c.sites[s].junction) != static_cast<int>(j))
          continue;
        lhs += x[reg.sites[s].phi[t]] - mu * x[reg.sites[s].pcp[t]];
      }
      double rhs = x[reg.at(reg.junc_d, static_cast<int>(j), t)];
      for (const auto& g : reg.gas) {
        const Corridor& co = c.corridors[g.corridor];
        if (c.junction_index(co.from) == static_cast<int>(j))
          for (const auto& pv : g.options) rhs += x[pv.phi_in[t]];
        if (c.junction_index(co.to) == static_cast<int>(j))
          for (const auto& pv : g.options) rhs -= x[pv.phi_out[t]];
      }
      const double r = lhs - rhs;
      out.balance[j * T + t] = r;
      out.max_balance_abs = std::max(out.max_balance_abs, std::abs(r));
    }
  }
  return out;
}

}  // namespace h2plan
