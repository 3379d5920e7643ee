#include "bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace h2plan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

BinaryGroups groups_from_registry(const ConicProgram& p, const Registry& reg) {
  BinaryGroups g;
  for (int var : p.binaries()) {
    auto it = reg.binary_meta.find(var);
    if (it == reg.binary_meta.end()) {
      g.group.push_back(-1);
      g.circuit.push_back(0);
    } else {
      g.group.push_back(it->second.group);
      g.circuit.push_back(it->second.circuit);
    }
  }
  return g;
}

std::pair<NodeRelaxation, NodeRelaxation> branch(
    const NodeRelaxation& node, const std::vector<double>& x,
    const ConicProgram& prog, const BinaryGroups& groups, double int_tol) {
  const auto& bins = prog.binaries();
  int pick = -1;
  double best = kInf;
  for (size_t j = 0; j < bins.size(); ++j) {
    if (node.fixings[j] != kBinFree) continue;
    const double v = x[bins[j]];
    if (std::min(v, 1.0 - v) <= int_tol) continue;  // integral enough
    const double score = std::abs(v - 0.5);
    if (score < best) {  // strict: ties resolve to the lowest variable id
      best = score;
      pick = static_cast<int>(j);
    }
  }
  if (pick < 0)
    throw std::logic_error("branch: called on an integer-feasible node");

  auto make_child = [&](int8_t value) {
    NodeRelaxation ch;
    ch.fixings = node.fixings;
    ch.parent_bound = node.parent_bound;
    ch.depth = node.depth + 1;
    ch.fixings[pick] = value;
    // prefix propagation across the circuit group
    const int grp = groups.group[pick];
    if (grp >= 0) {
      for (size_t j = 0; j < bins.size(); ++j) {
        if (groups.group[j] != grp || static_cast<int>(j) == pick) continue;
        if (value == kBinOne && groups.circuit[j] < groups.circuit[pick])
          ch.fixings[j] = kBinOne;
        if (value == kBinZero && groups.circuit[j] > groups.circuit[pick])
          ch.fixings[j] = kBinZero;
      }
    }
    return ch;
  };
  return {make_child(kBinZero), make_child(kBinOne)};
}

size_t select_node(const std::vector<NodeRelaxation>& open) {
  if (open.empty()) throw std::logic_error("select_node: empty open set");
  size_t best = 0;
  for (size_t i = 1; i < open.size(); ++i) {
    const NodeRelaxation& a = open[i];
    const NodeRelaxation& b = open[best];
    if (a.parent_bound < b.parent_bound ||
        (a.parent_bound == b.parent_bound &&
         (a.depth > b.depth ||
          (a.depth == b.depth && a.seq < b.seq))))
      best = i;
  }
  return best;
}

namespace {

struct SharedState {
  std::mutex mu;
  std::condition_variable cv;
  std::vector<NodeRelaxation> open;
  std::optional<Incumbent> incumbent;
  double incumbent_obj = kInf;
  std::vector<double> active_bounds;  // per busy worker, -inf when idle
  long seq = 0;
  long nodes = 0;
  bool stop = false;
  MipStats stats;
  std::vector<PrunedRecord> prunes;
};

double global_bound(const SharedState& st) {
  double b = kInf;
  for (const auto& n : st.open) b = std::min(b, n.parent_bound);
  for (double w : st.active_bounds)
    if (w > -kInf) b = std::min(b, w);
  if (b == kInf) return st.incumbent ? st.incumbent_obj : -kInf;
  return b;
}

void log_progress(std::ostream* os, std::mutex& mu, long node, int depth,
                  double bound, double inc, double gap, size_t open) {
  if (!os) return;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "{\"node\":%ld,\"depth\":%d,\"bound\":%.9g,"
                "\"incumbent\":%.9g,\"gap\":%.3e,\"open\":%zu}\n",
                node, depth, bound, inc, gap, open);
  std::lock_guard<std::mutex> lk(mu);
  (*os) << buf << std::flush;
}

}  // namespace

MipResult solve_mip(const ConicProgram& prog, const BinaryGroups& groups,
                    const SolveOptions& options, ConicBackend& backend) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
  };
  const int nbin = backend.num_binaries();
  if (static_cast<size_t>(nbin) != prog.binaries().size())
    throw std::invalid_argument("solve_mip: backend/program mismatch");

  MipResult res;
  SharedState st;
  {
    NodeRelaxation root;
    root.fixings.assign(nbin, kBinFree);
    root.parent_bound = -kInf;
    root.seq = st.seq++;
    st.open.push_back(std::move(root));
  }

  const int nworkers = std::max(1, options.workers);
  st.active_bounds.assign(nworkers, -kInf);

  // gap threshold against the current incumbent
  auto prune_threshold = [&](double inc_obj) {
    return inc_obj - std::max(options.abs_gap,
                              options.rel_gap * std::abs(inc_obj));
  };

  std::mutex log_mu;
  auto worker = [&](int wid, ConicBackend* be) {
    std::unique_lock<std::mutex> lk(st.mu);
    for (;;) {
      st.cv.wait(lk, [&]() {
        if (st.stop) return true;
        if (!st.open.empty()) return true;
        // done when nothing is in flight anywhere
        for (double b : st.active_bounds)
          if (b > -kInf) return false;
        return true;
      });
      if (st.stop) return;
      if (st.open.empty()) {
        bool busy = false;
        for (double b : st.active_bounds)
          if (b > -kInf) busy = true;
        if (!busy) {
          st.cv.notify_all();
          return;
        }
        continue;
      }

      // limits
      if (st.nodes >= options.node_limit ||
          (options.time_limit_s > 0 && elapsed() > options.time_limit_s)) {
        st.stop = true;
        st.cv.notify_all();
        return;
      }
      // global prune: incumbent may have improved since nodes were pushed
      if (st.incumbent) {
        const double thr = prune_threshold(st.incumbent_obj);
        auto it = std::remove_if(st.open.begin(), st.open.end(),
                                 [&](const NodeRelaxation& n) {
                                   return n.parent_bound >= thr;
                                 });
        st.stats.nodes_pruned_bound +=
            static_cast<long>(st.open.end() - it);
        if (options.record_prunes)
          for (auto p = it; p != st.open.end(); ++p)
            st.prunes.push_back({p->fixings, p->parent_bound});
        st.open.erase(it, st.open.end());
        if (st.open.empty()) continue;
      }

      const size_t idx = select_node(st.open);
      NodeRelaxation node = std::move(st.open[idx]);
      st.open.erase(st.open.begin() + static_cast<long>(idx));
      st.active_bounds[wid] = std::max(node.parent_bound, -1e300);
      const long node_id = ++st.nodes;
      lk.unlock();

      double limit = options.node_time_limit_s;
      if (options.time_limit_s > 0)
        limit = std::min(limit,
                         std::max(1.0, options.time_limit_s - elapsed()));
      BackendResult br = be->solve(node.fixings, limit);
      if (br.status == BackendStatus::NumericalTrouble) {
        // one retry at tightened tolerances, then prune with a warning
        br = be->solve(node.fixings, limit, true);
      }
      if (br.status == BackendStatus::NumericalTrouble ||
          br.status == BackendStatus::TimeLimit) {
        lk.lock();
        ++st.stats.nodes_trouble;
        if (options.record_prunes)
          st.prunes.push_back({node.fixings, node.parent_bound});
        st.active_bounds[wid] = -kInf;
        st.cv.notify_all();
        continue;
      }

      lk.lock();
      ++st.stats.nodes_solved;
      bool pushed = false;
      if (br.status == BackendStatus::Infeasible) {
        ++st.stats.nodes_infeasible;
      } else if (br.status == BackendStatus::Unbounded) {
        // a relaxation cannot be unbounded if the root was bounded
        st.stop = true;
        st.cv.notify_all();
      } else {
        const double bound = std::max(br.dual_bound, node.parent_bound);
        const bool cut =
            st.incumbent && bound >= prune_threshold(st.incumbent_obj);
        if (cut) {
          ++st.stats.nodes_pruned_bound;
          if (options.record_prunes)
            st.prunes.push_back({node.fixings, bound});
        } else {
          // integral?
          bool integral = true;
          const auto& bins = prog.binaries();
          for (size_t j = 0; j < bins.size(); ++j) {
            const double v = br.x[bins[j]];
            if (std::min(v, 1.0 - v) > options.int_tol) {
              integral = false;
              break;
            }
          }
          if (integral) {
            // clean certificate: re-solve with every binary pinned
            std::vector<int8_t> asg(bins.size());
            for (size_t j = 0; j < bins.size(); ++j)
              asg[j] = br.x[bins[j]] > 0.5 ? kBinOne : kBinZero;
            lk.unlock();
            BackendResult cert = be->solve(asg, limit);
            lk.lock();
            if (cert.status == BackendStatus::Optimal &&
                cert.objective < st.incumbent_obj) {
              Incumbent inc;
              inc.assignment = asg;
              inc.x = cert.x;
              inc.objective = cert.objective;
              inc.feas_violation = prog.check_point(cert.x).max_violation;
              st.incumbent = std::move(inc);
              st.incumbent_obj = cert.objective;
            } else if (cert.status == BackendStatus::Infeasible) {
              ++st.stats.nodes_infeasible;
            } else if (cert.status != BackendStatus::Optimal) {
              ++st.stats.nodes_trouble;
            }
          } else {
            auto [c0, c1] = branch(node, br.x, prog, groups, options.int_tol);
            c0.parent_bound = bound;
            c1.parent_bound = bound;
            c1.seq = st.seq++;
            c0.seq = st.seq++;
            st.open.push_back(std::move(c1));
            st.open.push_back(std::move(c0));
            pushed = true;
          }
        }
      }
      (void)pushed;
      st.active_bounds[wid] = -kInf;
      const double gb = global_bound(st);
      const double inc = st.incumbent ? st.incumbent_obj : kInf;
      const double gap = st.incumbent ? inc - gb : kInf;
      const size_t open_size = st.open.size();
      lk.unlock();
      log_progress(options.progress, log_mu, node_id, node.depth, gb, inc,
                   gap, open_size);
      lk.lock();
      // stop when the gap target is met
      if (st.incumbent &&
          global_bound(st) >= prune_threshold(st.incumbent_obj)) {
        st.stop = true;
      }
      st.cv.notify_all();
    }
  };

  std::vector<std::unique_ptr<ConicBackend>> clones;
  std::vector<std::thread> threads;
  if (nworkers == 1) {
    worker(0, &backend);
  } else {
    for (int w = 1; w < nworkers; ++w) clones.push_back(backend.clone());
    for (int w = 1; w < nworkers; ++w)
      threads.emplace_back(worker, w, clones[w - 1].get());
    worker(0, &backend);
    for (auto& t : threads) t.join();
  }

  res.stats = st.stats;
  res.stats.wall_s = elapsed();
  res.prunes = std::move(st.prunes);
  res.incumbent = st.incumbent;

  const bool hit_limit = st.nodes >= options.node_limit ||
                         (options.time_limit_s > 0 &&
                          elapsed() > options.time_limit_s);
  if (st.incumbent) {
    // with an empty open set the incumbent is proven up to the prune slack
    res.best_bound = st.open.empty() && !hit_limit
                         ? std::min(st.incumbent_obj, global_bound(st))
                         : global_bound(st);
    res.gap = st.incumbent_obj - res.best_bound;
    res.status = res.gap_met(options) ? MipStatus::Optimal
                                      : MipStatus::LimitReached;
  } else if (!hit_limit && st.open.empty() && st.stats.nodes_trouble == 0) {
    res.status = MipStatus::Infeasible;
    res.best_bound = kInf;
  } else {
    res.status = MipStatus::LimitReached;
    res.best_bound = global_bound(st);
  }
  return res;
}

MipResult solve_mip(const ConicProgram& prog, const BinaryGroups& groups,
                    const SolveOptions& options) {
  auto backend = make_ipm_backend(prog, options.backend);
  return solve_mip(prog, groups, options, *backend);
}

OracleResult enumerate_oracle(const ConicProgram& prog,
                              const BinaryGroups& groups,
                              ConicBackend& backend,
                              double node_time_limit_s) {
  const auto& bins = prog.binaries();
  if (bins.size() > 20)
    throw std::invalid_argument("enumerate_oracle: more than 20 binaries");

  // collect circuit groups and independent binaries
  std::vector<int> indep;
  std::map<int, std::vector<int>> by_group;  // group -> binary indices
  for (size_t j = 0; j < bins.size(); ++j) {
    if (groups.group[j] < 0)
      indep.push_back(static_cast<int>(j));
    else
      by_group[groups.group[j]].push_back(static_cast<int>(j));
  }
  for (auto& [g, mem] : by_group)
    std::sort(mem.begin(), mem.end(), [&](int a, int b) {
      return groups.circuit[a] < groups.circuit[b];
    });

  std::vector<std::vector<int8_t>> assignments;
  std::vector<int8_t> cur(bins.size(), kBinZero);
  // enumerate prefix counts per group and 0/1 per independent binary
  std::vector<std::pair<std::vector<int>, int>> dims;  // (members, choices)
  for (auto& [g, mem] : by_group)
    dims.push_back({mem, static_cast<int>(mem.size()) + 1});
  for (int j : indep) dims.push_back({{j}, 2});

  std::vector<int> counter(dims.size(), 0);
  for (;;) {
    for (size_t d = 0; d < dims.size(); ++d) {
      const auto& mem = dims[d].first;
      if (mem.size() == 1 && dims[d].second == 2) {
        cur[mem[0]] = counter[d] ? kBinOne : kBinZero;
      } else {
        for (size_t i = 0; i < mem.size(); ++i)
          cur[mem[i]] = static_cast<int>(i) < counter[d] ? kBinOne : kBinZero;
      }
    }
    assignments.push_back(cur);
    size_t d = 0;
    for (; d < dims.size(); ++d) {
      if (++counter[d] < dims[d].second) break;
      counter[d] = 0;
    }
    if (d == dims.size()) break;
    if (dims.empty()) break;
  }
  if (dims.empty()) assignments = {std::vector<int8_t>(bins.size(), kBinZero)};

  OracleResult out;
  for (const auto& asg : assignments) {
    BackendResult br = backend.solve(asg, node_time_limit_s);
    OracleEntry e;
    e.assignment = asg;
    e.feasible = br.status == BackendStatus::Optimal;
    e.objective = e.feasible ? br.objective : kInf;
    if (e.feasible &&
        (!out.best || br.objective < out.best->objective)) {
      Incumbent inc;
      inc.assignment = asg;
      inc.x = br.x;
      inc.objective = br.objective;
      inc.feas_violation = prog.check_point(br.x).max_violation;
      out.best = std::move(inc);
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace h2plan
