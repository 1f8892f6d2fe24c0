#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "uavloc/kinematics.hpp"
#include "uavloc/planner.hpp"

namespace uavloc {
namespace {

struct Particle {
  std::vector<double> keys;
  std::vector<double> velocity;
  std::vector<double> best_keys;
  double best_fitness = std::numeric_limits<double>::infinity();
  double fitness = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng;
};

// Keeps a key inside [0, M) by mirroring at the walls.
double reflect_key(double x, double upper) {
  const double hi = std::nextafter(upper, 0.0);
  for (int i = 0; i < 4 && (x < 0.0 || x > hi); ++i) {
    x = x < 0.0 ? -x : 2.0 * upper - x;
  }
  return std::clamp(x, 0.0, hi);
}

Plan finish(const std::string& name, std::span<const double> keys,
            const PlanningProblem& problem, const Scenario& scenario,
            std::vector<double> history, double initial_best) {
  Plan plan = build_plan(keys, problem, scenario);
  plan.planner = name;
  plan.best_history = std::move(history);
  plan.initial_best = initial_best;
  return plan;
}

Plan swarm_solve(const PlanningProblem& problem, const Scenario& scenario, std::uint64_t seed,
                 bool adaptive) {
  problem.validate();
  const auto& sp = scenario.swarm;
  const int dims = static_cast<int>(problem.targets.size());
  const double upper = problem.uav_count();
  // Velocity limited to half the key range.
  const double vclamp = 0.5 * upper;

  std::vector<Particle> swarm(sp.population);
  for (int i = 0; i < sp.population; ++i) {
    Particle& p = swarm[i];
    p.rng.seed(stream_seed(seed, {static_cast<std::uint64_t>(i)}));
    std::uniform_real_distribution<double> key(0.0, upper);
    std::uniform_real_distribution<double> vel(-1.0, 1.0);
    p.keys.resize(dims);
    p.velocity.resize(dims);
    for (int d = 0; d < dims; ++d) {
      p.keys[d] = reflect_key(key(p.rng), upper);
      p.velocity[d] = vel(p.rng);
    }
    p.best_keys = p.keys;
  }

  std::vector<double> global_keys(dims, 0.0);
  double global_best = std::numeric_limits<double>::infinity();
  std::vector<double> history;
  history.reserve(sp.iterations);
  double initial_best = 0.0;

  auto evaluate = [&]() {
    for (auto& p : swarm) {
      p.fitness = fitness(p.keys, problem, scenario);
      if (p.fitness < p.best_fitness) {
        p.best_fitness = p.fitness;
        p.best_keys = p.keys;
      }
      if (p.fitness < global_best) {
        global_best = p.fitness;
        global_keys = p.keys;
      }
    }
  };

  for (int k = 0; k < sp.iterations; ++k) {
    evaluate();
    if (k == 0) initial_best = global_best;
    history.push_back(global_best);

    double f_min = std::numeric_limits<double>::infinity();
    double f_sum = 0.0;
    for (const auto& p : swarm) {
      f_min = std::min(f_min, p.fitness);
      f_sum += p.fitness;
    }
    const double f_avg = f_sum / sp.population;

    for (auto& p : swarm) {
      const double eps =
          adaptive ? adaptive_inertia(p.fitness, f_min, f_avg, sp.eps_min, sp.eps_max)
                   : sp.eps_max;
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      double r1 = unit(p.rng);
      double r2 = unit(p.rng);
      for (int d = 0; d < dims; ++d) {
        if (sp.rand_per_coordinate && d > 0) {
          r1 = unit(p.rng);
          r2 = unit(p.rng);
        }
        double v = eps * p.velocity[d] + sp.c1 * r1 * (p.best_keys[d] - p.keys[d]) +
                   sp.c2 * r2 * (global_keys[d] - p.keys[d]);
        v = std::clamp(v, -vclamp, vclamp);
        const double moved = p.keys[d] + v;
        p.keys[d] = reflect_key(moved, upper);
        // A bounce off either wall also reverses the motion.
        p.velocity[d] = (moved < 0.0 || moved >= upper) ? -v : v;
      }
    }
  }
  evaluate();
  if (!history.empty()) history.back() = global_best;

  return finish(adaptive ? "epso" : "pso", global_keys, problem, scenario, std::move(history),
                initial_best);
}

// Chromosome: a visiting order over all targets plus a UAV per target.
struct Chromosome {
  std::vector<int> order;
  std::vector<int> uav;
  double fitness = std::numeric_limits<double>::infinity();
};

std::vector<double> to_keys(const Chromosome& c) {
  const int n = static_cast<int>(c.order.size());
  std::vector<double> keys(n);
  for (int rank = 0; rank < n; ++rank) {
    const int s = c.order[rank];
    keys[s] = c.uav[s] + (rank + 0.5) / n;
  }
  return keys;
}

// Order crossover (OX1).
std::vector<int> order_crossover(const std::vector<int>& a, const std::vector<int>& b,
                                 std::mt19937_64& rng) {
  const int n = static_cast<int>(a.size());
  if (n < 2) return a;
  std::uniform_int_distribution<int> pick(0, n - 1);
  int lo = pick(rng), hi = pick(rng);
  if (lo > hi) std::swap(lo, hi);
  std::vector<int> child(n, -1);
  std::vector<char> used(n, 0);
  for (int i = lo; i <= hi; ++i) {
    child[i] = a[i];
    used[a[i]] = 1;
  }
  int pos = (hi + 1) % n;
  for (int k = 0; k < n; ++k) {
    const int gene = b[(hi + 1 + k) % n];
    if (used[gene]) continue;
    child[pos] = gene;
    used[gene] = 1;
    pos = (pos + 1) % n;
  }
  return child;
}

}  // namespace

Plan epso_solve(const PlanningProblem& problem, const Scenario& scenario, std::uint64_t seed) {
  return swarm_solve(problem, scenario, seed, true);
}

Plan pso_solve(const PlanningProblem& problem, const Scenario& scenario, std::uint64_t seed) {
  return swarm_solve(problem, scenario, seed, false);
}

Plan ga_solve(const PlanningProblem& problem, const Scenario& scenario, std::uint64_t seed) {
  problem.validate();
  const auto& sp = scenario.swarm;
  const int n = static_cast<int>(problem.targets.size());
  const int m = problem.uav_count();
  constexpr double kCrossoverRate = 0.9;
  constexpr double kMutationRate = 0.2;
  constexpr int kTournament = 3;

  std::mt19937_64 rng(stream_seed(seed, {0x6761ULL}));
  std::uniform_int_distribution<int> any_uav(0, m - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto evaluate = [&](Chromosome& c) { c.fitness = fitness(to_keys(c), problem, scenario); };

  std::vector<Chromosome> pop(sp.population);
  for (auto& c : pop) {
    c.order.resize(n);
    std::iota(c.order.begin(), c.order.end(), 0);
    std::shuffle(c.order.begin(), c.order.end(), rng);
    c.uav.resize(n);
    for (auto& u : c.uav) u = any_uav(rng);
  }

  Chromosome best;
  std::vector<double> history;
  double initial_best = 0.0;
  auto tournament = [&]() -> const Chromosome& {
    std::uniform_int_distribution<int> pick(0, sp.population - 1);
    const Chromosome* winner = &pop[pick(rng)];
    for (int i = 1; i < kTournament; ++i) {
      const Chromosome& c = pop[pick(rng)];
      if (c.fitness < winner->fitness) winner = &c;
    }
    return *winner;
  };

  for (int gen = 0; gen < sp.iterations; ++gen) {
    for (auto& c : pop) {
      evaluate(c);
      if (c.fitness < best.fitness) best = c;
    }
    if (gen == 0) initial_best = best.fitness;
    history.push_back(best.fitness);
    if (gen + 1 == sp.iterations) break;

    std::vector<Chromosome> next;
    next.reserve(sp.population);
    next.push_back(best);
    while (static_cast<int>(next.size()) < sp.population) {
      const Chromosome& a = tournament();
      const Chromosome& b = tournament();
      Chromosome child = a;
      if (unit(rng) < kCrossoverRate) {
        child.order = order_crossover(a.order, b.order, rng);
        for (int s = 0; s < n; ++s) {
          if (unit(rng) < 0.5) child.uav[s] = b.uav[s];
        }
      }
      if (n >= 2 && unit(rng) < kMutationRate) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::swap(child.order[pick(rng)], child.order[pick(rng)]);
      }
      if (n >= 1 && unit(rng) < kMutationRate) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        child.uav[pick(rng)] = any_uav(rng);
      }
      next.push_back(std::move(child));
    }
    pop = std::move(next);
  }

  return finish("ga", to_keys(best), problem, scenario, std::move(history), initial_best);
}

Plan solve(PlannerKind kind, const PlanningProblem& problem, const Scenario& scenario,
           std::uint64_t seed) {
  switch (kind) {
    case PlannerKind::epso: return epso_solve(problem, scenario, seed);
    case PlannerKind::pso: return pso_solve(problem, scenario, seed);
    case PlannerKind::ga: return ga_solve(problem, scenario, seed);
  }
  return epso_solve(problem, scenario, seed);
}

}  // namespace uavloc
