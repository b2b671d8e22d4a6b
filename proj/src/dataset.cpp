#include "plans/dataset.hpp"

#include <algorithm>

namespace plans {

namespace {

int geometric_length(double p_extend, int cap, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int len = 0;
  while (len < cap && unit(rng) < p_extend) ++len;
  return len;
}

Action random_action(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, kNumActions - 2);  // excludes End
  return static_cast<Action>(pick(rng));
}

Cond random_cond(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2 * kNumPerceptions - 1);
  int v = pick(rng);
  return Cond{static_cast<Perception>(v % kNumPerceptions), v >= kNumPerceptions};
}

}  // namespace

WorldState sample_state(const GenConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WorldState s = make_empty_world(cfg.grid_width, cfg.grid_height);
  s.marker_cap = cfg.marker_cap;
  for (auto& w : s.walls) w = unit(rng) < cfg.wall_density ? 1 : 0;
  std::uniform_int_distribution<int> count(1, 3);
  for (auto& m : s.markers) m = unit(rng) < cfg.marker_density ? count(rng) : 0;

  std::vector<int> free_cells;
  for (int i = 0; i < cfg.grid_width * cfg.grid_height; ++i)
    if (!s.walls[i]) free_cells.push_back(i);
  if (free_cells.empty()) {
    s.walls[0] = 0;
    free_cells.push_back(0);
  }
  std::uniform_int_distribution<size_t> cell(0, free_cells.size() - 1);
  int pos = free_cells[cell(rng)];
  s.agent_row = pos / cfg.grid_width;
  s.agent_col = pos % cfg.grid_width;
  std::uniform_int_distribution<int> heading(0, 3);
  s.heading = static_cast<Heading>(heading(rng));
  return s;
}

Program sample_program_at_level(const GenConfig& cfg, int level, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> kind_pick(0, 2);  // while, if/else, if

  // Reserve one action token per body up front so every branching statement
  // fits within the written-token budget.
  std::vector<int> kinds;
  int reserved = 0;
  for (int i = 0; i < level; ++i) {
    int k = kind_pick(rng);
    kinds.push_back(k);
    reserved += k == 1 ? 2 : 1;
  }
  int budget = std::max(cfg.max_total_actions - reserved, 0);

  // One reserved token plus a geometric extension paid from the budget.
  auto draw_body = [&](double p_extend) {
    int extension = geometric_length(p_extend, std::min(cfg.max_block_len, budget + 1) - 1, rng);
    budget -= extension;
    std::vector<Action> body;
    for (int i = 0; i < 1 + extension; ++i) body.push_back(random_action(rng));
    return body;
  };

  Program p;
  auto emit_filler = [&] {
    if (budget <= 0) return;
    if (unit(rng) < cfg.p_repeat) {
      int reps_cap = std::max(cfg.limits.repeat_min, std::min(cfg.limits.repeat_max, (cfg.t_max - 1) / 2));
      std::uniform_int_distribution<int> reps(cfg.limits.repeat_min, reps_cap);
      int r = reps(rng);
      int body_cap = std::min({cfg.max_block_len, budget, (cfg.t_max - 1) / r});
      if (body_cap < 1) return;
      int len = 1 + geometric_length(0.3, body_cap - 1, rng);
      budget -= len;
      std::vector<Action> body;
      for (int i = 0; i < len; ++i) body.push_back(random_action(rng));
      p.items.push_back(RepeatStmt{r, std::move(body)});
      return;
    }
    int len = geometric_length(cfg.p_block_extend, std::min(cfg.max_block_len, budget), rng);
    budget -= len;
    for (int i = 0; i < len; ++i) p.items.push_back(ActStmt{random_action(rng)});
  };

  for (int i = 0; i < level; ++i) {
    emit_filler();
    if (kinds[i] == 0) {
      p.items.push_back(WhileStmt{random_cond(rng), draw_body(0.4)});
    } else if (kinds[i] == 1) {
      Cond c = random_cond(rng);
      auto then_body = draw_body(0.4);
      auto else_body = draw_body(0.4);
      p.items.push_back(IfStmt{c, std::move(then_body), std::move(else_body)});
    } else {
      p.items.push_back(IfStmt{random_cond(rng), draw_body(0.4), std::nullopt});
    }
  }
  emit_filler();
  validate(p, cfg.limits);
  return p;
}

Program sample_program(const GenConfig& cfg, std::mt19937_64& rng) {
  std::discrete_distribution<int> level(cfg.cost_weights.begin(), cfg.cost_weights.end());
  return sample_program_at_level(cfg, level(rng), rng);
}

BranchCoverage observe_branches(const Program& p, const std::vector<Demonstration>& demos) {
  size_t branching = 0;
  for (const Stmt& s : p.items)
    if (std::holds_alternative<WhileStmt>(s) || std::holds_alternative<IfStmt>(s)) ++branching;
  BranchCoverage cov;
  cov.seen_true.assign(branching, false);
  cov.seen_false.assign(branching, false);

  // Walks each demo's recorded perceptions with the replay cursor rules.
  // Valid demos of p always match, so no comparisons are needed.
  for (const Demonstration& demo : demos) {
    int cursor = 0;
    size_t branch_idx = 0;
    for (const Stmt& s : p.items) {
      if (const auto* act = std::get_if<ActStmt>(&s)) {
        (void)act;
        ++cursor;
      } else if (const auto* w = std::get_if<WhileStmt>(&s)) {
        bool first = eval_cond(w->cond, demo.perceptions.rows[cursor]);
        (first ? cov.seen_true : cov.seen_false)[branch_idx] = true;
        while (eval_cond(w->cond, demo.perceptions.rows[cursor]))
          cursor += static_cast<int>(w->body.size());
        ++branch_idx;
      } else if (const auto* r = std::get_if<RepeatStmt>(&s)) {
        cursor += r->count * static_cast<int>(r->body.size());
      } else {
        const auto& i = std::get<IfStmt>(s);
        bool taken = eval_cond(i.cond, demo.perceptions.rows[cursor]);
        (taken ? cov.seen_true : cov.seen_false)[branch_idx] = true;
        cursor += taken ? static_cast<int>(i.then_body.size())
                        : static_cast<int>(i.else_body ? i.else_body->size() : 0);
        ++branch_idx;
      }
    }
  }
  return cov;
}

bool covers_all_branches(const Program& p, const std::vector<Demonstration>& demos) {
  BranchCoverage cov = observe_branches(p, demos);
  for (size_t i = 0; i < cov.seen_true.size(); ++i)
    if (!cov.seen_true[i] || !cov.seen_false[i]) return false;
  return true;
}

Task generate_task(const GenConfig& cfg, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> level_pick(cfg.cost_weights.begin(), cfg.cost_weights.end());
  int level = level_pick(rng);

  for (int attempt = 0; attempt < cfg.attempt_budget; ++attempt) {
    Program prog = sample_program_at_level(cfg, level, rng);

    std::vector<Demonstration> observed;
    std::vector<WorldState> initials;
    bool ok = true;
    for (int slot = 0; slot < cfg.k_observed && ok; ++slot) {
      ok = false;
      for (int t = 0; t < cfg.state_tries; ++t) {
        WorldState s = sample_state(cfg, rng);
        if (std::find(initials.begin(), initials.end(), s) != initials.end()) continue;
        RunResult r = run_concrete(prog, s, cfg.t_max);
        if (r.status != RunStatus::Ok) continue;
        initials.push_back(s);
        observed.push_back(std::move(r.demo));
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    if (!covers_all_branches(prog, observed)) continue;

    std::vector<Demonstration> unseen;
    for (int slot = 0; slot < cfg.n_unseen && ok; ++slot) {
      ok = false;
      for (int t = 0; t < cfg.state_tries; ++t) {
        WorldState s = sample_state(cfg, rng);
        RunResult r = run_concrete(prog, s, cfg.t_max);
        if (r.status != RunStatus::Ok) continue;
        unseen.push_back(std::move(r.demo));
        ok = true;
        break;
      }
    }
    if (!ok) continue;

    Task task;
    task.seed = seed;
    task.ground_truth = std::move(prog);
    task.observed = std::move(observed);
    task.unseen = std::move(unseen);
    return task;
  }
  throw GenerationExhausted("no valid task after " + std::to_string(cfg.attempt_budget) +
                            " attempts (seed " + std::to_string(seed) + ")");
}

double sample_beta(const BetaParams& params, std::mt19937_64& rng) {
  std::gamma_distribution<double> ga(params.alpha, 1.0);
  std::gamma_distribution<double> gb(params.beta, 1.0);
  double a = ga(rng);
  double b = gb(rng);
  if (a + b <= 0) return 0.5;
  return a / (a + b);
}

NoisySpec corrupt(const Demonstration& demo, const NoiseConfig& noise, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto confidence = [&](bool flipped) {
    if (!flipped) return sample_beta(noise.conf_correct, rng);
    if (unit(rng) < noise.calibration_leak) return sample_beta(noise.conf_correct, rng);
    return sample_beta(noise.conf_wrong, rng);
  };

  NoisySpec spec;
  spec.actions.reserve(demo.actions.size());
  for (Action a : demo.actions) {
    bool flip = unit(rng) < noise.action_error_rate;
    Action value = a;
    if (flip) {
      std::uniform_int_distribution<int> other(0, kNumActions - 2);
      int v = other(rng);
      if (v >= static_cast<int>(a)) ++v;  // any action except the true one
      value = static_cast<Action>(v);
    }
    spec.actions.push_back({value, confidence(flip)});
  }
  spec.perceptions.reserve(demo.perceptions.rows.size());
  for (const PerceptionVector& row : demo.perceptions.rows) {
    std::array<PerceptionPrediction, kNumPerceptions> out;
    for (int j = 0; j < kNumPerceptions; ++j) {
      bool flip = unit(rng) < noise.perception_error_rate;
      out[j] = {flip ? !row[j] : row[j], confidence(flip)};
    }
    spec.perceptions.push_back(out);
  }
  return spec;
}

SpecData spec_values(const NoisySpec& spec) {
  SpecData data;
  data.actions.reserve(spec.actions.size());
  for (const auto& a : spec.actions) data.actions.push_back(a.value);
  data.perceptions.rows.reserve(spec.perceptions.size());
  for (const auto& row : spec.perceptions) {
    PerceptionVector v{};
    for (int j = 0; j < kNumPerceptions; ++j) v[j] = row[j].value;
    data.perceptions.rows.push_back(v);
  }
  return data;
}

NoisySpec exact_spec(const Demonstration& demo) {
  NoisySpec spec;
  for (Action a : demo.actions) spec.actions.push_back({a, 1.0});
  for (const PerceptionVector& row : demo.perceptions.rows) {
    std::array<PerceptionPrediction, kNumPerceptions> out;
    for (int j = 0; j < kNumPerceptions; ++j) out[j] = {row[j], 1.0};
    spec.perceptions.push_back(out);
  }
  return spec;
}

uint64_t noise_stream_seed(uint64_t noise_seed, uint64_t task_seed) {
  // splitmix64 mix of the two seeds
  uint64_t z = noise_seed + 0x9e3779b97f4a7c15ULL * (task_seed + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace plans
