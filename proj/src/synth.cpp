#include "plans/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include "plans/semantics.hpp"

namespace plans {

ConfidenceLevels confidence_levels(const NoisySpec& spec) {
  ConfidenceLevels out;
  for (const auto& a : spec.actions) out.action_conf = std::min(out.action_conf, a.confidence);
  for (const auto& row : spec.perceptions)
    for (const auto& p : row) out.per_conf = std::min(out.per_conf, p.confidence);
  return out;
}

void validate(const FilterConfig& cfg) {
  if (cfg.eps_action < 0 || cfg.eps_action > 1 || cfg.eps_perception < 0 || cfg.eps_perception > 1)
    throw std::invalid_argument("confidence thresholds must lie in [0, 1]");
  if (cfg.prop_schedule.empty() || cfg.prop_schedule.front() != 1.0)
    throw std::invalid_argument("prop schedule must start at 1");
  for (size_t i = 0; i < cfg.prop_schedule.size(); ++i) {
    double p = cfg.prop_schedule[i];
    if (p <= 0 || p > 1) throw std::invalid_argument("prop values must lie in (0, 1]");
    if (i > 0 && p >= cfg.prop_schedule[i - 1])
      throw std::invalid_argument("prop schedule must be strictly decreasing");
  }
}

std::vector<int> static_filter(const std::vector<NoisySpec>& specs, const FilterConfig& cfg) {
  std::vector<int> kept;
  for (size_t i = 0; i < specs.size(); ++i) {
    ConfidenceLevels levels = confidence_levels(specs[i]);
    if (levels.action_conf >= cfg.eps_action && levels.per_conf >= cfg.eps_perception)
      kept.push_back(static_cast<int>(i));
  }
  return kept;
}

namespace {

struct BudgetExhausted {};

enum class BranchKind : uint8_t { While = 0, IfElse = 1, If = 2 };

// Running minimum over the satisfying candidates of one skeleton. Loop-carrying
// skeletons order by (action tokens outside while bodies, token sequence);
// loop-free ones fall straight to the token-sequence order.
struct BestCandidate {
  bool use_outside = true;
  bool found = false;
  long outside = 0;
  std::vector<Token> tokens;
  Program program;

  void offer(long candidate_outside, Program candidate) {
    if (!use_outside) candidate_outside = 0;
    std::vector<Token> candidate_tokens = token_seq(candidate);
    if (!found || candidate_outside < outside ||
        (candidate_outside == outside && token_seq_less(candidate_tokens, tokens))) {
      found = true;
      outside = candidate_outside;
      tokens = std::move(candidate_tokens);
      program = std::move(candidate);
    }
  }
};

// Exhaustive search over flat programs whose branching statements follow one
// fixed skeleton. Straight-line content is never enumerated blindly: outside
// a branch every spec must agree on the next action, so fillers and bodies
// are read off the specs and the search only branches on segment boundaries,
// conditions and body lengths.
class SkeletonSearch {
 public:
  SkeletonSearch(const std::vector<SpecData>& specs, const std::vector<BranchKind>& skeleton,
                 const SynthBounds& bounds, uint64_t& nodes_left, BestCandidate& best)
      : specs_(specs), skeleton_(skeleton), bounds_(bounds), nodes_left_(nodes_left), best_(best) {
    k_ = static_cast<int>(specs.size());
    cursors_.assign(k_, 0);
    all_.resize(k_);
    for (int s = 0; s < k_; ++s) all_[s] = s;
  }

  void run() { dfs(0, 0); }

 private:
  // Prefixes reaching the same (cursors, placed, run_len, glue) state admit
  // the same completions, so a prefix beaten by an already-explored one on
  // the candidate order can be dropped. Comparisons settled only past the
  // shorter prefix's end stay open: the completion decides those.
  struct MemoEntry {
    long outside;
    std::vector<Token> tokens;  // trailing End stripped
  };

  static bool is_prefix(const std::vector<Token>& a, const std::vector<Token>& b) {
    return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
  }

  bool dominated(size_t placed, int run_len) {
    std::vector<int> key = cursors_;
    key.push_back(static_cast<int>(placed));
    key.push_back(run_len);
    key.push_back(items_.empty() || std::holds_alternative<ActStmt>(items_.back()) ? 0 : 1);

    std::vector<Token> now = token_seq(Program{items_});
    now.pop_back();  // trailing End is constant, not part of the prefix

    auto& entries = memo_[std::move(key)];
    for (const MemoEntry& e : entries) {
      if (best_.use_outside && e.outside < outside_) return true;
      if ((!best_.use_outside || e.outside == outside_) && token_seq_less(e.tokens, now) &&
          !is_prefix(e.tokens, now))
        return true;
    }
    if (entries.size() < 16) entries.push_back({outside_, std::move(now)});
    return false;
  }

  int spec_len(int s) const { return static_cast<int>(specs_[s].actions.size()); }

  // Longest run of actions every member's targets agree on from the current
  // cursors, End excluded, at most cap long.
  std::vector<Action> forced_run(const std::vector<int>& members, int cap) const {
    std::vector<Action> run;
    int offset = 0;
    while (static_cast<int>(run.size()) < cap) {
      Action agreed{};
      bool ok = !members.empty();
      for (size_t m = 0; m < members.size() && ok; ++m) {
        int s = members[m];
        int c = cursors_[s] + offset;
        if (c >= spec_len(s)) {
          ok = false;
          break;
        }
        Action cur = specs_[s].actions[c];
        if (cur == Action::End) {
          ok = false;
          break;
        }
        if (m == 0)
          agreed = cur;
        else if (cur != agreed)
          ok = false;
      }
      if (!ok) break;
      run.push_back(agreed);
      ++offset;
    }
    return run;
  }

  // Replays while(cond){body} on every spec from the current cursors.
  // False when any spec would mismatch, overrun, or exceed the loop bound.
  bool simulate_while(const Cond& cond, const std::vector<Action>& body,
                      std::vector<int>& out_cursors) const {
    out_cursors = cursors_;
    for (int s = 0; s < k_; ++s) {
      int c = cursors_[s];
      int len = spec_len(s);
      int iters = 0;
      for (;;) {
        if (c >= len) return false;  // condition read past the trace
        if (!eval_cond(cond, specs_[s].perceptions.rows[c])) break;
        if (++iters > len) return false;
        for (Action b : body) {
          if (c >= len || specs_[s].actions[c] != b) return false;
          ++c;
        }
      }
      out_cursors[s] = c;
    }
    return true;
  }

  void try_stop() {
    for (int s = 0; s < k_; ++s) {
      int last = spec_len(s) - 1;
      if (cursors_[s] != last || specs_[s].actions[last] != Action::End) return;
    }
    best_.offer(outside_, Program{items_});
  }

  void descend(size_t placed, int run_len, Stmt stmt, const std::vector<int>& new_cursors,
               long outside_delta) {
    items_.push_back(std::move(stmt));
    std::vector<int> saved = cursors_;
    cursors_ = new_cursors;
    outside_ += outside_delta;
    dfs(placed, run_len);
    outside_ -= outside_delta;
    cursors_ = std::move(saved);
    items_.pop_back();
  }

  void dfs(size_t placed, int run_len) {
    if (nodes_left_ == 0) throw BudgetExhausted{};
    --nodes_left_;
    if (dominated(placed, run_len)) return;

    if (placed == skeleton_.size()) try_stop();

    std::vector<Action> run = forced_run(all_, bounds_.max_block_len * bounds_.r_max);

    // Forced straight-line step.
    if (run_len < bounds_.max_block_len && !run.empty()) {
      std::vector<int> next = cursors_;
      for (int& c : next) ++c;
      descend(placed, run_len + 1, ActStmt{run[0]}, next, 1);
    }

    // Repeat segments over the forced run: body = first L tokens, unrolled
    // r times while the run stays L-periodic.
    int max_f = static_cast<int>(run.size());
    for (int body_len = 1; body_len <= std::min(bounds_.max_block_len, max_f); ++body_len) {
      int periodic_end = body_len;
      while (periodic_end < max_f && run[periodic_end] == run[periodic_end - body_len])
        ++periodic_end;
      for (int reps = 2; reps <= bounds_.r_max && reps * body_len <= periodic_end; ++reps) {
        std::vector<Action> body(run.begin(), run.begin() + body_len);
        std::vector<int> next = cursors_;
        for (int& c : next) c += reps * body_len;
        descend(placed, 0, RepeatStmt{reps, std::move(body)}, next,
                static_cast<long>(reps) * body_len);
      }
    }

    if (placed < skeleton_.size()) expand_control(placed);
  }

  void expand_control(size_t placed) {
    for (int s = 0; s < k_; ++s)
      if (cursors_[s] >= spec_len(s)) return;  // any condition read would overrun

    BranchKind kind = skeleton_[placed];
    for (int negated = 0; negated < 2; ++negated) {
      for (int prim = 0; prim < kNumPerceptions; ++prim) {
        Cond cond{static_cast<Perception>(prim), negated == 1};
        if (kind == BranchKind::While)
          expand_while(placed, cond);
        else
          expand_if(placed, cond, kind == BranchKind::IfElse);
      }
    }
  }

  void expand_while(size_t placed, const Cond& cond) {
    std::vector<int> taking;
    for (int s = 0; s < k_; ++s)
      if (eval_cond(cond, specs_[s].perceptions.rows[cursors_[s]])) taking.push_back(s);

    std::vector<int> next;
    if (taking.empty()) {
      // Never entered on any spec: the body is unconstrained; use the
      // canonical minimal one.
      if (simulate_while(cond, {Action::Move}, next))
        descend(placed + 1, 0, WhileStmt{cond, {Action::Move}}, next, 0);
      return;
    }
    std::vector<Action> agreed = forced_run(taking, bounds_.max_block_len);
    for (int body_len = 1; body_len <= static_cast<int>(agreed.size()); ++body_len) {
      std::vector<Action> body(agreed.begin(), agreed.begin() + body_len);
      if (simulate_while(cond, body, next))
        descend(placed + 1, 0, WhileStmt{cond, std::move(body)}, next, 0);
    }
  }

  void expand_if(size_t placed, const Cond& cond, bool with_else) {
    std::vector<int> taken, skipped;
    for (int s = 0; s < k_; ++s) {
      bool v = eval_cond(cond, specs_[s].perceptions.rows[cursors_[s]]);
      (v ? taken : skipped).push_back(s);
    }

    // Body choices for one branch: prefixes of the agreed run of the specs
    // that take it, or the canonical minimal body when no spec does.
    auto branch_options = [&](const std::vector<int>& members) {
      std::vector<std::vector<Action>> options;
      if (members.empty()) {
        options.push_back({Action::Move});
        return options;
      }
      std::vector<Action> agreed = forced_run(members, bounds_.max_block_len);
      for (int len = 1; len <= static_cast<int>(agreed.size()); ++len)
        options.emplace_back(agreed.begin(), agreed.begin() + len);
      return options;
    };

    auto advance = [](std::vector<int>& cursors, const std::vector<int>& members, int by) {
      for (int s : members) cursors[s] += by;
    };

    if (!with_else) {
      for (auto& body : branch_options(taken)) {
        std::vector<int> next = cursors_;
        advance(next, taken, static_cast<int>(body.size()));
        descend(placed + 1, 0, IfStmt{cond, body, std::nullopt}, next,
                static_cast<long>(body.size()));
      }
      return;
    }

    auto then_options = branch_options(taken);
    auto else_options = branch_options(skipped);
    for (const auto& then_body : then_options) {
      for (const auto& else_body : else_options) {
        std::vector<int> next = cursors_;
        advance(next, taken, static_cast<int>(then_body.size()));
        advance(next, skipped, static_cast<int>(else_body.size()));
        long delta = static_cast<long>(then_body.size()) + static_cast<long>(else_body.size());
        descend(placed + 1, 0, IfStmt{cond, then_body, else_body}, next, delta);
      }
    }
  }

  const std::vector<SpecData>& specs_;
  const std::vector<BranchKind>& skeleton_;
  const SynthBounds& bounds_;
  uint64_t& nodes_left_;
  BestCandidate& best_;

  int k_ = 0;
  std::vector<int> all_;
  std::vector<int> cursors_;
  std::vector<Stmt> items_;
  long outside_ = 0;
  std::map<std::vector<int>, std::vector<MemoEntry>> memo_;
};

std::vector<std::vector<BranchKind>> skeletons(int n) {
  std::vector<std::vector<BranchKind>> out;
  std::vector<BranchKind> current;
  auto rec = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (int kind = 0; kind < 3; ++kind) {
      current.push_back(static_cast<BranchKind>(kind));
      self(self, remaining - 1);
      current.pop_back();
    }
  };
  rec(rec, n);
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<SpecData> values_at(const std::vector<NoisySpec>& specs, const std::vector<int>& idx) {
  std::vector<SpecData> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(spec_values(specs[i]));
  return out;
}

std::vector<int> iota_indices(size_t n) {
  std::vector<int> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
  return idx;
}

}  // namespace

AtBoundResult synthesize_at_bound(const std::vector<SpecData>& specs, int n,
                                  const SynthBounds& bounds) {
  AtBoundResult out;
  if (specs.empty()) return out;
  uint64_t nodes_left = bounds.node_budget;
  try {
    // Skeleton order is the primary preference; the earliest skeleton with a
    // satisfying candidate wins, its best candidate chosen by the secondary
    // keys inside BestCandidate.
    for (const auto& skeleton : skeletons(n)) {
      BestCandidate best;
      best.use_outside =
          std::find(skeleton.begin(), skeleton.end(), BranchKind::While) != skeleton.end();
      SkeletonSearch search(specs, skeleton, bounds, nodes_left, best);
      search.run();
      if (best.found) {
        out.outcome = SynthOutcome::Found;
        out.program = std::move(best.program);
        for (const SpecData& spec : specs)
          if (!satisfies(out.program, spec.perceptions, spec.actions))
            throw std::logic_error("synthesized program fails a fed spec");
        if (cost(out.program) != n)
          throw std::logic_error("synthesized program cost differs from the bound");
        return out;
      }
    }
  } catch (const BudgetExhausted&) {
    out.outcome = SynthOutcome::BoundsExceeded;
  }
  return out;
}

SynthesisResult synthesize_min_cost(const std::vector<SpecData>& specs, const SynthBounds& bounds) {
  SynthesisResult result;
  auto start = std::chrono::steady_clock::now();
  for (int n = 0; n <= bounds.max_n; ++n) {
    auto call_start = std::chrono::steady_clock::now();
    AtBoundResult ab = synthesize_at_bound(specs, n, bounds);
    ++result.solver_calls;
    result.longest_call_ms = std::max(result.longest_call_ms, elapsed_ms(call_start));
    if (ab.outcome == SynthOutcome::Found) {
      result.outcome = SynthOutcome::Found;
      result.program = std::move(ab.program);
      result.n_used = n;
      break;
    }
    if (ab.outcome == SynthOutcome::BoundsExceeded) {
      result.outcome = SynthOutcome::BoundsExceeded;
      break;
    }
  }
  result.wall_time_ms = elapsed_ms(start);
  return result;
}

SynthesisResult synthesize_none(const std::vector<NoisySpec>& specs, const SynthBounds& bounds) {
  std::vector<int> idx = iota_indices(specs.size());
  SynthesisResult result = synthesize_min_cost(values_at(specs, idx), bounds);
  result.specs_used = std::move(idx);
  return result;
}

SynthesisResult synthesize_static(const std::vector<NoisySpec>& specs, const FilterConfig& cfg,
                                  const SynthBounds& bounds) {
  validate(cfg);
  std::vector<int> kept = static_filter(specs, cfg);
  if (kept.empty()) return {};
  SynthesisResult result = synthesize_min_cost(values_at(specs, kept), bounds);
  result.specs_used = std::move(kept);
  return result;
}

SynthesisResult synthesize_dynamic(const std::vector<NoisySpec>& specs, const FilterConfig& cfg,
                                   const SynthBounds& bounds) {
  validate(cfg);
  std::vector<int> pool;
  std::vector<double> per_conf(specs.size(), 0.0);
  for (size_t i = 0; i < specs.size(); ++i) {
    ConfidenceLevels levels = confidence_levels(specs[i]);
    if (levels.action_conf >= cfg.eps_action) {
      pool.push_back(static_cast<int>(i));
      per_conf[i] = levels.per_conf;
    }
  }

  SynthesisResult result;
  auto start = std::chrono::steady_clock::now();
  if (pool.empty()) {
    result.wall_time_ms = elapsed_ms(start);
    return result;
  }
  // Decreasing perception confidence, ties by input index (pool is already
  // index-ascending, so a stable sort keeps that order on ties).
  std::stable_sort(pool.begin(), pool.end(),
                   [&](int a, int b) { return per_conf[a] > per_conf[b]; });

  int k = static_cast<int>(pool.size());
  for (double prop : cfg.prop_schedule) {
    int u = static_cast<int>(std::ceil(prop * k - 1e-9));
    u = std::max(1, std::min(u, k));
    std::vector<int> subset(pool.begin(), pool.begin() + u);
    SynthesisResult sub = synthesize_min_cost(values_at(specs, subset), bounds);
    result.solver_calls += sub.solver_calls;
    result.longest_call_ms = std::max(result.longest_call_ms, sub.longest_call_ms);
    if (sub.outcome == SynthOutcome::Found) {
      result.outcome = SynthOutcome::Found;
      result.program = std::move(sub.program);
      result.n_used = sub.n_used;
      std::sort(subset.begin(), subset.end());
      result.specs_used = std::move(subset);
      break;
    }
    if (sub.outcome == SynthOutcome::BoundsExceeded) {
      result.outcome = SynthOutcome::BoundsExceeded;
      break;
    }
  }
  result.wall_time_ms = elapsed_ms(start);
  return result;
}

}  // namespace plans
