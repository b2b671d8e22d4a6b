#include "plans/experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "plans/parallel.hpp"

namespace plans {

MeanStd aggregate(const std::vector<double>& per_seed) {
  MeanStd out;
  out.per_seed = per_seed;
  if (per_seed.empty()) return out;
  double sum = 0.0;
  for (double v : per_seed) sum += v;
  out.mean = sum / per_seed.size();
  double var = 0.0;
  for (double v : per_seed) var += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(var / per_seed.size());
  return out;
}

std::vector<NoisySpec> corrupt_task(const Task& task, const NoiseConfig& noise,
                                    uint64_t noise_seed, int use_k) {
  std::mt19937_64 rng(noise_stream_seed(noise_seed, task.seed));
  size_t count = task.observed.size();
  if (use_k > 0) count = std::min(count, static_cast<size_t>(use_k));
  std::vector<NoisySpec> specs;
  specs.reserve(count);
  for (size_t i = 0; i < count; ++i) specs.push_back(corrupt(task.observed[i], noise, rng));
  return specs;
}

SynthesisResult synthesize_mode(const std::string& mode, const std::vector<NoisySpec>& specs,
                                const FilterConfig& filter, const SynthBounds& bounds) {
  if (mode == "none") return synthesize_none(specs, bounds);
  if (mode == "static") return synthesize_static(specs, filter, bounds);
  if (mode == "dynamic") return synthesize_dynamic(specs, filter, bounds);
  throw std::invalid_argument("unknown filtering mode: " + mode);
}

std::string to_string(SynthOutcome outcome) {
  switch (outcome) {
    case SynthOutcome::Found: return "found";
    case SynthOutcome::Unsat: return "unsat";
    case SynthOutcome::BoundsExceeded: return "bounds_exceeded";
  }
  return "unknown";
}

RunReport run_experiment(const std::vector<Task>& tasks, const ExperimentConfig& cfg,
                         std::vector<std::vector<TaskVerdict>>* verdicts_out) {
  RunReport report;
  report.mode = cfg.mode;
  report.n_tasks = static_cast<int>(tasks.size());
  report.noise_seeds = cfg.noise_seeds;

  std::vector<double> exec_per_seed, prog_per_seed, seq_per_seed;
  if (verdicts_out) verdicts_out->clear();

  for (uint64_t noise_seed : cfg.noise_seeds) {
    std::vector<TaskVerdict> verdicts(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), cfg.parallel, [&](int i) {
      std::vector<NoisySpec> specs = corrupt_task(tasks[i], cfg.noise, noise_seed, cfg.use_k);
      SynthesisResult result = synthesize_mode(cfg.mode, specs, cfg.filter, cfg.bounds);
      verdicts[i] = score_task(tasks[i], result, cfg.t_max);
    });

    long exec_hits = 0, prog_hits = 0, seq_hits = 0;
    for (const TaskVerdict& v : verdicts) {
      exec_hits += v.execution;
      prog_hits += v.program;
      seq_hits += v.sequence;
      ++report.outcomes[to_string(v.outcome)];
    }
    double n = tasks.empty() ? 1.0 : static_cast<double>(tasks.size());
    exec_per_seed.push_back(exec_hits / n);
    prog_per_seed.push_back(prog_hits / n);
    seq_per_seed.push_back(seq_hits / n);
    if (verdicts_out) verdicts_out->push_back(std::move(verdicts));
  }

  report.execution = aggregate(exec_per_seed);
  report.program = aggregate(prog_per_seed);
  report.sequence = aggregate(seq_per_seed);
  return report;
}

}  // namespace plans
