#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plans/dataset.hpp"
#include "plans/experiment.hpp"
#include "plans/jsonio.hpp"
#include "plans/parallel.hpp"
#include "plans/parse.hpp"

namespace {

using namespace plans;

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<Task> load_corpus(const std::string& path) {
  std::vector<Task> tasks;
  for (const json& line : load_jsonl(path)) tasks.push_back(task_from_json(line));
  return tasks;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / v.size();
}

struct GenerateOpts {
  int tasks = 100;
  uint64_t seed = 0;
  std::string out;
  GenConfig cfg;
  std::vector<double> cost_weights{1.0, 1.0, 1.0};
};

void run_generate(const GenerateOpts& opts) {
  GenConfig cfg = opts.cfg;
  if (opts.cost_weights.size() != 3)
    throw std::runtime_error("--cost-weights needs exactly three values");
  std::copy(opts.cost_weights.begin(), opts.cost_weights.end(), cfg.cost_weights.begin());
  std::vector<json> lines;
  lines.reserve(opts.tasks);
  for (int i = 0; i < opts.tasks; ++i)
    lines.push_back(to_json(generate_task(cfg, opts.seed + static_cast<uint64_t>(i))));
  save_jsonl(opts.out, lines);
  std::cout << "wrote " << opts.tasks << " tasks to " << opts.out << '\n';
}

struct CorruptOpts {
  std::string in;
  std::string out;
  uint64_t seed = 1;
  int use_k = 0;
  NoiseConfig noise;
  std::vector<double> conf_correct{400.0, 1.0};
  std::vector<double> conf_wrong{5.0, 3.0};
};

void run_corrupt(const CorruptOpts& opts) {
  NoiseConfig noise = opts.noise;
  if (opts.conf_correct.size() != 2 || opts.conf_wrong.size() != 2)
    throw std::runtime_error("confidence Beta options need exactly two values");
  noise.conf_correct = {opts.conf_correct[0], opts.conf_correct[1]};
  noise.conf_wrong = {opts.conf_wrong[0], opts.conf_wrong[1]};
  std::vector<json> lines;
  for (const json& line : load_jsonl(opts.in)) {
    Task task = task_from_json(line);
    lines.push_back(specs_record_to_json(
        task.seed, corrupt_task(task, noise, opts.seed, opts.use_k)));
  }
  save_jsonl(opts.out, lines);
  std::cout << "wrote " << lines.size() << " noisy spec sets to " << opts.out << '\n';
}

struct SynthOpts {
  std::string specs_path;
  std::string mode = "dynamic";
  std::string out;
  std::string timing_out;
  std::string schedule = "1,0.95,0.9,0.8,0.7,0.6,0.5,0.4,0.3,0.2,0.1";
  FilterConfig filter;
  SynthBounds bounds;
  int parallel = 1;
};

void run_synth(const SynthOpts& opts) {
  FilterConfig filter = opts.filter;
  filter.prop_schedule = parse_schedule(opts.schedule);
  validate(filter);

  std::vector<std::pair<uint64_t, std::vector<NoisySpec>>> inputs;
  for (const json& line : load_jsonl(opts.specs_path))
    inputs.push_back(specs_record_from_json(line));

  std::vector<SynthesisResult> results(inputs.size());
  parallel_for(static_cast<int>(inputs.size()), opts.parallel, [&](int i) {
    results[i] = synthesize_mode(opts.mode, inputs[i].second, filter, opts.bounds);
  });

  std::vector<json> result_lines, timing_lines;
  std::map<std::string, long> outcomes;
  for (size_t i = 0; i < inputs.size(); ++i) {
    result_lines.push_back(result_record_to_json(inputs[i].first, opts.mode, results[i]));
    timing_lines.push_back(timing_record_to_json(inputs[i].first, results[i]));
    ++outcomes[to_string(results[i].outcome)];
  }
  save_jsonl(opts.out, result_lines);
  std::string timing_path = opts.timing_out.empty() ? opts.out + ".timing.jsonl" : opts.timing_out;
  save_jsonl(timing_path, timing_lines);

  std::cout << "synthesized " << inputs.size() << " tasks (mode " << opts.mode << "):";
  for (const auto& [name, count] : outcomes) std::cout << " " << name << "=" << count;
  std::cout << "; results in " << opts.out << ", timing in " << timing_path << '\n';
}

struct EvalOpts {
  std::string tasks_path;
  std::string results_path;
  std::string out;
  std::string verdicts_path;
  std::string k_sweep_path;
  std::string mode = "dynamic";
  int t_max = 20;
  int parallel = 1;
  uint64_t noise_seed = 1;
  NoiseConfig noise;
  FilterConfig filter;
  SynthBounds bounds;
};

SynthOutcome outcome_from_string(const std::string& name) {
  if (name == "found") return SynthOutcome::Found;
  if (name == "unsat") return SynthOutcome::Unsat;
  if (name == "bounds_exceeded") return SynthOutcome::BoundsExceeded;
  throw std::runtime_error("unknown outcome: " + name);
}

void run_eval_results(const EvalOpts& opts) {
  std::vector<Task> tasks = load_corpus(opts.tasks_path);
  std::map<uint64_t, const Task*> by_seed;
  for (const Task& t : tasks) by_seed[t.seed] = &t;

  std::vector<json> records = load_jsonl(opts.results_path);
  if (records.empty()) throw std::runtime_error("no result records in " + opts.results_path);

  RunReport report;
  report.n_tasks = static_cast<int>(records.size());
  std::vector<TaskVerdict> verdicts;
  long exec_hits = 0, prog_hits = 0, seq_hits = 0;
  for (const json& rec : records) {
    uint64_t seed = rec.at("task_seed").get<uint64_t>();
    auto it = by_seed.find(seed);
    if (it == by_seed.end())
      throw std::runtime_error("result for unknown task seed " + std::to_string(seed));
    std::string mode = rec.at("mode").get<std::string>();
    if (report.mode.empty())
      report.mode = mode;
    else if (report.mode != mode)
      throw std::runtime_error("mixed modes in results file");

    SynthesisResult result;
    result.outcome = outcome_from_string(rec.at("outcome").get<std::string>());
    result.n_used = rec.at("n_used").get<int>();
    result.solver_calls = rec.at("solver_calls").get<int>();
    result.specs_used = rec.at("specs_used").get<std::vector<int>>();
    if (!rec.at("program").is_null()) result.program = parse(rec.at("program").get<std::string>());

    TaskVerdict v = score_task(*it->second, result, opts.t_max);
    exec_hits += v.execution;
    prog_hits += v.program;
    seq_hits += v.sequence;
    ++report.outcomes[to_string(v.outcome)];
    verdicts.push_back(v);
  }

  double n = static_cast<double>(records.size());
  report.execution = aggregate({exec_hits / n});
  report.program = aggregate({prog_hits / n});
  report.sequence = aggregate({seq_hits / n});
  save_json(opts.out, to_json(report));

  if (!opts.verdicts_path.empty()) {
    std::vector<json> lines;
    for (const TaskVerdict& v : verdicts) lines.push_back(to_json(v));
    save_jsonl(opts.verdicts_path, lines);
  }
  std::cout << "mode " << report.mode << ": execution " << report.execution.mean << ", program "
            << report.program.mean << ", sequence " << report.sequence.mean << " over "
            << records.size() << " tasks; report in " << opts.out << '\n';
}

void run_eval_k_sweep(const EvalOpts& opts) {
  std::vector<Task> tasks = load_corpus(opts.tasks_path);
  if (tasks.empty()) throw std::runtime_error("empty corpus: " + opts.tasks_path);
  size_t k_max = tasks.front().observed.size();
  for (const Task& t : tasks) k_max = std::min(k_max, t.observed.size());

  std::ofstream out(opts.k_sweep_path);
  if (!out) throw std::runtime_error("cannot open for writing: " + opts.k_sweep_path);
  out << "k,mode,execution,program,sequence\n";
  for (size_t k = 1; k <= k_max; ++k) {
    ExperimentConfig cfg;
    cfg.mode = opts.mode;
    cfg.noise = opts.noise;
    cfg.filter = opts.filter;
    cfg.bounds = opts.bounds;
    cfg.noise_seeds = {opts.noise_seed};
    cfg.parallel = opts.parallel;
    cfg.t_max = opts.t_max;
    cfg.use_k = static_cast<int>(k);
    RunReport report = run_experiment(tasks, cfg);
    out << k << ',' << opts.mode << ',' << report.execution.mean << ',' << report.program.mean
        << ',' << report.sequence.mean << '\n';
    std::cout << "k=" << k << ": execution " << report.execution.mean << '\n';
  }
  std::cout << "k-sweep CSV in " << opts.k_sweep_path << '\n';
}

struct BenchOpts {
  std::string tasks_path;
  std::string mode = "dynamic";
  uint64_t noise_seed = 1;
  int parallel = 1;
  NoiseConfig noise{0.03, 0.03, {400.0, 1.0}, {5.0, 3.0}, 0.05};
  FilterConfig filter;
  SynthBounds bounds;
};

void run_bench(const BenchOpts& opts) {
  std::vector<Task> tasks = load_corpus(opts.tasks_path);
  if (tasks.empty()) throw std::runtime_error("empty corpus: " + opts.tasks_path);

  std::vector<std::vector<NoisySpec>> specs(tasks.size());
  std::vector<double> corrupt_ms(tasks.size());
  for (size_t i = 0; i < tasks.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    specs[i] = corrupt_task(tasks[i], opts.noise, opts.noise_seed);
    corrupt_ms[i] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
  }

  std::vector<SynthesisResult> results(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), opts.parallel, [&](int i) {
    results[i] = synthesize_mode(opts.mode, specs[i], opts.filter, opts.bounds);
  });

  std::vector<double> wall, longest, calls;
  for (const SynthesisResult& r : results) {
    wall.push_back(r.wall_time_ms);
    longest.push_back(r.longest_call_ms);
    calls.push_back(static_cast<double>(r.solver_calls));
  }
  double max_longest = 0.0;
  for (double v : longest) max_longest = std::max(max_longest, v);

  std::cout << "tasks                    " << tasks.size() << '\n'
            << "mode                     " << opts.mode << '\n'
            << "corruption mean (ms)     " << mean_of(corrupt_ms) << '\n'
            << "synthesis mean (ms)      " << mean_of(wall) << '\n'
            << "longest solver call mean (ms) " << mean_of(longest) << '\n'
            << "longest solver call max (ms)  " << max_longest << '\n'
            << "solver calls mean        " << mean_of(calls) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize minimal-control-flow grid-agent programs from noisy demonstrations"};
  app.require_subcommand(1);

  GenerateOpts gen;
  CLI::App* generate = app.add_subcommand("generate", "Generate a seeded task corpus (JSONL)");
  generate->option_defaults()->always_capture_default();
  generate->add_option("--tasks", gen.tasks, "Number of tasks");
  generate->add_option("--seed", gen.seed, "Base seed; task i uses seed+i");
  generate->add_option("--out", gen.out, "Output corpus JSONL")->required();
  generate->add_option("--k", gen.cfg.k_observed, "Observed demonstrations per task");
  generate->add_option("--unseen", gen.cfg.n_unseen, "Held-out demonstrations per task");
  generate->add_option("--width", gen.cfg.grid_width, "Grid width");
  generate->add_option("--height", gen.cfg.grid_height, "Grid height");
  generate->add_option("--wall-density", gen.cfg.wall_density, "Interior wall probability");
  generate->add_option("--marker-density", gen.cfg.marker_density, "Marker cell probability");
  generate->add_option("--t-max", gen.cfg.t_max, "Action budget per demonstration");
  generate->add_option("--cost-weights", gen.cost_weights, "Weights for cost levels 0,1,2")
      ->delimiter(',');
  generate->add_option("--max-actions", gen.cfg.max_total_actions,
                       "Written action tokens per program");
  generate->add_option("--max-block", gen.cfg.max_block_len, "Longest body/block");
  generate->callback([&] { run_generate(gen); });

  CorruptOpts cor;
  CLI::App* corrupt = app.add_subcommand("corrupt", "Corrupt corpus demonstrations into noisy specs");
  corrupt->option_defaults()->always_capture_default();
  corrupt->add_option("--in", cor.in, "Input corpus JSONL")->required();
  corrupt->add_option("--out", cor.out, "Output noisy-spec JSONL")->required();
  corrupt->add_option("--seed", cor.seed, "Noise seed");
  corrupt->add_option("--action-err", cor.noise.action_error_rate, "Action token flip rate");
  corrupt->add_option("--per-err", cor.noise.perception_error_rate, "Perception token flip rate");
  corrupt->add_option("--conf-correct", cor.conf_correct, "Beta(alpha,beta) for correct tokens")
      ->delimiter(',');
  corrupt->add_option("--conf-wrong", cor.conf_wrong, "Beta(alpha,beta) for flipped tokens")
      ->delimiter(',');
  corrupt->add_option("--leak", cor.noise.calibration_leak,
                      "Chance a flipped token still draws the correct-token Beta");
  corrupt->add_option("--use-k", cor.use_k, "Corrupt only the first k observed demos (0 = all)");
  corrupt->callback([&] { run_corrupt(cor); });

  SynthOpts syn;
  CLI::App* synth = app.add_subcommand("synth", "Synthesize programs from noisy specs");
  synth->option_defaults()->always_capture_default();
  synth->add_option("--specs", syn.specs_path, "Noisy-spec JSONL")->required();
  synth->add_option("--mode", syn.mode, "Confidence filtering mode")
      ->check(CLI::IsMember({"none", "static", "dynamic"}));
  synth->add_option("--eps-a", syn.filter.eps_action, "Action confidence threshold");
  synth->add_option("--eps-p", syn.filter.eps_perception,
                    "Perception confidence threshold (static mode)");
  synth->add_option("--schedule", syn.schedule,
                    "Proportions of specs tried by dynamic filtering");
  synth->add_option("--max-n", syn.bounds.max_n, "Largest control-flow cost searched");
  synth->add_option("--max-block", syn.bounds.max_block_len, "Longest body/block");
  synth->add_option("--r-max", syn.bounds.r_max, "Largest repeat count");
  synth->add_option("--node-budget", syn.bounds.node_budget, "Search node budget per call");
  synth->add_option("--parallel", syn.parallel, "Worker threads over tasks");
  synth->add_option("--out", syn.out, "Output results JSONL")->required();
  synth->add_option("--timing-out", syn.timing_out,
                    "Timing sidecar JSONL (default: <out>.timing.jsonl)");
  synth->callback([&] { run_synth(syn); });

  EvalOpts ev;
  CLI::App* eval = app.add_subcommand("eval", "Score synthesis results against a corpus");
  eval->option_defaults()->always_capture_default();
  eval->add_option("--tasks", ev.tasks_path, "Corpus JSONL")->required();
  eval->add_option("--results", ev.results_path, "Results JSONL from synth");
  eval->add_option("--out", ev.out, "Output report JSON");
  eval->add_option("--verdicts", ev.verdicts_path, "Optional per-task verdict JSONL");
  eval->add_option("--k-sweep", ev.k_sweep_path,
                   "Emit accuracy-vs-k CSV here (re-runs corrupt+synth per k)");
  eval->add_option("--mode", ev.mode, "Filtering mode for --k-sweep")
      ->check(CLI::IsMember({"none", "static", "dynamic"}));
  eval->add_option("--action-err", ev.noise.action_error_rate, "Action flip rate for --k-sweep");
  eval->add_option("--per-err", ev.noise.perception_error_rate,
                   "Perception flip rate for --k-sweep");
  eval->add_option("--noise-seed", ev.noise_seed, "Noise seed for --k-sweep");
  eval->add_option("--t-max", ev.t_max, "Action budget when replaying programs");
  eval->add_option("--parallel", ev.parallel, "Worker threads for --k-sweep");
  eval->callback([&] {
    if (!ev.k_sweep_path.empty()) {
      run_eval_k_sweep(ev);
      return;
    }
    if (ev.results_path.empty() || ev.out.empty())
      throw CLI::RequiredError("--results and --out (or --k-sweep)");
    run_eval_results(ev);
  });

  BenchOpts bench_opts;
  CLI::App* bench = app.add_subcommand("bench", "Timing summary over a corpus");
  bench->option_defaults()->always_capture_default();
  bench->add_option("--tasks", bench_opts.tasks_path, "Corpus JSONL")->required();
  bench->add_option("--mode", bench_opts.mode, "Filtering mode")
      ->check(CLI::IsMember({"none", "static", "dynamic"}));
  bench->add_option("--action-err", bench_opts.noise.action_error_rate, "Action flip rate");
  bench->add_option("--per-err", bench_opts.noise.perception_error_rate, "Perception flip rate");
  bench->add_option("--seed", bench_opts.noise_seed, "Noise seed");
  bench->add_option("--max-n", bench_opts.bounds.max_n, "Largest control-flow cost searched");
  bench->add_option("--parallel", bench_opts.parallel, "Worker threads over tasks");
  bench->callback([&] { run_bench(bench_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
