#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "plans/experiment.hpp"
#include "plans/jsonio.hpp"
#include "plans/parse.hpp"
#include "support.hpp"

using namespace plans;

namespace {

// A task whose observed and unseen walks pin down the corridor walker.
Task corridor_task() {
  Task t;
  t.seed = 99;
  t.ground_truth = parse("while(frontIsClear): move ; end");
  for (int col : {0, 1, 2, 3}) {
    WorldState w = make_empty_world(4, 1);
    w.agent_col = col;
    w.heading = Heading::East;
    RunResult r = run_concrete(t.ground_truth, w);
    REQUIRE(r.status == RunStatus::Ok);
    (col < 2 ? t.observed : t.unseen).push_back(r.demo);
  }
  return t;
}

SynthesisResult found(const std::string& text) {
  SynthesisResult r;
  r.outcome = SynthOutcome::Found;
  r.program = parse(text);
  r.n_used = cost(r.program);
  r.solver_calls = 1;
  return r;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/plans_ut_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("sequence match is exact spelling equality") {
  Program rolled = parse("repeat(3): move ; end");
  Program flat = parse("move ; move ; move ; end");
  CHECK(sequence_match(rolled, rolled));
  CHECK_FALSE(sequence_match(rolled, flat));
  CHECK_FALSE(sequence_match(parse("move ; end"), parse("turnLeft ; end")));
}

TEST_CASE("program match identifies programs up to repeat unrolling") {
  Program rolled = parse("repeat(3): move ; end");
  Program flat = parse("move ; move ; move ; end");
  CHECK(program_match(rolled, flat));
  CHECK(program_match(flat, rolled));
  CHECK(program_match(parse("repeat(2): move turnLeft ; end"),
                      parse("move ; turnLeft ; repeat(2): move turnLeft ; end")) == false);
  CHECK(program_match(parse("repeat(2): move turnLeft ; end"),
                      parse("move ; turnLeft ; move ; turnLeft ; end")));

  // Semantically equivalent branch spellings are still different programs.
  Program pos = parse("if(frontIsClear): move else: turnLeft ; end");
  Program neg = parse("if(not frontIsClear): turnLeft else: move ; end");
  CHECK_FALSE(program_match(pos, neg));
  CHECK(program_match(pos, pos));
}

TEST_CASE("execution match replays the held-out demonstrations") {
  Task task = corridor_task();
  CHECK(execution_match(task.ground_truth, task));

  // Cannot reproduce both unseen walks (they have different lengths).
  CHECK_FALSE(execution_match(parse("move ; move ; end"), task));

  // Runs into the wall on the length-1 unseen walk: invalid, not a match.
  CHECK_FALSE(execution_match(parse("move ; end"), task));

  // Right actions, copied from one unseen demo, fail on the other.
  CHECK_FALSE(execution_match(parse("move ; turnLeft ; end"), task));
}

TEST_CASE("task scoring copies solver fields and gates metrics on found") {
  Task task = corridor_task();

  SynthesisResult hit = found("while(frontIsClear): move ; end");
  hit.solver_calls = 4;
  hit.wall_time_ms = 12.5;
  hit.longest_call_ms = 7.5;
  TaskVerdict v = score_task(task, hit);
  CHECK(v.task_seed == 99);
  CHECK(v.execution);
  CHECK(v.program);
  CHECK(v.sequence);
  CHECK(v.outcome == SynthOutcome::Found);
  CHECK(v.n_used == 1);
  CHECK(v.solver_calls == 4);
  CHECK(v.wall_time_ms == doctest::Approx(12.5));
  CHECK(v.longest_call_ms == doctest::Approx(7.5));

  // A prediction that spins forever in the corridor scores nothing even
  // though its first actions look right.
  TaskVerdict w = score_task(task, found("while(not leftIsClear): move ; end"));
  CHECK_FALSE(w.execution);
  CHECK_FALSE(w.program);
  CHECK_FALSE(w.sequence);

  SynthesisResult miss;
  miss.outcome = SynthOutcome::Unsat;
  miss.solver_calls = 3;
  TaskVerdict u = score_task(task, miss);
  CHECK_FALSE(u.execution);
  CHECK_FALSE(u.program);
  CHECK_FALSE(u.sequence);
  CHECK(u.outcome == SynthOutcome::Unsat);
  CHECK(u.n_used == -1);
  CHECK(u.solver_calls == 3);
}

TEST_CASE("metric hierarchy on a repeat-spelled prediction") {
  // Ground truth written with a repeat; prediction is the unrolled spelling.
  Task task;
  task.seed = 7;
  task.ground_truth = parse("repeat(3): move ; end");
  WorldState w = make_empty_world(8, 1);
  RunResult r = run_concrete(task.ground_truth, w);
  REQUIRE(r.status == RunStatus::Ok);
  task.unseen.push_back(r.demo);

  TaskVerdict v = score_task(task, found("move ; move ; move ; end"));
  CHECK(v.execution);
  CHECK(v.program);
  CHECK_FALSE(v.sequence);

  TaskVerdict exact = score_task(task, found("repeat(3): move ; end"));
  CHECK(exact.execution);
  CHECK(exact.program);
  CHECK(exact.sequence);
}

TEST_CASE("aggregate computes mean and population deviation") {
  MeanStd m = aggregate({0.5, 0.7});
  CHECK(m.mean == doctest::Approx(0.6));
  CHECK(m.stddev == doctest::Approx(0.1));
  CHECK(m.per_seed == std::vector<double>{0.5, 0.7});

  MeanStd single = aggregate({0.42});
  CHECK(single.mean == doctest::Approx(0.42));
  CHECK(single.stddev == doctest::Approx(0.0));

  MeanStd none = aggregate({});
  CHECK(none.mean == 0.0);
  CHECK(none.stddev == 0.0);
  CHECK(none.per_seed.empty());
}

TEST_CASE("task corruption is seeded and honors the demonstration cap") {
  Task task = generate_task(GenConfig{}, 3);
  NoiseConfig noise;
  noise.action_error_rate = 0.2;
  noise.perception_error_rate = 0.2;

  std::vector<NoisySpec> a = corrupt_task(task, noise, 1);
  std::vector<NoisySpec> b = corrupt_task(task, noise, 1);
  REQUIRE(a.size() == task.observed.size());
  REQUIRE(a.size() == b.size());
  bool identical = true;
  for (size_t i = 0; i < a.size(); ++i) {
    for (int t = 0; t < a[i].length(); ++t) {
      if (a[i].actions[t].value != b[i].actions[t].value ||
          a[i].actions[t].confidence != b[i].actions[t].confidence)
        identical = false;
    }
  }
  CHECK(identical);

  std::vector<NoisySpec> c = corrupt_task(task, noise, 2);
  bool differs = false;
  for (size_t i = 0; i < a.size() && !differs; ++i)
    for (int t = 0; t < a[i].length() && !differs; ++t)
      if (a[i].actions[t].value != c[i].actions[t].value ||
          a[i].actions[t].confidence != c[i].actions[t].confidence)
        differs = true;
  CHECK(differs);

  std::vector<NoisySpec> capped = corrupt_task(task, noise, 1, 3);
  CHECK(capped.size() == 3);
  std::vector<NoisySpec> all = corrupt_task(task, noise, 1, 0);
  CHECK(all.size() == task.observed.size());
  std::vector<NoisySpec> over = corrupt_task(task, noise, 1, 999);
  CHECK(over.size() == task.observed.size());

  // Zero noise: the spec values equal the demonstration exactly.
  std::vector<NoisySpec> clean = corrupt_task(task, NoiseConfig{}, 1);
  for (size_t i = 0; i < clean.size(); ++i) {
    CHECK(spec_values(clean[i]).actions == task.observed[i].actions);
    CHECK(spec_values(clean[i]).perceptions.rows == task.observed[i].perceptions.rows);
  }
}

TEST_CASE("mode dispatch") {
  std::vector<NoisySpec> specs;
  {
    WorldState w = make_empty_world(4, 1);
    w.agent_col = 2;
    w.heading = Heading::East;
    RunResult r = run_concrete(parse("while(frontIsClear): move ; end"), w);
    REQUIRE(r.status == RunStatus::Ok);
    specs.push_back(exact_spec(r.demo));
  }
  SynthBounds bounds;
  CHECK(synthesize_mode("none", specs, FilterConfig{}, bounds).outcome == SynthOutcome::Found);
  CHECK(synthesize_mode("static", specs, FilterConfig{}, bounds).outcome == SynthOutcome::Found);
  CHECK(synthesize_mode("dynamic", specs, FilterConfig{}, bounds).outcome == SynthOutcome::Found);
  CHECK_THROWS_AS(synthesize_mode("greedy", specs, FilterConfig{}, bounds),
                  std::invalid_argument);
}

TEST_CASE("outcome names") {
  CHECK(to_string(SynthOutcome::Found) == "found");
  CHECK(to_string(SynthOutcome::Unsat) == "unsat");
  CHECK(to_string(SynthOutcome::BoundsExceeded) == "bounds_exceeded");
}

TEST_CASE("experiment runs are reproducible and parallel-invariant") {
  std::vector<Task> tasks;
  for (uint64_t seed = 0; seed < 6; ++seed) tasks.push_back(generate_task(GenConfig{}, seed));

  ExperimentConfig cfg;
  cfg.mode = "dynamic";
  cfg.noise.action_error_rate = 0.05;
  cfg.noise.perception_error_rate = 0.05;
  cfg.noise_seeds = {1, 2};

  std::vector<std::vector<TaskVerdict>> serial_verdicts, parallel_verdicts;
  cfg.parallel = 1;
  RunReport serial = run_experiment(tasks, cfg, &serial_verdicts);
  cfg.parallel = 4;
  RunReport parallel = run_experiment(tasks, cfg, &parallel_verdicts);

  CHECK(serial.n_tasks == 6);
  CHECK(serial.noise_seeds == std::vector<uint64_t>{1, 2});
  REQUIRE(serial.execution.per_seed.size() == 2);
  long total = 0;
  for (const auto& [name, count] : serial.outcomes) total += count;
  CHECK(total == 12);  // 6 tasks x 2 seeds

  CHECK(serial.execution.mean == parallel.execution.mean);
  CHECK(serial.execution.stddev == parallel.execution.stddev);
  CHECK(serial.execution.per_seed == parallel.execution.per_seed);
  CHECK(serial.program.per_seed == parallel.program.per_seed);
  CHECK(serial.sequence.per_seed == parallel.sequence.per_seed);
  CHECK(serial.outcomes == parallel.outcomes);

  REQUIRE(serial_verdicts.size() == 2);
  REQUIRE(parallel_verdicts.size() == 2);
  for (size_t s = 0; s < 2; ++s) {
    REQUIRE(serial_verdicts[s].size() == 6);
    for (size_t i = 0; i < 6; ++i) {
      const TaskVerdict& a = serial_verdicts[s][i];
      const TaskVerdict& b = parallel_verdicts[s][i];
      CHECK(a.task_seed == tasks[i].seed);
      CHECK(a.task_seed == b.task_seed);
      CHECK(a.execution == b.execution);
      CHECK(a.program == b.program);
      CHECK(a.sequence == b.sequence);
      CHECK(a.outcome == b.outcome);
      CHECK(a.n_used == b.n_used);
      CHECK(a.solver_calls == b.solver_calls);
    }
  }

  // Metric means are consistent with the verdicts they aggregate.
  for (size_t s = 0; s < 2; ++s) {
    int hits = 0;
    for (const TaskVerdict& v : serial_verdicts[s]) hits += v.execution ? 1 : 0;
    CHECK(serial.execution.per_seed[s] == doctest::Approx(hits / 6.0));
  }
}

TEST_CASE("zero noise experiment solves the corridor-style corpus") {
  std::vector<Task> tasks;
  for (uint64_t seed = 10; seed < 14; ++seed) tasks.push_back(generate_task(GenConfig{}, seed));
  ExperimentConfig cfg;
  cfg.mode = "none";
  RunReport report = run_experiment(tasks, cfg);
  CHECK(report.outcomes.at("found") == 4);
  CHECK(report.execution.per_seed.size() == 1);
  CHECK(report.execution.mean == 1.0);
}

TEST_CASE("world json round trip") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    WorldState w = plans::testing::random_world(rng);
    WorldState back = world_from_json(to_json(w));
    CHECK(back == w);
  }
  json j = to_json(make_empty_world());
  j["agent"][1] = 99;  // off the grid
  CHECK_THROWS_AS(world_from_json(j), std::runtime_error);
}

TEST_CASE("demonstration json round trip rejects tampering") {
  WorldState w = make_empty_world(4, 1);
  w.heading = Heading::East;
  RunResult r = run_concrete(parse("while(frontIsClear): move ; end"), w);
  REQUIRE(r.status == RunStatus::Ok);

  json j = to_json(r.demo);
  Demonstration back = demo_from_json(j);
  CHECK(back.actions == r.demo.actions);
  CHECK(back.states == r.demo.states);
  CHECK(back.perceptions.rows == r.demo.perceptions.rows);

  json bad = j;
  bad["perceptions"][1][0] = !bad["perceptions"][1][0].get<bool>();
  CHECK_THROWS_AS(demo_from_json(bad), std::runtime_error);
}

TEST_CASE("task json round trip") {
  Task task = generate_task(GenConfig{}, 17);
  Task back = task_from_json(to_json(task));
  CHECK(back.seed == task.seed);
  CHECK(back.ground_truth == task.ground_truth);
  REQUIRE(back.observed.size() == task.observed.size());
  REQUIRE(back.unseen.size() == task.unseen.size());
  for (size_t i = 0; i < task.observed.size(); ++i) {
    CHECK(back.observed[i].actions == task.observed[i].actions);
    CHECK(back.observed[i].states == task.observed[i].states);
  }
}

TEST_CASE("noisy spec json round trip preserves values and confidences") {
  Task task = generate_task(GenConfig{}, 23);
  NoiseConfig noise;
  noise.action_error_rate = 0.1;
  noise.perception_error_rate = 0.1;
  std::vector<NoisySpec> specs = corrupt_task(task, noise, 5);

  auto [seed_back, specs_back] =
      specs_record_from_json(specs_record_to_json(task.seed, specs));
  CHECK(seed_back == task.seed);
  REQUIRE(specs_back.size() == specs.size());
  for (size_t i = 0; i < specs.size(); ++i) {
    REQUIRE(specs_back[i].length() == specs[i].length());
    for (int t = 0; t < specs[i].length(); ++t) {
      CHECK(specs_back[i].actions[t].value == specs[i].actions[t].value);
      CHECK(specs_back[i].actions[t].confidence == specs[i].actions[t].confidence);
      for (int p = 0; p < kNumPerceptions; ++p) {
        CHECK(specs_back[i].perceptions[t][p].value == specs[i].perceptions[t][p].value);
        CHECK(specs_back[i].perceptions[t][p].confidence ==
              specs[i].perceptions[t][p].confidence);
      }
    }
  }
}

TEST_CASE("result records stay timing-free; timing goes to the sidecar") {
  SynthesisResult r = found("move ; end");
  r.specs_used = {0, 2};
  r.wall_time_ms = 3.25;
  r.longest_call_ms = 1.5;

  json rec = result_record_to_json(7, "dynamic", r);
  CHECK(rec.at("task_seed") == 7);
  CHECK(rec.at("mode") == "dynamic");
  CHECK(rec.at("outcome") == "found");
  CHECK(rec.at("program") == "move ; end");
  CHECK(rec.at("n_used") == 0);
  CHECK(rec.at("specs_used") == json::array({0, 2}));
  CHECK(rec.at("solver_calls") == 1);
  CHECK_FALSE(rec.contains("wall_time_ms"));
  CHECK_FALSE(rec.contains("longest_call_ms"));

  SynthesisResult miss;
  miss.outcome = SynthOutcome::Unsat;
  CHECK(result_record_to_json(8, "static", miss).at("program").is_null());

  json timing = timing_record_to_json(7, r);
  CHECK(timing.at("task_seed") == 7);
  CHECK(timing.at("wall_time_ms") == doctest::Approx(3.25));
  CHECK(timing.at("longest_call_ms") == doctest::Approx(1.5));
  CHECK(timing.at("solver_calls") == 1);
}

TEST_CASE("verdict and report serialization shape") {
  TaskVerdict v;
  v.task_seed = 12;
  v.execution = true;
  v.outcome = SynthOutcome::Found;
  json jv = to_json(v);
  CHECK(jv.at("task_seed") == 12);
  CHECK(jv.at("execution") == true);
  CHECK(jv.at("program") == false);
  CHECK(jv.at("outcome") == "found");
  CHECK(jv.contains("wall_time_ms"));  // verdicts do carry timing

  RunReport rep;
  rep.mode = "static";
  rep.n_tasks = 5;
  rep.noise_seeds = {1, 2};
  rep.execution = aggregate({0.2, 0.4});
  rep.outcomes["found"] = 3;
  json jr = to_json(rep);
  CHECK(jr.at("mode") == "static");
  CHECK(jr.at("n_tasks") == 5);
  CHECK(jr.at("execution").at("mean") == doctest::Approx(0.3));
  CHECK(jr.at("execution").at("per_seed") == json::array({0.2, 0.4}));
  CHECK(jr.at("outcomes").at("found") == 3);
}

TEST_CASE("jsonl files round trip and skip blank lines") {
  TempFile f("round.jsonl");
  std::vector<json> records{{{"a", 1}}, {{"b", "two"}}, {{"c", json::array({1, 2, 3})}}};
  save_jsonl(f.path, records);
  CHECK(load_jsonl(f.path) == records);

  {
    std::ofstream app(f.path, std::ios::app);
    app << "\n\n";
  }
  CHECK(load_jsonl(f.path) == records);

  CHECK_THROWS_AS(load_jsonl("/nonexistent/nope.jsonl"), std::runtime_error);
}

TEST_CASE("json files round trip") {
  TempFile f("round.json");
  json j{{"mode", "none"}, {"n", 3}, {"xs", json::array({1.5, 2.5})}};
  save_json(f.path, j);
  CHECK(load_json(f.path) == j);
}
