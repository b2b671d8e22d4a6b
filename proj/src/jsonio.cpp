#include "plans/jsonio.hpp"

#include <fstream>
#include <stdexcept>

#include "plans/parse.hpp"

namespace plans {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

Action parse_action(const std::string& name) {
  auto a = action_from_string(name);
  if (!a) throw std::runtime_error("unknown action name: " + name);
  return *a;
}

Heading parse_heading(const std::string& name) {
  auto h = heading_from_string(name);
  if (!h) throw std::runtime_error("unknown heading: " + name);
  return *h;
}

}  // namespace

json to_json(const WorldState& world) {
  json walls = json::array();
  json markers = json::array();
  for (int r = 0; r < world.height; ++r) {
    json wall_row = json::array();
    json marker_row = json::array();
    for (int c = 0; c < world.width; ++c) {
      wall_row.push_back(world.wall_at(r, c));
      marker_row.push_back(world.markers_at(r, c));
    }
    walls.push_back(std::move(wall_row));
    markers.push_back(std::move(marker_row));
  }
  return json{{"width", world.width},
              {"height", world.height},
              {"walls", std::move(walls)},
              {"markers", std::move(markers)},
              {"agent", json::array({world.agent_row, world.agent_col})},
              {"heading", to_string(world.heading)},
              {"marker_cap", world.marker_cap}};
}

WorldState world_from_json(const json& j) {
  WorldState world;
  world.width = j.at("width").get<int>();
  world.height = j.at("height").get<int>();
  world.marker_cap = j.at("marker_cap").get<int>();
  world.walls.assign(static_cast<size_t>(world.width) * world.height, 0);
  world.markers.assign(static_cast<size_t>(world.width) * world.height, 0);
  const json& walls = j.at("walls");
  const json& markers = j.at("markers");
  for (int r = 0; r < world.height; ++r) {
    for (int c = 0; c < world.width; ++c) {
      size_t idx = static_cast<size_t>(r) * world.width + c;
      world.walls[idx] = walls.at(r).at(c).get<bool>() ? 1 : 0;
      world.markers[idx] = markers.at(r).at(c).get<int>();
    }
  }
  world.agent_row = j.at("agent").at(0).get<int>();
  world.agent_col = j.at("agent").at(1).get<int>();
  world.heading = parse_heading(j.at("heading").get<std::string>());
  if (!valid_state(world)) throw std::runtime_error("invalid world state in JSON");
  return world;
}

json to_json(const Demonstration& demo) {
  json states = json::array();
  for (const WorldState& s : demo.states) states.push_back(to_json(s));
  json actions = json::array();
  for (Action a : demo.actions) actions.push_back(to_string(a));
  json perceptions = json::array();
  for (const PerceptionVector& row : demo.perceptions.rows) {
    json r = json::array();
    for (bool b : row) r.push_back(b);
    perceptions.push_back(std::move(r));
  }
  return json{{"states", std::move(states)},
              {"actions", std::move(actions)},
              {"perceptions", std::move(perceptions)}};
}

Demonstration demo_from_json(const json& j) {
  Demonstration demo;
  for (const json& s : j.at("states")) demo.states.push_back(world_from_json(s));
  for (const json& a : j.at("actions"))
    demo.actions.push_back(parse_action(a.get<std::string>()));
  for (const json& row : j.at("perceptions")) {
    PerceptionVector v{};
    for (int p = 0; p < kNumPerceptions; ++p) v[p] = row.at(p).get<bool>();
    demo.perceptions.rows.push_back(v);
  }
  if (!validate_demo(demo)) throw std::runtime_error("invalid demonstration in JSON");
  return demo;
}

json to_json(const Task& task) {
  json observed = json::array();
  for (const Demonstration& d : task.observed) observed.push_back(to_json(d));
  json unseen = json::array();
  for (const Demonstration& d : task.unseen) unseen.push_back(to_json(d));
  return json{{"seed", task.seed},
              {"program", pretty(task.ground_truth)},
              {"observed", std::move(observed)},
              {"unseen", std::move(unseen)}};
}

Task task_from_json(const json& j) {
  Task task;
  task.seed = j.at("seed").get<uint64_t>();
  task.ground_truth = parse(j.at("program").get<std::string>());
  for (const json& d : j.at("observed")) task.observed.push_back(demo_from_json(d));
  for (const json& d : j.at("unseen")) task.unseen.push_back(demo_from_json(d));
  return task;
}

json to_json(const NoisySpec& spec) {
  json actions = json::array();
  for (const ActionPrediction& a : spec.actions)
    actions.push_back(json{{"v", to_string(a.value)}, {"c", a.confidence}});
  json perceptions = json::array();
  for (const auto& row : spec.perceptions) {
    json r = json::array();
    for (const PerceptionPrediction& p : row)
      r.push_back(json{{"v", p.value}, {"c", p.confidence}});
    perceptions.push_back(std::move(r));
  }
  return json{{"actions", std::move(actions)}, {"perceptions", std::move(perceptions)}};
}

NoisySpec spec_from_json(const json& j) {
  NoisySpec spec;
  for (const json& a : j.at("actions"))
    spec.actions.push_back(
        {parse_action(a.at("v").get<std::string>()), a.at("c").get<double>()});
  for (const json& row : j.at("perceptions")) {
    std::array<PerceptionPrediction, kNumPerceptions> r{};
    for (int p = 0; p < kNumPerceptions; ++p)
      r[p] = {row.at(p).at("v").get<bool>(), row.at(p).at("c").get<double>()};
    spec.perceptions.push_back(r);
  }
  if (spec.actions.size() != spec.perceptions.size())
    throw std::runtime_error("noisy spec length mismatch");
  return spec;
}

json specs_record_to_json(uint64_t task_seed, const std::vector<NoisySpec>& specs) {
  json arr = json::array();
  for (const NoisySpec& s : specs) arr.push_back(to_json(s));
  return json{{"task_seed", task_seed}, {"specs", std::move(arr)}};
}

std::pair<uint64_t, std::vector<NoisySpec>> specs_record_from_json(const json& j) {
  std::vector<NoisySpec> specs;
  for (const json& s : j.at("specs")) specs.push_back(spec_from_json(s));
  return {j.at("task_seed").get<uint64_t>(), std::move(specs)};
}

json result_record_to_json(uint64_t task_seed, const std::string& mode,
                           const SynthesisResult& result) {
  json out{{"task_seed", task_seed},
           {"mode", mode},
           {"outcome", to_string(result.outcome)},
           {"n_used", result.n_used},
           {"specs_used", result.specs_used},
           {"solver_calls", result.solver_calls}};
  if (result.outcome == SynthOutcome::Found)
    out["program"] = pretty(result.program);
  else
    out["program"] = nullptr;
  return out;
}

json timing_record_to_json(uint64_t task_seed, const SynthesisResult& result) {
  return json{{"task_seed", task_seed},
              {"wall_time_ms", result.wall_time_ms},
              {"longest_call_ms", result.longest_call_ms},
              {"solver_calls", result.solver_calls}};
}

json to_json(const TaskVerdict& verdict) {
  return json{{"task_seed", verdict.task_seed},
              {"execution", verdict.execution},
              {"program", verdict.program},
              {"sequence", verdict.sequence},
              {"outcome", to_string(verdict.outcome)},
              {"n_used", verdict.n_used},
              {"solver_calls", verdict.solver_calls},
              {"wall_time_ms", verdict.wall_time_ms},
              {"longest_call_ms", verdict.longest_call_ms}};
}

namespace {

json to_json(const MeanStd& m) {
  return json{{"mean", m.mean}, {"stddev", m.stddev}, {"per_seed", m.per_seed}};
}

}  // namespace

json to_json(const RunReport& report) {
  return json{{"mode", report.mode},
              {"n_tasks", report.n_tasks},
              {"noise_seeds", report.noise_seeds},
              {"execution", to_json(report.execution)},
              {"program", to_json(report.program)},
              {"sequence", to_json(report.sequence)},
              {"outcomes", report.outcomes}};
}

std::vector<json> load_jsonl(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<json> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(json::parse(line));
  }
  return records;
}

void save_jsonl(const std::string& path, const std::vector<json>& records) {
  std::ofstream out = open_out(path);
  for (const json& r : records) out << r.dump() << '\n';
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

json load_json(const std::string& path) {
  std::ifstream in = open_in(path);
  return json::parse(in);
}

}  // namespace plans
