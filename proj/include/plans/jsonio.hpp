#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "plans/dataset.hpp"
#include "plans/experiment.hpp"

namespace plans {

using json = nlohmann::json;

json to_json(const WorldState& world);
WorldState world_from_json(const json& j);

json to_json(const Demonstration& demo);
Demonstration demo_from_json(const json& j);

// One corpus line: {"seed", "program", "observed", "unseen"}.
json to_json(const Task& task);
Task task_from_json(const json& j);

json to_json(const NoisySpec& spec);
NoisySpec spec_from_json(const json& j);

// One noisy-spec line: {"task_seed", "specs"}.
json specs_record_to_json(uint64_t task_seed, const std::vector<NoisySpec>& specs);
std::pair<uint64_t, std::vector<NoisySpec>> specs_record_from_json(const json& j);

// One synthesis-result line: {"task_seed", "mode", "outcome", "program",
// "n_used", "specs_used", "solver_calls"}. Timing stays out so reruns are
// byte-identical; it goes to the timing sidecar instead.
json result_record_to_json(uint64_t task_seed, const std::string& mode,
                           const SynthesisResult& result);

json timing_record_to_json(uint64_t task_seed, const SynthesisResult& result);

json to_json(const TaskVerdict& verdict);

json to_json(const RunReport& report);

std::vector<json> load_jsonl(const std::string& path);
void save_jsonl(const std::string& path, const std::vector<json>& records);
void save_json(const std::string& path, const json& j);
json load_json(const std::string& path);

}  // namespace plans
