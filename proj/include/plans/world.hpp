#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace plans {

enum class Heading : uint8_t { North, East, South, West };

// End is the explicit terminator token; it is never applied to a world.
enum class Action : uint8_t { Move, TurnLeft, TurnRight, PickMarker, PutMarker, End };

inline constexpr int kNumActions = 6;
inline constexpr int kNumPerceptions = 5;

enum class Perception : uint8_t {
  FrontIsClear,
  LeftIsClear,
  RightIsClear,
  MarkersPresent,
  NoMarkersPresent,
};

using PerceptionVector = std::array<bool, kNumPerceptions>;

// Rectangular grid; everything outside the grid counts as a wall.
struct WorldState {
  int width = 8;
  int height = 8;
  std::vector<uint8_t> walls;   // row-major, 1 = wall
  std::vector<int> markers;     // row-major marker counts
  int agent_row = 0;
  int agent_col = 0;
  Heading heading = Heading::East;
  int marker_cap = 10;

  bool wall_at(int row, int col) const {
    if (row < 0 || row >= height || col < 0 || col >= width) return true;
    return walls[static_cast<size_t>(row) * width + col] != 0;
  }
  int markers_at(int row, int col) const {
    return markers[static_cast<size_t>(row) * width + col];
  }

  bool operator==(const WorldState&) const = default;
};

WorldState make_empty_world(int width = 8, int height = 8);

Heading turn_left(Heading h);
Heading turn_right(Heading h);

// Row/col delta of one step in heading h (row 0 is the top row).
std::array<int, 2> heading_delta(Heading h);

// Returns the successor state, or nullopt when the action is invalid in s:
// Move into a wall/boundary, PickMarker on an empty cell, PutMarker at the
// per-cell cap. End and out-of-range values are invalid by definition.
std::optional<WorldState> apply_action(const WorldState& s, Action a);

PerceptionVector perceive(const WorldState& s);

bool valid_state(const WorldState& s);

const char* to_string(Action a);
const char* to_string(Heading h);
const char* to_string(Perception p);
std::optional<Action> action_from_string(const std::string& name);
std::optional<Heading> heading_from_string(const std::string& name);
std::optional<Perception> perception_from_string(const std::string& name);

}  // namespace plans
