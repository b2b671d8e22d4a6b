#include "plans/world.hpp"

namespace plans {

WorldState make_empty_world(int width, int height) {
  WorldState s;
  s.width = width;
  s.height = height;
  s.walls.assign(static_cast<size_t>(width) * height, 0);
  s.markers.assign(static_cast<size_t>(width) * height, 0);
  return s;
}

Heading turn_left(Heading h) {
  switch (h) {
    case Heading::North: return Heading::West;
    case Heading::West: return Heading::South;
    case Heading::South: return Heading::East;
    case Heading::East: return Heading::North;
  }
  return h;
}

Heading turn_right(Heading h) {
  switch (h) {
    case Heading::North: return Heading::East;
    case Heading::East: return Heading::South;
    case Heading::South: return Heading::West;
    case Heading::West: return Heading::North;
  }
  return h;
}

std::array<int, 2> heading_delta(Heading h) {
  switch (h) {
    case Heading::North: return {-1, 0};
    case Heading::East: return {0, 1};
    case Heading::South: return {1, 0};
    case Heading::West: return {0, -1};
  }
  return {0, 0};
}

std::optional<WorldState> apply_action(const WorldState& s, Action a) {
  switch (a) {
    case Action::Move: {
      auto [dr, dc] = heading_delta(s.heading);
      int nr = s.agent_row + dr;
      int nc = s.agent_col + dc;
      if (s.wall_at(nr, nc)) return std::nullopt;
      WorldState out = s;
      out.agent_row = nr;
      out.agent_col = nc;
      return out;
    }
    case Action::TurnLeft: {
      WorldState out = s;
      out.heading = turn_left(s.heading);
      return out;
    }
    case Action::TurnRight: {
      WorldState out = s;
      out.heading = turn_right(s.heading);
      return out;
    }
    case Action::PickMarker: {
      if (s.markers_at(s.agent_row, s.agent_col) < 1) return std::nullopt;
      WorldState out = s;
      out.markers[static_cast<size_t>(s.agent_row) * s.width + s.agent_col] -= 1;
      return out;
    }
    case Action::PutMarker: {
      if (s.markers_at(s.agent_row, s.agent_col) >= s.marker_cap) return std::nullopt;
      WorldState out = s;
      out.markers[static_cast<size_t>(s.agent_row) * s.width + s.agent_col] += 1;
      return out;
    }
    case Action::End: return std::nullopt;
  }
  return std::nullopt;
}

PerceptionVector perceive(const WorldState& s) {
  PerceptionVector v{};
  auto clear_towards = [&](Heading h) {
    auto [dr, dc] = heading_delta(h);
    return !s.wall_at(s.agent_row + dr, s.agent_col + dc);
  };
  v[static_cast<int>(Perception::FrontIsClear)] = clear_towards(s.heading);
  v[static_cast<int>(Perception::LeftIsClear)] = clear_towards(turn_left(s.heading));
  v[static_cast<int>(Perception::RightIsClear)] = clear_towards(turn_right(s.heading));
  bool markers = s.markers_at(s.agent_row, s.agent_col) > 0;
  v[static_cast<int>(Perception::MarkersPresent)] = markers;
  v[static_cast<int>(Perception::NoMarkersPresent)] = !markers;
  return v;
}

bool valid_state(const WorldState& s) {
  if (s.width < 1 || s.height < 1) return false;
  size_t cells = static_cast<size_t>(s.width) * s.height;
  if (s.walls.size() != cells || s.markers.size() != cells) return false;
  if (s.agent_row < 0 || s.agent_row >= s.height) return false;
  if (s.agent_col < 0 || s.agent_col >= s.width) return false;
  if (s.wall_at(s.agent_row, s.agent_col)) return false;
  for (int m : s.markers)
    if (m < 0 || m > s.marker_cap) return false;
  return true;
}

const char* to_string(Action a) {
  switch (a) {
    case Action::Move: return "move";
    case Action::TurnLeft: return "turnLeft";
    case Action::TurnRight: return "turnRight";
    case Action::PickMarker: return "pickMarker";
    case Action::PutMarker: return "putMarker";
    case Action::End: return "end";
  }
  return "?";
}

const char* to_string(Heading h) {
  switch (h) {
    case Heading::North: return "N";
    case Heading::East: return "E";
    case Heading::South: return "S";
    case Heading::West: return "W";
  }
  return "?";
}

const char* to_string(Perception p) {
  switch (p) {
    case Perception::FrontIsClear: return "frontIsClear";
    case Perception::LeftIsClear: return "leftIsClear";
    case Perception::RightIsClear: return "rightIsClear";
    case Perception::MarkersPresent: return "markersPresent";
    case Perception::NoMarkersPresent: return "noMarkersPresent";
  }
  return "?";
}

std::optional<Action> action_from_string(const std::string& name) {
  for (int i = 0; i < kNumActions; ++i) {
    Action a = static_cast<Action>(i);
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

std::optional<Heading> heading_from_string(const std::string& name) {
  for (int i = 0; i < 4; ++i) {
    Heading h = static_cast<Heading>(i);
    if (name == to_string(h)) return h;
  }
  return std::nullopt;
}

std::optional<Perception> perception_from_string(const std::string& name) {
  for (int i = 0; i < kNumPerceptions; ++i) {
    Perception p = static_cast<Perception>(i);
    if (name == to_string(p)) return p;
  }
  return std::nullopt;
}

}  // namespace plans
