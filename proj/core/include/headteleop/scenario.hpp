#pragma once

// Task scenarios: a world layout plus a success predicate.
//
// Scenario files are YAML; see data/scenarios/ for the bundled ones and
// docs/formats.md for the schema.

#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "headteleop/robot_sim.hpp"

namespace headteleop {

/// Axis-aligned box in the world frame.
struct Region {
  std::string id;
  Pose3 min;
  Pose3 max;

  bool contains(const Pose3& p) const {
    return min.x <= p.x && p.x <= max.x && min.y <= p.y && p.y <= max.y && min.z <= p.z &&
           p.z <= max.z;
  }
};

struct WipeTarget {
  std::string id;
  Pose3 pose;
};

/// Object released (not held) inside the region.
struct PlaceInRegion {
  std::string object;
  std::string region;
};

/// Object anywhere outside the region, held or not.
struct RemoveFromRegion {
  std::string object;
  std::string region;
};

/// The held wipe object has come within contact_radius of `required` of the
/// listed targets.
struct WipeContacts {
  std::string object;
  std::vector<std::string> targets;
  double contact_radius = 0.08;
  int required = 0;
};

using SuccessPredicate = std::variant<PlaceInRegion, RemoveFromRegion, WipeContacts>;

inline constexpr double kDefaultTimeLimitS = 840.0;

struct Scenario {
  std::string id;
  std::string description;
  double time_limit_s = kDefaultTimeLimitS;
  std::vector<SimObject> objects;
  std::vector<Region> regions;
  std::vector<WipeTarget> targets;
  SuccessPredicate success;

  WorldState initial_world() const;
  const Region* region(std::string_view id) const;
  const WipeTarget* target(std::string_view id) const;
  const SimObject* find_object(std::string_view id) const;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& what, int line = -1, int column = -1);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Ids of the scenarios compiled into the library.
std::vector<std::string> bundled_scenario_ids();

/// Parses scenario YAML. `origin` names the source in error messages.
Scenario parse_scenario(std::string_view yaml_text, std::string_view origin = "<string>");

/// Bundled id ("cup", "trash", "blanket", "cleaning", "practice") or a path to
/// a scenario file. Throws ScenarioError.
Scenario load_scenario(std::string_view id_or_path);

/// Targets touched so far by the held wipe object.
struct WipeProgress {
  std::set<std::string> touched;
};

/// Marks every target within contact radius of the wipe object while it is
/// held. No-op for other predicate kinds.
void update_wipe_progress(const Scenario& scenario, const WorldState& world,
                          WipeProgress& progress);

bool check_success(const Scenario& scenario, const WorldState& world,
                   const WipeProgress& progress = {});

}  // namespace headteleop
