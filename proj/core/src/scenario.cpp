#include "headteleop/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bundled_scenarios.hpp"

namespace headteleop {
namespace {

[[noreturn]] void fail(std::string_view origin, const YAML::Node& node, const std::string& msg) {
  const auto mark = node.Mark();
  std::ostringstream os;
  os << origin;
  if (!mark.is_null()) os << ':' << (mark.line + 1) << ':' << (mark.column + 1);
  os << ": " << msg;
  if (mark.is_null()) throw ScenarioError(os.str());
  throw ScenarioError(os.str(), mark.line + 1, mark.column + 1);
}

const YAML::Node require(std::string_view origin, const YAML::Node& parent, const char* key) {
  const YAML::Node n = parent[key];
  if (!n) fail(origin, parent, std::string("missing '") + key + "'");
  return n;
}

template <typename T>
T scalar(std::string_view origin, const YAML::Node& n, const char* what) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(origin, n, std::string("bad value for '") + what + "'");
  }
}

Pose3 point(std::string_view origin, const YAML::Node& n, const char* what) {
  if (!n.IsSequence() || n.size() != 3) {
    fail(origin, n, std::string("'") + what + "' must be a list of three numbers");
  }
  Pose3 p{scalar<double>(origin, n[0], what), scalar<double>(origin, n[1], what),
          scalar<double>(origin, n[2], what)};
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
    fail(origin, n, std::string("'") + what + "' must be finite");
  }
  return p;
}

Scenario parse_node(std::string_view origin, const YAML::Node& root) {
  if (!root.IsMap()) fail(origin, root, "scenario must be a mapping");
  Scenario sc;
  sc.id = scalar<std::string>(origin, require(origin, root, "id"), "id");
  if (root["description"]) sc.description = scalar<std::string>(origin, root["description"], "description");
  if (root["time_limit_s"]) {
    sc.time_limit_s = scalar<double>(origin, root["time_limit_s"], "time_limit_s");
    if (!(sc.time_limit_s > 0.0)) fail(origin, root["time_limit_s"], "time_limit_s must be positive");
  }

  if (const auto objs = root["objects"]) {
    for (const auto& o : objs) {
      SimObject obj;
      obj.id = scalar<std::string>(origin, require(origin, o, "id"), "id");
      obj.pose = point(origin, require(origin, o, "pose"), "pose");
      if (o["attachable"]) obj.attachable = scalar<bool>(origin, o["attachable"], "attachable");
      sc.objects.push_back(std::move(obj));
    }
  }
  if (const auto regions = root["regions"]) {
    for (const auto& r : regions) {
      Region reg;
      reg.id = scalar<std::string>(origin, require(origin, r, "id"), "id");
      reg.min = point(origin, require(origin, r, "min"), "min");
      reg.max = point(origin, require(origin, r, "max"), "max");
      if (!(reg.min.x < reg.max.x && reg.min.y < reg.max.y && reg.min.z < reg.max.z)) {
        fail(origin, r, "region '" + reg.id + "' has min not below max");
      }
      sc.regions.push_back(std::move(reg));
    }
  }
  if (const auto targets = root["targets"]) {
    for (const auto& t : targets) {
      WipeTarget wt;
      wt.id = scalar<std::string>(origin, require(origin, t, "id"), "id");
      wt.pose = point(origin, require(origin, t, "pose"), "pose");
      sc.targets.push_back(std::move(wt));
    }
  }

  const YAML::Node success = require(origin, root, "success");
  const auto kind = scalar<std::string>(origin, require(origin, success, "kind"), "kind");
  auto object_ref = [&]() {
    const YAML::Node n = require(origin, success, "object");
    auto id = scalar<std::string>(origin, n, "object");
    if (!sc.find_object(id)) fail(origin, n, "unknown object '" + id + "'");
    return id;
  };
  auto region_ref = [&]() {
    const YAML::Node n = require(origin, success, "region");
    auto id = scalar<std::string>(origin, n, "region");
    if (!sc.region(id)) fail(origin, n, "unknown region '" + id + "'");
    return id;
  };

  if (kind == "place_in_region") {
    PlaceInRegion p;
    p.object = object_ref();
    p.region = region_ref();
    sc.success = p;
  } else if (kind == "remove_from_region") {
    RemoveFromRegion p;
    p.object = object_ref();
    p.region = region_ref();
    sc.success = p;
  } else if (kind == "wipe_contacts") {
    WipeContacts p;
    p.object = object_ref();
    const YAML::Node ts = require(origin, success, "targets");
    if (!ts.IsSequence() || ts.size() == 0) fail(origin, ts, "'targets' must be a non-empty list");
    for (const auto& t : ts) {
      auto id = scalar<std::string>(origin, t, "targets");
      if (!sc.target(id)) fail(origin, t, "unknown target '" + id + "'");
      p.targets.push_back(id);
    }
    if (success["contact_radius"]) {
      p.contact_radius = scalar<double>(origin, success["contact_radius"], "contact_radius");
      if (!(p.contact_radius > 0.0)) fail(origin, success["contact_radius"], "contact_radius must be positive");
    }
    p.required = static_cast<int>(p.targets.size());
    if (success["required"]) {
      p.required = scalar<int>(origin, success["required"], "required");
      if (p.required < 1 || p.required > static_cast<int>(p.targets.size())) {
        fail(origin, success["required"], "required must be between 1 and the number of targets");
      }
    }
    sc.success = p;
  } else {
    fail(origin, success["kind"], "unknown success kind '" + kind + "'");
  }
  return sc;
}

}  // namespace

ScenarioError::ScenarioError(const std::string& what, int line, int column)
    : std::runtime_error(what), line_(line), column_(column) {}

WorldState Scenario::initial_world() const {
  WorldState w;
  w.robot = home_state();
  w.objects = objects;
  return w;
}

const Region* Scenario::region(std::string_view id) const {
  for (const auto& r : regions) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const WipeTarget* Scenario::target(std::string_view id) const {
  for (const auto& t : targets) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const SimObject* Scenario::find_object(std::string_view id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

std::vector<std::string> bundled_scenario_ids() {
  std::vector<std::string> ids;
  for (const auto& b : detail::kBundledScenarios) ids.emplace_back(b.id);
  return ids;
}

Scenario parse_scenario(std::string_view yaml_text, std::string_view origin) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << origin << ':' << (e.mark.line + 1) << ':' << (e.mark.column + 1) << ": " << e.msg;
    throw ScenarioError(os.str(), e.mark.line + 1, e.mark.column + 1);
  }
  return parse_node(origin, root);
}

Scenario load_scenario(std::string_view id_or_path) {
  for (const auto& b : detail::kBundledScenarios) {
    if (b.id == id_or_path) return parse_scenario(b.yaml, b.id);
  }
  const std::filesystem::path path{std::string(id_or_path)};
  std::ifstream in(path);
  if (!in) throw ScenarioError("no bundled scenario or readable file named '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

void update_wipe_progress(const Scenario& scenario, const WorldState& world,
                          WipeProgress& progress) {
  const auto* wipe = std::get_if<WipeContacts>(&scenario.success);
  if (wipe == nullptr) return;
  if (!world.robot.held_object || *world.robot.held_object != wipe->object) return;
  const SimObject* obj = world.find(wipe->object);
  if (obj == nullptr) return;
  for (const auto& id : wipe->targets) {
    const WipeTarget* t = scenario.target(id);
    if (t != nullptr && distance(obj->pose, t->pose) <= wipe->contact_radius) {
      progress.touched.insert(id);
    }
  }
}

bool check_success(const Scenario& scenario, const WorldState& world,
                   const WipeProgress& progress) {
  return std::visit(
      [&](const auto& pred) -> bool {
        using T = std::decay_t<decltype(pred)>;
        if constexpr (std::is_same_v<T, WipeContacts>) {
          const auto hits = std::count_if(pred.targets.begin(), pred.targets.end(),
                                          [&](const std::string& id) { return progress.touched.contains(id); });
          return hits >= pred.required;
        } else {
          const SimObject* obj = world.find(pred.object);
          const Region* reg = scenario.region(pred.region);
          if (obj == nullptr || reg == nullptr) return false;
          const bool inside = reg->contains(obj->pose);
          if constexpr (std::is_same_v<T, PlaceInRegion>) {
            const bool held = world.robot.held_object && *world.robot.held_object == pred.object;
            return inside && !held;
          } else {
            return !inside;
          }
        }
      },
      scenario.success);
}

}  // namespace headteleop
