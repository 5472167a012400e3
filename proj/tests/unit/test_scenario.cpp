#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "headteleop/scenario.hpp"

using namespace headteleop;

namespace {

const char* kMinimal = R"(
id: box
objects:
  - id: block
    pose: [0, 0, 0]
regions:
  - id: bin
    min: [1, 1, 0]
    max: [2, 2, 1]
success:
  kind: place_in_region
  object: block
  region: bin
)";

Pose3 center(const Region& r) {
  return {(r.min.x + r.max.x) / 2, (r.min.y + r.max.y) / 2, (r.min.z + r.max.z) / 2};
}

}  // namespace

TEST(Scenario, BundledIds) {
  auto ids = bundled_scenario_ids();
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(ids, (std::vector<std::string>{"blanket", "cleaning", "cup", "practice", "trash"}));
  for (const auto& id : ids) {
    const Scenario sc = load_scenario(id);
    EXPECT_EQ(sc.id, id);
    EXPECT_DOUBLE_EQ(sc.time_limit_s, 840.0);
    EXPECT_FALSE(check_success(sc, sc.initial_world())) << id;
  }
}

TEST(Scenario, Cup) {
  const Scenario sc = load_scenario("cup");
  ASSERT_EQ(sc.objects.size(), 1U);
  EXPECT_TRUE(sc.objects[0].attachable);
  EXPECT_EQ(sc.regions.size(), 1U);
  ASSERT_TRUE(std::holds_alternative<PlaceInRegion>(sc.success));
}

TEST(Scenario, TrashOnFloor) {
  const Scenario sc = load_scenario("trash");
  ASSERT_EQ(sc.objects.size(), 1U);
  EXPECT_TRUE(sc.objects[0].attachable);
  EXPECT_EQ(sc.objects[0].pose.z, 0.0);
  ASSERT_EQ(sc.regions.size(), 1U);
}

TEST(Scenario, InitialWorldIsHome) {
  const auto w = load_scenario("blanket").initial_world();
  EXPECT_EQ(w.robot, home_state());
  ASSERT_TRUE(w.find("blanket"));
}

TEST(Scenario, PlaceRequiresRelease) {
  const Scenario sc = load_scenario("cup");
  WorldState w = sc.initial_world();
  w.find("cup")->pose = center(sc.regions[0]);
  EXPECT_TRUE(check_success(sc, w));
  w.robot.held_object = "cup";
  EXPECT_FALSE(check_success(sc, w));
}

TEST(Scenario, BlanketRemoved) {
  const Scenario sc = load_scenario("blanket");
  WorldState w = sc.initial_world();
  EXPECT_FALSE(check_success(sc, w));
  w.find("blanket")->pose.y += 1.0;
  EXPECT_TRUE(check_success(sc, w));
}

TEST(Scenario, WipeCountsHeldContacts) {
  const Scenario sc = load_scenario("cleaning");
  WorldState w = sc.initial_world();
  WipeProgress prog;
  // Not held: touching does not count.
  w.find("towel")->pose = sc.target("tape_1")->pose;
  update_wipe_progress(sc, w, prog);
  EXPECT_TRUE(prog.touched.empty());

  w.robot.held_object = "towel";
  w.find("towel")->pose = sc.target("tape_1")->pose;
  w.find("towel")->pose.y += 0.02;  // clear of tape_2
  update_wipe_progress(sc, w, prog);
  EXPECT_EQ(prog.touched, std::set<std::string>{"tape_1"});
  EXPECT_FALSE(check_success(sc, w, prog));
  // Tapes sit closer together than the contact radius: one spot can touch two.
  w.find("towel")->pose = sc.target("tape_3")->pose;
  w.find("towel")->pose.y += 0.035;
  update_wipe_progress(sc, w, prog);
  EXPECT_EQ(prog.touched.size(), 3U);
  EXPECT_TRUE(check_success(sc, w, prog));
}

TEST(Scenario, ParseMinimal) {
  const Scenario sc = parse_scenario(kMinimal);
  EXPECT_EQ(sc.id, "box");
  EXPECT_DOUBLE_EQ(sc.time_limit_s, 840.0);
  EXPECT_TRUE(sc.objects[0].attachable);
}

TEST(Scenario, MalformedFiles) {
  auto bad = [](std::string text) {
    EXPECT_THROW(parse_scenario(text, "t.yaml"), ScenarioError) << text;
  };
  std::string no_region = kMinimal;
  no_region.erase(no_region.find("regions:"), no_region.find("success:") - no_region.find("regions:"));
  bad(no_region);
  bad("id: x\nsuccess: {kind: place_in_region, object: a, region: b}\n");
  bad("id: x\nobjects: [{id: a, pose: [0, 0]}]\nsuccess: {kind: remove_from_region, object: a, region: r}\n");
  bad("id: x\nregions: [{id: r, min: [1, 0, 0], max: [0, 1, 1]}]\nobjects: [{id: a, pose: [0, 0, 0]}]\n"
      "success: {kind: remove_from_region, object: a, region: r}\n");
  bad("id: [oops\n");
  bad("id: x\nobjects: [{id: a, pose: [0, 0, 0]}]\nsuccess: {kind: juggle, object: a}\n");
  bad("id: x\nobjects: [{id: a, pose: [0, 0, 0]}]\ntargets: [{id: t, pose: [0, 0, 0]}]\n"
      "success: {kind: wipe_contacts, object: a, targets: [t], required: 2}\n");
  try {
    parse_scenario(no_region, "t.yaml");
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("t.yaml"), std::string::npos);
    EXPECT_GT(e.line(), 0);
  }
}

TEST(Scenario, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "headteleop_scenario_test.yaml";
  {
    std::ofstream(path) << kMinimal;
  }
  EXPECT_EQ(load_scenario(path.string()).id, "box");
  std::filesystem::remove(path);
  EXPECT_THROW(load_scenario("no_such_scenario"), ScenarioError);
}
