#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "qgeom/suites.hpp"

using namespace qgeom;
using fx::v2;
using fx::v3;

namespace {

Scene crossing_scene() { return scene_from_json(scene_template("crossing")); }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST(Values, ComplexMatricesRoundTrip) {
  Rng rng(1);
  const GroupElement g = haar_sample(Group::SU2, rng);
  const GroupElement h = group_element_from_json(Group::SU2, json::parse(group_element_to_json(g).dump()));
  EXPECT_LE(g.distance(h), 1e-15);
  EXPECT_EQ(cplx_from_json(cplx_to_json(cplx(1.5, -2))), cplx(1.5, -2));
  EXPECT_THROW(vec_from_json(json::array({1.0, 2.0}), 3), ValidationError);
}

TEST(Scenes, TemplatesRoundTrip) {
  for (const char* kind : {"crossing", "nice-surface", "winding", "diffeo"}) {
    const json j = scene_template(kind);
    EXPECT_EQ(j.at("schema"), kSchema);
    const Scene s = scene_from_json(j);
    EXPECT_EQ(scene_to_json(s), j) << kind;
  }
  EXPECT_THROW(scene_template("nothing"), ValidationError);
}

TEST(Scenes, SurfaceGeometrySurvives) {
  const Scene s = scene_from_json(scene_template("nice-surface"));
  ASSERT_EQ(s.surfaces.size(), 2u);
  const Scene t = scene_from_json(json::parse(scene_to_json(s).dump()));
  const PolyPath& gamma = t.path("gamma");
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(t.surfaces[i].sigma_out(gamma.sub((i + 1) / 3.0, 1.0)), s.surfaces[i].sigma_out(gamma.sub((i + 1) / 3.0, 1.0)));
    EXPECT_EQ(std::abs(t.surfaces[i].sigma_out(gamma.sub((i + 1) / 3.0, 1.0))), 1);
    EXPECT_TRUE(t.surfaces[i].contains(v3((i + 1) / 3.0, 0.05, 0.1)));
  }
  EXPECT_THROW(t.surface("nope"), DomainError);
}

TEST(Scenes, NiceSurfaceTemplateIsNice) {
  const Scene s = scene_from_json(scene_template("nice-surface"));
  const NiceConfig c = suites::nice_config_from_scene(s);
  const std::vector<int> signs = nice_signs(c);
  EXPECT_EQ(signs.size(), 2u);
}

TEST(Scenes, MalformedInputsAreRejected) {
  json j = scene_template("crossing");
  j["schema"] = 2;
  EXPECT_THROW(scene_from_json(j), ValidationError);
  j = scene_template("crossing");
  j["dimension"] = 1;
  EXPECT_THROW(scene_from_json(j), ValidationError);
  j = scene_template("crossing");
  j["surfaces"][0]["rule"] = "sideways";
  EXPECT_THROW(scene_from_json(j), ValidationError);
  j = scene_template("crossing");
  j["surfaces"][0]["simplices"] = json::array();
  EXPECT_THROW(scene_from_json(j), ValidationError);
  EXPECT_THROW(scene_from_json(json::array()), ValidationError);
}

TEST(Scenes, FileReading) {
  EXPECT_THROW(read_json_file("/nonexistent/dir/scene.json"), DomainError);
  const std::string bad = temp_file("qgeom_bad.json", "{\"schema\": 1,");
  EXPECT_THROW(read_json_file(bad), ValidationError);
  const std::string good = temp_file("qgeom_good.json", scene_template("crossing").dump());
  EXPECT_EQ(scene_from_json(read_json_file(good)).paths.size(), 1u);
  std::remove(bad.c_str());
  std::remove(good.c_str());
}

TEST(Functions, CylFunRoundTrip) {
  Rng rng(2);
  for (Group grp : {Group::SU2, Group::U1}) {
    const GraphPtr g = fx::random_graph(rng, 3);
    CylFun f = fx::random_cylfun(g, grp, rng, 3);
    std::vector<EdgeSum> sums;
    for (int e = 0; e < g->size(); ++e) {
      sums.push_back({{0.5, fx::random_factor(grp, rng, 2)}, {cplx(0, 1), fx::random_factor(grp, rng, 2)}});
    }
    f.add_product(1.0, sums);
    const CylFun h = cylfun_from_json(json::parse(cylfun_to_json(f).dump()), g);
    EXPECT_LE(distance(f, h), 1e-14);
  }
  json bad = cylfun_to_json(CylFun::state(fx::random_graph(rng, 1), Group::SU2, {Factor{Irrep::su2_twice_spin(1), 0, 1}}));
  EXPECT_THROW(cylfun_from_json(bad, make_graph(Graph({PolyPath({v2(0, 0), v2(1, 0)})}, {"other"}))), DomainError);
}

TEST(Functions, WeylRoundTripActsTheSame) {
  Rng rng(3);
  const Scene s = crossing_scene();
  const OrientedSurface& S = s.surface("S");
  FluxLabels d = fx::random_labels(S, Group::SU2, rng);
  d.at_points.emplace_back(v2(0, 0), haar_sample(Group::SU2, rng));
  const WeylDescriptor W = make_weyl(S, d);
  const WeylDescriptor V = weyl_from_json(json::parse(weyl_to_json(W, "S").dump()), s);
  const CylFun f = fx::random_cylfun(s.graph(), Group::SU2, rng, 3, 2);
  EXPECT_LE(distance(apply_weyl(W, f), apply_weyl(V, f)), 1e-14);
  json j = weyl_to_json(W, "S");
  j["rule"] = "sideways";
  EXPECT_THROW(weyl_from_json(j, s), ValidationError);
  j = weyl_to_json(W, "S");
  j["labels"]["x"] = j["labels"]["0"];
  EXPECT_THROW(weyl_from_json(j, s), ValidationError);
}

TEST(Maps, FamiliesBuildFromJson) {
  Rng rng(4);
  const json maps = scene_template("diffeo").at("maps");
  for (const auto& j : maps) {
    const StratMap m = stratmap_from_json(j);
    EXPECT_EQ(stratmap_to_json(m).at("family"), j.at("family"));
    EXPECT_TRUE(verify_stratified(m, 500, rng).pass());
  }
  const StratMap c = stratmap_from_json({{"family", "composite"}, {"maps", maps}});
  EXPECT_EQ(stratmap_to_json(c).at("chain").size(), maps.size());
  const StratMap w = stratmap_from_json(scene_template("winding").at("winding"));
  EXPECT_EQ(w.family, "winding");
  EXPECT_THROW(stratmap_from_json({{"family", "teleport"}}), ValidationError);
  EXPECT_THROW(body_from_json({{"cube", 1}}), ValidationError);
}

TEST(Reports, DeterministicApartFromWallclock) {
  const json p{{"instances", 10}};
  const SuiteReport a = run_suite("weyl-unitarity", p, 9), b = run_suite("weyl-unitarity", p, 9);
  EXPECT_EQ(a.to_json(false).dump(), b.to_json(false).dump());
  EXPECT_TRUE(a.pass());
  EXPECT_EQ(a.to_json().at("params").at("instances"), 10);
  EXPECT_THROW(run_suite("no-such-suite", json::object(), 1), ValidationError);
  EXPECT_THROW(run_suite("haar", json::array(), 1), ValidationError);
}
