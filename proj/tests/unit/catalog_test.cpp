#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "nagata/catalog.hpp"
#include "nagata/error.hpp"
#include "nagata/experiment.hpp"
#include "nagata/lie_algebra.hpp"

using namespace nagata;
using nlohmann::json;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("nagata-test-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("catalog lookups") {
  CHECK(catalog_lookup("heisenberg").asdim_an->value == 3);
  CHECK(catalog_lookup("filiform4").asdim_an->value == 4);
  CHECK(catalog_lookup("lamplighter-Z2-Z2").asdim_an->is_infinite());
  CHECK(catalog_lookup("lamplighter-Z2-Z2").asdim->value == 2);
  CHECK(catalog_lookup("lamplighter").name == "lamplighter-Z2-Z2");
  CHECK_THROWS_AS(catalog_lookup("free"), ValidationError);
  CHECK(to_json(*catalog_lookup("lamplighter").asdim_an)["value"] == "inf");
}

TEST_CASE("every prediction carries a citation") {
  for (const auto& e : builtin_catalog()) {
    CAPTURE(e.name);
    for (const auto* p : {&e.asdim, &e.asdim_an, &e.dim_an, &e.hirsch})
      if (*p) CHECK_FALSE((*p)->citation.empty());
    if (e.distortion) CHECK_FALSE(e.distortion->citation.empty());
    if (!e.lie_file.empty()) CHECK(std::filesystem::exists(lie_path(e)));
  }
}

TEST_CASE("classification agrees with the catalog") {
  for (const auto& e : builtin_catalog()) {
    if (e.lie_file.empty() || !e.asdim_an) continue;
    CAPTURE(e.name);
    const auto r = classify(load_lie_algebra(lie_path(e)));
    if (r.predicted_asdim_an)
      CHECK(*r.predicted_asdim_an == e.asdim_an->value);
    else
      CHECK(r.is_semisimple_by_killing);
    if (r.hirsch_length && e.hirsch) CHECK(*r.hirsch_length == e.hirsch->value);
  }
}

TEST_CASE("spec validation names every bad field") {
  try {
    canonical_spec(json{{"experiment", "cover"}, {"model", "heisenberg"}, {"scales", {2, -1}}});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const auto& f = e.fields();
    CHECK(std::find(f.begin(), f.end(), "radius") != f.end());
    CHECK(std::find(f.begin(), f.end(), "construction") != f.end());
    CHECK(std::find(f.begin(), f.end(), "scales") != f.end());
  }
  CHECK_THROWS_AS(canonical_spec(json{{"experiment", "teleport"}}), ValidationError);
  CHECK_THROWS_AS(canonical_spec(json::array()), ValidationError);
  CHECK_THROWS_AS(canonical_spec(json{{"experiment", "distortion"}, {"model", "Z^2"}, {"radius", 5}, {"subgroup", "center"}}),
                  ValidationError);
  const auto c = canonical_spec(json{{"experiment", "filiform-diameter"}});
  CHECK(c["direction"] == "e4");
  CHECK(c["x1"] == json({1.0, 2.0, 3.0}));
}

TEST_CASE("runs are deterministic and persist") {
  const json spec{{"experiment", "cover"}, {"model", "Z^2"}, {"radius", 20}, {"construction", "brick"}, {"scales", {2, 4, 8}}};
  const auto a = run_experiment(spec);
  const auto b = run_experiment(spec);
  CHECK(a.id == b.id);
  CHECK(a.outputs == b.outputs);
  CHECK(a.tables == b.tables);
  CHECK(a.outputs["certificate"]["pass"] == true);

  const auto dir = temp_dir("records");
  RunOptions o;
  o.results_root = dir;
  const auto saved = run_experiment(spec, o);
  const auto loaded = load_record(dir / saved.id);
  CHECK(loaded == saved);
  CHECK(std::filesystem::exists(dir / saved.id / "certificate.csv"));
  // Same spec again agrees with what is on disk.
  CHECK_NOTHROW(run_experiment(spec, o));
  auto tampered = saved;
  tampered.outputs["families"] = 99;
  CHECK_THROWS_AS(save_record(tampered, dir / saved.id), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("float rounding") {
  const auto j = round_floats(json{{"x", 1.23456789}, {"y", {2.0000001, 3}}, {"z", std::nan("")}});
  CHECK(j["x"].get<double>() == 1.23457);
  CHECK(j["y"][0].get<double>() == 2);
  CHECK(j["z"].is_null());
}

TEST_CASE("verdicts") {
  const json cover{{"experiment", "cover"}, {"model", "Z^2"}, {"radius", 20}, {"construction", "brick"}, {"scales", {2, 4, 8}}};
  const auto r = run_experiment(cover);
  CHECK(compare_to_prediction(r, catalog_lookup("Z^2")).kind == VerdictKind::pass);
  // Three families against a prediction of 4 is not a refutation.
  CHECK(compare_to_prediction(r, catalog_lookup("Z^3")).kind == VerdictKind::evidence_only);
  CHECK(compare_to_prediction(r, catalog_lookup("lamplighter")).kind == VerdictKind::evidence_only);

  const auto lie = run_experiment(json{{"experiment", "lie-classify"}, {"file", "filiform4"}});
  CHECK(compare_to_prediction(lie, catalog_lookup("filiform4")).kind == VerdictKind::pass);
  CHECK(compare_to_prediction(lie, catalog_lookup("heisenberg")).kind == VerdictKind::fail);
  const auto sl2 = run_experiment(json{{"experiment", "lie-classify"}, {"file", "sl2"}});
  CHECK(compare_to_prediction(sl2, catalog_lookup("sl2")).kind == VerdictKind::pass);

  const auto d = run_experiment(json{{"experiment", "distortion"}, {"model", "Z^2"}, {"radius", 10}, {"subgroup", "whole"}});
  CHECK_THROWS_AS(compare_to_prediction(d, catalog_lookup("heisenberg")), ValidationError);
  const auto k = run_experiment(json{{"experiment", "karidi"}, {"model", "Z^2"}, {"radius", 6}});
  CHECK_THROWS_AS(compare_to_prediction(k, catalog_lookup("Z^2")), ValidationError);
}
