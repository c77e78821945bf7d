// Runs the nine acceptance checks and prints one line per check:
//   criterion N: PASS|FAIL: detail
// The exit status is 0 whenever every check ran; failures are reported, not
// raised. Optional argument: a directory for cached word balls.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "nagata/catalog.hpp"
#include "nagata/cover.hpp"
#include "nagata/error.hpp"
#include "nagata/experiment.hpp"
#include "nagata/lie_algebra.hpp"
#include "nagata/metric.hpp"
#include "oracles.hpp"

using namespace nagata;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

RunOptions run_options;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

BallPtr ball(const std::string& model, int radius) {
  auto m = model_by_name(model);
  return run_options.cache_dir.empty() ? bfs_ball(m, radius) : cached_ball(run_options.cache_dir, m, radius);
}

Outcome verdict_outcome(const json& spec, const std::string& entry) {
  const auto r = run_experiment(spec, run_options);
  const auto v = compare_to_prediction(r, catalog_lookup(entry));
  return {v.kind == VerdictKind::pass, std::string(to_string(v.kind)) + " (" + v.detail + ")"};
}

Outcome criterion1() {
  return verdict_outcome({{"experiment", "distortion"}, {"model", "heisenberg"}, {"radius", 40}, {"subgroup", "center"}},
                         "heisenberg");
}

Outcome criterion2() {
  return verdict_outcome({{"experiment", "distortion"}, {"model", "sol"}, {"radius", 14}, {"subgroup", "fiber"}}, "sol");
}

Outcome criterion3() {
  const auto b = ball("heisenberg", 40);
  const auto spec = heisenberg_karidi();
  const auto k30 = karidi_comparison(*b, spec, 30).kappa;
  const auto k40 = karidi_comparison(*b, spec, 40).kappa;
  const double change = std::abs(k40 - k30) / k30;
  return {change < 0.15, "kappa R=30 " + num(k30) + ", R=40 " + num(k40) + ", change " + num(change)};
}

Outcome criterion4() {
  Outcome o{true, ""};
  for (const char* dir : {"e4", "e3"}) {
    const auto r = run_experiment({{"experiment", "filiform-diameter"}, {"direction", dir}, {"c", 0.5},
                                   {"x1", {1, 2, 3}}, {"h", 0.1}, {"refine", true}},
                                  run_options);
    o.detail += std::string(o.detail.empty() ? "" : "; ") + dir + " ratios";
    for (const auto& row : r.outputs["rows"]) {
      const double ratio = row["ratio"], change = row["refinement_change"];
      o.pass = o.pass && ratio >= 0.5 && ratio <= 2 && change < 0.1;
      o.detail += " " + num(ratio) + "(h/2 " + num(100 * change) + "%)";
    }
  }
  return o;
}

Outcome certificate_line(const std::string& label, const json& spec, std::size_t families) {
  const auto r = run_experiment(spec, run_options);
  const auto& cert = r.outputs["certificate"];
  std::string bounds;
  for (const auto& e : cert["entries"])
    bounds += (bounds.empty() ? "" : "/") + num(e["verified_bound"].get<double>()) + "<=" +
              num(e["claimed_bound"].get<double>());
  const double res = cert["linear_fit"].is_null() ? NAN : cert["linear_fit"]["max_relative_residual"].get<double>();
  const bool pass = cert["pass"].get<bool>() && r.outputs["families"] == families;
  return {pass, label + " " + std::string(pass ? "passes" : "fails") + " [" + bounds + ", residual " + num(res) + "]"};
}

Outcome criterion5() {
  const auto z2 = certificate_line("Z^2 brick R=60",
                                   {{"experiment", "cover"}, {"model", "Z^2"}, {"radius", 60}, {"construction", "brick"},
                                    {"scales", {2, 4, 8, 16}}},
                                   3);
  const auto heis = certificate_line("heis-brick R=30",
                                     {{"experiment", "cover"}, {"model", "heisenberg"}, {"radius", 30},
                                      {"construction", "heis-brick"}, {"scales", {2, 4, 8, 16}}},
                                     4);
  return {z2.pass && heis.pass, z2.detail + "; " + heis.detail};
}

Outcome criterion6() {
  const auto r = run_experiment({{"experiment", "cover"}, {"model", "heisenberg"}, {"radius", 30},
                                 {"construction", "exact-seq"}, {"scales", {2, 4, 8}}},
                                run_options);
  bool pass = true;
  std::string detail;
  const auto& entries = r.outputs["certificate"]["entries"];
  const auto& parts = r.outputs["exact_sequence"];
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    const auto& e = entries[i];
    pass = pass && p["formula_holds"].get<bool>() && e["pass"].get<bool>();
    detail += std::string(detail.empty() ? "" : "; ") + "s=" + num(p["scale"].get<double>()) + " claimed " +
              num(p["claimed_bound"].get<double>()) + " = D_K " + num(p["D_K"].get<double>()) + " + 2*" +
              num(p["B_H"].get<double>()) + ", verified " + num(e["verified_bound"].get<double>());
  }
  return {pass, detail};
}

Outcome criterion7() {
  const json lamp{{"experiment", "control-curve"}, {"model", "lamplighter"}, {"radius", 12}, {"families", 2},
                  {"scales", {2, 4, 8, 16}}};
  const json z2{{"experiment", "control-curve"}, {"model", "Z^2"}, {"radius", 12}, {"families", 2},
                {"scales", {2, 4, 8, 16}}};
  const auto rl = run_experiment(lamp, run_options);
  const auto rz = run_experiment(z2, run_options);
  const auto vl = compare_to_prediction(rl, catalog_lookup("lamplighter"));
  const auto vz = compare_to_prediction(rz, catalog_lookup("Z^2"));
  const auto& pf = rl.outputs["power_fit"];
  const auto& lf = rz.outputs["linear_fit"];
  const bool lamp_ok = !pf.contains("error") && pf["b"].get<double>() > 1.3;
  const bool z2_ok = !lf.contains("error") && lf["max_relative_residual"].get<double>() < 0.25;
  const bool evidence = vl.kind == VerdictKind::evidence_only && vz.kind == VerdictKind::evidence_only;
  return {lamp_ok && z2_ok && evidence, "lamplighter " + std::string(to_string(vl.kind)) + " (" + vl.detail +
                                            "); Z^2 " + to_string(vz.kind) + " (" + vz.detail + ")"};
}

Outcome criterion8() {
  auto load = [](const std::string& f) { return load_lie_algebra(data_dir() / "lie" / (f + ".lie")); };
  std::vector<std::string> bad;
  if (lower_central_series(load("filiform4")).dims != std::vector<int>{4, 2, 1, 0}) bad.push_back("filiform4 series");
  if (lower_central_series(load("heis3")).dims != std::vector<int>{3, 1, 0}) bad.push_back("heis3 series");
  const auto sl2 = load("sl2");
  const auto K = oracle::killing_by_trace(sl2);
  if (!(K == killing_form(sl2)) || oracle::det_cofactor(K) != -128 || determinant(killing_form(sl2)) != -128)
    bad.push_back("sl2 Killing determinant");
  int files = 0;
  for (const char* f : {"abelian2", "heis3", "filiform4", "sl2", "so3"}) {
    try {
      load(f);
      ++files;
    } catch (const ValidationError& e) {
      bad.push_back(std::string("Jacobi ") + f + ": " + e.what());
    }
  }
  try {
    LieAlgebra("bad", 3, std::vector<StructureConstant>{{0, 1, 2, 1}, {0, 2, 0, 1}});
    bad.push_back("Jacobi violation accepted");
  } catch (const ValidationError&) {
  }
  int matched = 0;
  for (const auto& e : builtin_catalog()) {
    if (e.lie_file.empty() || !e.asdim_an) continue;
    const auto r = run_experiment({{"experiment", "lie-classify"}, {"file", lie_path(e).string()}}, run_options);
    if (compare_to_prediction(r, e).kind == VerdictKind::pass)
      ++matched;
    else
      bad.push_back("classify " + e.name);
  }
  std::string detail = "series, Killing det -128, " + std::to_string(files) + " files valid, " +
                       std::to_string(matched) + " catalog entries matched";
  for (const auto& b : bad) detail += "; bad: " + b;
  return {bad.empty(), detail};
}

Outcome criterion9() {
  std::vector<std::string> bad;
  int models = 0;
  for (const char* name : {"Z^1", "Z^2", "Z^3", "heisenberg", "sol", "lamplighter"}) {
    const auto m = model_by_name(name);
    for (int R = 0; R <= 4; ++R) {
      const auto b = bfs_ball(m, R);
      std::map<Element, int> got;
      for (WordBall::Index i = 0; i < b->size(); ++i) {
        const auto g = b->element(i);
        got[Element(g.begin(), g.end())] = b->length(i);
      }
      if (got != oracle::word_enumeration(*m, R)) bad.push_back(std::string("ball ") + name + " R=" + std::to_string(R));
    }
    ++models;
  }

  const auto hb = bfs_ball(heisenberg_model(), 6);
  const auto hd = oracle::all_pairs(*hb);
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> pick(0, hb->size() - 1);
  int agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> subset;
    for (int k = 0; k < 100; ++k) subset.push_back(pick(rng));
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    const double s = 1 + 0.5 * (trial % 7);
    const std::vector<WordBall::Index> idx(subset.begin(), subset.end());
    std::vector<std::vector<std::size_t>> fast;
    for (const auto& c : s_scale_components(*hb, idx, s)) fast.emplace_back(c.begin(), c.end());
    std::sort(fast.begin(), fast.end());
    const auto slow =
        oracle::transitive_closure(subset, [&](std::size_t x, std::size_t y) { return double(hd[x][y]); }, s);
    if (fast == slow) ++agree;
  }
  if (agree != 100) bad.push_back("components " + std::to_string(agree) + "/100");

  int carriers = 0;
  auto compare = [&](const std::string& label, const Cover& c, const BallPtr& b,
                     const std::vector<std::vector<std::uint32_t>>& d) {
    const auto e = verify_control(c, b);
    const auto r = oracle::brute_verify(c, *b, c.scale, d);
    const bool ok = e.boundary_judged
                        ? e.verified_bound == std::max(r.interior, r.boundary) && e.boundary_bound == r.boundary
                        : e.verified_bound == r.interior && e.boundary_bound <= r.boundary;
    if (!ok) bad.push_back("verify " + label);
    ++carriers;
  };
  const auto zb = bfs_ball(abelian_model(2), 20);
  const auto zd = oracle::all_pairs(*zb);
  for (double s : {1.0, 2.0, 4.0}) compare("Z^2 brick s=" + num(s), brick_cover(zb, s), zb, zd);
  for (int rho : {1, 2, 3}) compare("heisenberg greedy rho=" + std::to_string(rho), greedy_cover(hb, rho, 2), hb, hd);
  compare("heisenberg bricks", heisenberg_brick_cover(hb, 1), hb, hd);
  const auto lb = bfs_ball(lamplighter_model(), 5);
  if (lb->size() <= 2000) compare("lamplighter greedy", greedy_cover(lb, 2, 2), lb, oracle::all_pairs(*lb));

  std::string detail = std::to_string(models) + " models R<=4, components " + std::to_string(agree) +
                       "/100, verify_control on " + std::to_string(carriers) + " carriers (max " +
                       std::to_string(std::max({zb->size(), hb->size(), lb->size()})) + " points)";
  for (const auto& b : bad) detail += "; bad: " + b;
  return {bad.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) run_options.cache_dir = argv[1];
  const std::vector<std::function<Outcome()>> checks{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                     criterion6, criterion7, criterion8, criterion9};
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = checks[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << ": " << o.detail << " ["
              << num(secs) << " s]" << std::endl;
  }
  return 0;
}
