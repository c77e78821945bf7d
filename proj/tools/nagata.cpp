// nagata: command line front end for the core library.
//
// Exit codes: 0 on success, PASS or EVIDENCE-ONLY; 1 on FAIL; 2 on any error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nagata/catalog.hpp"
#include "nagata/cover.hpp"
#include "nagata/error.hpp"
#include "nagata/experiment.hpp"
#include "nagata/group_model.hpp"
#include "nagata/lie_algebra.hpp"
#include "nagata/word_ball.hpp"

namespace {

using json = nlohmann::json;
using namespace nagata;

std::filesystem::path cache_dir() {
  const char* env = std::getenv("NAGATA_CACHE");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path();
}

BallPtr ball_for(const std::string& model, int radius, const std::string& cache) {
  const auto dir = cache.empty() ? cache_dir() : std::filesystem::path(cache);
  auto m = model_by_name(model);
  return dir.empty() ? bfs_ball(m, radius) : cached_ball(dir, m, radius);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void print_json(const json& j) { std::cout << round_floats(j).dump(2) << '\n'; }

int verdict_exit(VerdictKind k) { return k == VerdictKind::fail ? 1 : 0; }

// Runs a spec and prints it as JSON, one table as CSV, or a short summary.
int run_and_print(const json& spec, bool as_json, const std::string& csv_table, const std::string& compare,
                  const std::string& results) {
  RunOptions opt;
  opt.cache_dir = cache_dir();
  if (!results.empty()) opt.results_root = results;
  const auto rec = run_experiment(spec, opt);
  int code = 0;
  json verdict;
  if (!compare.empty()) {
    const auto v = compare_to_prediction(rec, catalog_lookup(compare));
    verdict = to_json(v);
    code = verdict_exit(v.kind);
  }
  if (!csv_table.empty()) {
    auto it = rec.tables.find(csv_table);
    if (it == rec.tables.end()) throw ValidationError(rec.kind + " produces no " + csv_table);
    std::cout << it->second;
  } else if (as_json) {
    json j = {{"id", rec.id}, {"inputs", rec.inputs}, {"outputs", rec.outputs}};
    if (!verdict.is_null()) j["verdict"] = verdict;
    print_json(j);
  } else {
    std::cout << rec.id << '\n' << round_floats(rec.outputs).dump(2) << '\n';
    if (!verdict.is_null()) std::cout << verdict["verdict"].get<std::string>() << ": " << verdict["detail"].get<std::string>() << '\n';
  }
  return code;
}

std::vector<double> parse_scales(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad scale '" + item + "'", {"scales"});
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Assouad-Nagata dimension experiments on groups and Lie algebras"};
  app.require_subcommand(1);
  int code = 0;

  // lie classify
  auto* lie = app.add_subcommand("lie", "Lie algebra tools");
  lie->require_subcommand(1);
  auto* classify_cmd = lie->add_subcommand("classify", "Series, Killing form and predicted dimension");
  std::string lie_file;
  bool lie_json = false;
  classify_cmd->add_option("file", lie_file, "Structure constant file")->required();
  classify_cmd->add_flag("--json", lie_json, "Print JSON");
  classify_cmd->callback([&] {
    const auto report = classify(load_lie_algebra(lie_file));
    const json j = to_json(report);
    if (lie_json) {
      print_json(j);
      return;
    }
    for (const auto& [k, v] : j.items()) std::cout << k << ": " << v.dump() << '\n';
  });

  // ball
  auto* ball_cmd = app.add_subcommand("ball", "Enumerate a word ball");
  std::string ball_model, ball_cache;
  int ball_radius = 0;
  bool ball_csv = false;
  ball_cmd->add_option("model", ball_model, "Z^n, heisenberg, sol or lamplighter")->required();
  ball_cmd->add_option("--radius,-r", ball_radius, "Ball radius")->required()->check(CLI::NonNegativeNumber);
  ball_cmd->add_option("--cache", ball_cache, "Cache directory (default $NAGATA_CACHE)");
  ball_cmd->add_flag("--csv", ball_csv, "Print every element as CSV");
  ball_cmd->callback([&] {
    const auto b = ball_for(ball_model, ball_radius, ball_cache);
    if (ball_csv) {
      write_ball_csv(*b, std::cout);
      return;
    }
    json spheres = json::array();
    for (int r = 0; r <= b->radius(); ++r) spheres.push_back(b->prefix(r) - (r ? b->prefix(r - 1) : 0));
    print_json({{"model", b->model().name()}, {"radius", b->radius()}, {"size", b->size()}, {"spheres", spheres}});
  });

  // distortion
  auto* dist_cmd = app.add_subcommand("distortion", "Subgroup distortion and fits");
  std::string dist_model, dist_sub = "center", dist_compare, dist_results;
  int dist_radius = 0;
  bool dist_json = false, dist_csv = false;
  dist_cmd->add_option("model", dist_model)->required();
  dist_cmd->add_option("--subgroup", dist_sub, "center, fiber or whole")->capture_default_str();
  dist_cmd->add_option("--radius,-r", dist_radius)->required();
  dist_cmd->add_option("--compare", dist_compare, "Catalog entry to compare against");
  dist_cmd->add_option("--results", dist_results, "Persist the record under this directory");
  dist_cmd->add_flag("--json", dist_json);
  dist_cmd->add_flag("--csv", dist_csv, "Print the (intrinsic, ambient, boundary_flag) table");
  dist_cmd->callback([&] {
    code = run_and_print({{"experiment", "distortion"}, {"model", dist_model}, {"subgroup", dist_sub},
                          {"radius", dist_radius}},
                         dist_json, dist_csv ? "distortion.csv" : "", dist_compare, dist_results);
  });

  // karidi
  auto* kar_cmd = app.add_subcommand("karidi", "Compare the layered quasi-norm with word length");
  std::string kar_model, kar_results;
  int kar_radius = 0, kar_max = -1;
  bool kar_json = false;
  kar_cmd->add_option("model", kar_model)->required();
  kar_cmd->add_option("--radius,-r", kar_radius)->required();
  kar_cmd->add_option("--max-length", kar_max, "Only elements up to this length");
  kar_cmd->add_option("--results", kar_results);
  kar_cmd->add_flag("--json", kar_json);
  kar_cmd->callback([&] {
    code = run_and_print({{"experiment", "karidi"}, {"model", kar_model}, {"radius", kar_radius},
                          {"max_length", kar_max}},
                         kar_json, "", "", kar_results);
  });

  // cover build / verify
  auto* cover_cmd = app.add_subcommand("cover", "Build and verify covers");
  cover_cmd->require_subcommand(1);
  auto* build_cmd = cover_cmd->add_subcommand("build", "Build a cover and write it as JSON");
  std::string b_construction, b_model, b_out, b_cache;
  int b_radius = 0;
  double b_scale = 1;
  build_cmd->add_option("--construction", b_construction)
      ->required()
      ->check(CLI::IsMember({"brick", "heis-brick", "exact-seq", "interval"}));
  build_cmd->add_option("--model", b_model)->required();
  build_cmd->add_option("--radius,-r", b_radius)->required();
  build_cmd->add_option("--scale,-s", b_scale)->required();
  build_cmd->add_option("--output,-o", b_out, "Output file (default stdout)");
  build_cmd->add_option("--cache", b_cache);
  build_cmd->callback([&] {
    const auto ball = ball_for(b_model, b_radius, b_cache);
    Cover c;
    if (b_construction == "brick") {
      c = brick_cover(ball, b_scale);
    } else if (b_construction == "heis-brick") {
      c = heisenberg_brick_cover(ball, b_scale);
    } else if (b_construction == "interval") {
      c = interval_cover(ball, b_scale);
    } else if (b_model == "heisenberg") {
      const auto h = ball_for("Z^2", b_radius, b_cache);
      c = exact_sequence_cover(ball, h, brick_cover(h, b_scale), heisenberg_center_fibers());
    } else if (b_model == "Z^2") {
      const auto h = ball_for("Z^1", b_radius, b_cache);
      c = exact_sequence_cover(ball, h, interval_cover(h, b_scale), abelian_first_factor_fibers());
    } else {
      throw ValidationError("exact-seq is available for heisenberg and Z^2", {"model"});
    }
    const auto j = cover_to_json(c, *ball).dump();
    if (b_out.empty()) {
      std::cout << j << '\n';
    } else {
      std::ofstream out(b_out);
      out << j << '\n';
      if (!out) throw Error("cannot write " + b_out);
    }
  });

  auto* verify_cmd = cover_cmd->add_subcommand("verify", "Exhaustively check a cover file");
  std::string v_file, v_cache;
  double v_scale = -1;
  bool v_json = false;
  verify_cmd->add_option("cover", v_file)->required();
  verify_cmd->add_option("--scale,-s", v_scale, "Scale to check (default: the cover's own)");
  verify_cmd->add_option("--cache", v_cache);
  verify_cmd->add_flag("--json", v_json);
  verify_cmd->callback([&] {
    const auto j = read_json(v_file);
    if (!j.contains("model") || !j.contains("radius"))
      throw ValidationError("cover file is missing fields", {"model", "radius"});
    const auto ball = ball_for(j["model"], j["radius"], v_cache);
    const auto c = cover_from_json(j, *ball);
    const auto e = v_scale > 0 ? verify_control(c, ball, v_scale) : verify_control(c, ball);
    if (v_json)
      print_json(to_json(e));
    else
      std::cout << (e.pass ? "PASS" : "FAIL") << " scale " << e.scale << " verified " << e.verified_bound
                << " claimed " << e.claimed_bound << " boundary " << e.boundary_bound << '\n';
    code = e.pass ? 0 : 1;
  });

  // control-curve
  auto* cc_cmd = app.add_subcommand("control-curve", "Greedy empirical control curve (heuristic)");
  std::string cc_model, cc_scales = "2,4,8,16", cc_compare, cc_results;
  int cc_radius = 0, cc_families = 2, cc_cap = -1;
  bool cc_json = false, cc_csv = false;
  cc_cmd->add_option("model", cc_model)->required();
  cc_cmd->add_option("--radius,-r", cc_radius)->required();
  cc_cmd->add_option("--families,-n", cc_families, "Target dimension n (n+1 colors)")->capture_default_str();
  cc_cmd->add_option("--scales", cc_scales)->capture_default_str();
  cc_cmd->add_option("--rho-cap", cc_cap);
  cc_cmd->add_option("--compare", cc_compare);
  cc_cmd->add_option("--results", cc_results);
  cc_cmd->add_flag("--json", cc_json);
  cc_cmd->add_flag("--csv", cc_csv);
  cc_cmd->callback([&] {
    code = run_and_print({{"experiment", "control-curve"}, {"model", cc_model}, {"radius", cc_radius},
                          {"families", cc_families}, {"scales", parse_scales(cc_scales)}, {"rho_cap", cc_cap}},
                         cc_json, cc_csv ? "curve.csv" : "", cc_compare, cc_results);
  });

  // run
  auto* run_cmd = app.add_subcommand("run", "Run an experiment spec (JSON file)");
  std::string run_spec, run_compare, run_results, run_csv;
  bool run_json = false;
  run_cmd->add_option("spec", run_spec)->required();
  run_cmd->add_option("--compare", run_compare, "Catalog entry for a verdict");
  run_cmd->add_option("--results", run_results, "Results root for the content-addressed record");
  run_cmd->add_option("--csv", run_csv, "Print this table instead");
  run_cmd->add_flag("--json", run_json);
  run_cmd->callback([&] { code = run_and_print(read_json(run_spec), run_json, run_csv, run_compare, run_results); });

  // catalog
  auto* cat_cmd = app.add_subcommand("catalog", "Show catalog entries");
  std::string cat_name;
  cat_cmd->add_option("name", cat_name);
  cat_cmd->callback([&] {
    if (!cat_name.empty()) {
      print_json(to_json(catalog_lookup(cat_name)));
      return;
    }
    json all = json::array();
    for (const auto& e : builtin_catalog()) all.push_back(to_json(e));
    print_json(all);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what();
    if (!e.fields().empty()) {
      std::cerr << " [fields:";
      for (const auto& f : e.fields()) std::cerr << ' ' << f;
      std::cerr << ']';
    }
    std::cerr << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << " (completed radius " << e.radius_reached() << ")\n";
    return 2;
  } catch (const WitnessError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return code;
}
