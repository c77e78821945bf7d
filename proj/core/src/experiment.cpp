#include "nagata/experiment.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "nagata/cover.hpp"
#include "nagata/error.hpp"
#include "nagata/group_model.hpp"
#include "nagata/word_ball.hpp"

#ifndef NAGATA_VERSION
#define NAGATA_VERSION "unknown"
#endif

namespace nagata {

namespace {

using json = nlohmann::json;

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects field problems so one error can name all of them.
class SpecReader {
 public:
  explicit SpecReader(const json& spec) : spec_(spec) {}

  template <class T>
  T required(const std::string& key) {
    if (!spec_.contains(key)) {
      problems_.push_back(key);
      return T{};
    }
    return get<T>(key);
  }

  template <class T>
  T optional(const std::string& key, T fallback) {
    return spec_.contains(key) ? get<T>(key) : fallback;
  }

  void invalid(const std::string& key) { problems_.push_back(key); }
  void check(bool ok, const std::string& key) {
    if (!ok) invalid(key);
  }

  void finish(const std::string& kind) const {
    if (problems_.empty()) return;
    std::string msg = kind + " spec has missing or invalid fields:";
    for (const auto& p : problems_) msg += " " + p;
    throw ValidationError(msg, problems_);
  }

 private:
  template <class T>
  T get(const std::string& key) {
    try {
      return spec_.at(key).get<T>();
    } catch (const json::exception&) {
      problems_.push_back(key);
      return T{};
    }
  }

  const json& spec_;
  std::vector<std::string> problems_;
};

const std::set<std::string> kKinds = {"distortion",    "karidi",           "cover",
                                      "control-curve", "filiform-diameter", "lie-classify"};

bool known_model(const std::string& name) {
  try {
    model_by_name(name);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

bool positive_list(const std::vector<double>& v) {
  return !v.empty() && std::all_of(v.begin(), v.end(), [](double x) { return x > 0 && std::isfinite(x); });
}

BallPtr load_ball(const std::string& model, int radius, const RunOptions& o) {
  auto m = model_by_name(model);
  return o.cache_dir.empty() ? bfs_ball(m, radius) : cached_ball(o.cache_dir, m, radius);
}

json fit_or_error(const std::vector<std::pair<double, double>>& pts, FitModel model, std::size_t min_samples) {
  try {
    return to_json(fit(pts, model, min_samples));
  } catch (const ValidationError& e) {
    return {{"model", to_string(model)}, {"error", e.what()}};
  }
}

// ---------------------------------------------------------------------------

void run_distortion(const json& in, ExperimentRecord& r, const RunOptions& o) {
  const auto ball = load_ball(in["model"], in["radius"], o);
  const std::string sub = in["subgroup"];
  SubgroupSpec H = sub == "center" ? heisenberg_center() : sub == "fiber" ? sol_fiber() : whole_group(ball->model_ptr());
  const auto sample = subgroup_distortion(*ball, H);
  const auto env = distortion_envelope(sample);
  std::size_t boundary = 0;
  for (const auto& p : sample.pairs) boundary += p.boundary ? 1 : 0;
  json fits = json::object();
  for (auto m : {FitModel::linear, FitModel::log, FitModel::power}) fits[to_string(m)] = fit_or_error(env, m, 8);
  r.outputs = {{"subgroup", sample.subgroup}, {"group", sample.group},   {"radius", sample.radius},
               {"pairs", sample.pairs.size()}, {"boundary_pairs", boundary}, {"envelope_points", env.size()},
               {"degenerate", sample.degenerate}, {"fits", fits}};
  std::ostringstream csv;
  write_distortion_csv(sample, csv);
  r.tables["distortion.csv"] = csv.str();
  std::ostringstream envcsv;
  envcsv << "intrinsic,ambient\n";
  for (auto [x, y] : env) envcsv << fmt6(x) << ',' << fmt6(y) << '\n';
  r.tables["envelope.csv"] = envcsv.str();
}

void run_karidi(const json& in, ExperimentRecord& r, const RunOptions& o) {
  const auto ball = load_ball(in["model"], in["radius"], o);
  const auto rep = karidi_comparison(*ball, karidi_for_model(ball->model()), in["max_length"].get<int>());
  r.outputs = to_json(rep);
}

void run_cover(const json& in, ExperimentRecord& r, const RunOptions& o) {
  const std::string model = in["model"], construction = in["construction"];
  const int radius = in["radius"];
  const auto ball = load_ball(model, radius, o);
  BallPtr ball_h;
  if (construction == "exact-seq") ball_h = load_ball(model == "heisenberg" ? "Z^2" : "Z^1", radius, o);

  std::vector<ControlEntry> entries;
  json parts = json::array();
  std::size_t families = 0;
  std::ostringstream csv;
  csv << "scale,claimed_bound,verified_bound,boundary_bound,components,boundary_components,pass\n";
  for (double s : in["scales"].get<std::vector<double>>()) {
    Cover c;
    if (construction == "brick") {
      c = brick_cover(ball, s);
    } else if (construction == "heis-brick") {
      c = heisenberg_brick_cover(ball, s);
    } else if (construction == "interval") {
      c = interval_cover(ball, s);
    } else {
      ExactSequenceParts p;
      if (model == "heisenberg")
        c = exact_sequence_cover(ball, ball_h, brick_cover(ball_h, s), heisenberg_center_fibers(), &p);
      else
        c = exact_sequence_cover(ball, ball_h, interval_cover(ball_h, s), abelian_first_factor_fibers(), &p);
      parts.push_back({{"scale", s},
                       {"B_H", p.B_H},
                       {"sigma", p.sigma},
                       {"D_K", p.D_K},
                       {"claimed_bound", c.claimed_bound},
                       {"formula_holds", c.claimed_bound == p.D_K + 2 * p.B_H}});
    }
    families = c.families.size();
    auto e = verify_control(c, ball);
    csv << fmt6(e.scale) << ',' << fmt6(e.claimed_bound) << ',' << fmt6(e.verified_bound) << ','
        << fmt6(e.boundary_bound) << ',' << e.components << ',' << e.boundary_components << ','
        << (e.pass ? 1 : 0) << '\n';
    entries.push_back(std::move(e));
  }
  const auto cert = certify(construction, ball, std::move(entries));
  r.outputs = {{"certificate", to_json(cert)}, {"families", families}};
  if (!parts.empty()) r.outputs["exact_sequence"] = parts;
  r.tables["certificate.csv"] = csv.str();
}

void run_control_curve(const json& in, ExperimentRecord& r, const RunOptions& o) {
  const auto ball = load_ball(in["model"], in["radius"], o);
  GreedyOptions g;
  g.rho_cap = in["rho_cap"];
  const auto samples =
      empirical_control_curve(ball, in["families"].get<std::size_t>(), in["scales"].get<std::vector<double>>(), g);
  json rows = json::array();
  std::vector<std::pair<double, double>> pts;
  std::ostringstream csv;
  csv << "scale,bound,rho,colors,clusters,verified_bound,boundary_bound\n";
  bool failed = false;
  for (const auto& s : samples) {
    rows.push_back(to_json(s));
    csv << fmt6(s.scale) << ',' << (s.bound ? fmt6(*s.bound) : std::string()) << ',' << s.rho << ',' << s.colors
        << ',' << s.clusters << ',' << fmt6(s.verified_bound) << ',' << fmt6(s.boundary_bound) << '\n';
    if (s.bound)
      pts.emplace_back(s.scale, *s.bound);
    else
      failed = true;
  }
  r.outputs = {{"samples", rows},
               {"heuristic", true},
               {"search_failed", failed},
               {"linear_fit", fit_or_error(pts, FitModel::linear, 3)},
               {"power_fit", fit_or_error(pts, FitModel::power, 3)}};
  r.tables["curve.csv"] = csv.str();
}

void run_filiform(const json& in, ExperimentRecord& r, const RunOptions&) {
  const auto model = filiform4_model();
  const std::string dir = in["direction"];
  const std::size_t axis = static_cast<std::size_t>(dir[1] - '1');
  const double c = in["c"], h = in["h"];
  const int points = in["points"];
  const bool refine = in["refine"];
  std::vector<Point> set;
  for (int k = 0; k < points; ++k) {
    Point p(4, 0.0);
    p[axis] = c * k / (points - 1);
    set.push_back(p);
  }
  json rows = json::array();
  std::ostringstream csv;
  csv << "x1,diameter,refined,change,predicted,ratio\n";
  for (double x1 : in["x1"].get<std::vector<double>>()) {
    GridOptions g;
    g.h = h;
    const auto m = translated_set_diameter(model, set, {x1, 0, 0, 0}, g);
    json row = {{"x1", x1}, {"h", h}, {"diameter", m.value}, {"nodes", m.nodes}};
    double refined = std::nan(""), change = std::nan(""), predicted = std::nan(""), ratio = std::nan("");
    if (refine) {
      g.h = h / 2;
      refined = translated_set_diameter(model, set, {x1, 0, 0, 0}, g).value;
      change = std::abs(refined - m.value) / refined;
      row["refined"] = refined;
      row["refinement_change"] = change;
    }
    if (dir == "e4") predicted = x1 * x1 * c;
    if (dir == "e3") predicted = x1 * c;
    if (std::isfinite(predicted)) {
      ratio = m.value / predicted;
      row["predicted"] = predicted;
      row["ratio"] = ratio;
    }
    auto cell = [](double v) { return std::isfinite(v) ? fmt6(v) : std::string(); };
    csv << fmt6(x1) << ',' << fmt6(m.value) << ',' << cell(refined) << ',' << cell(change) << ','
        << cell(predicted) << ',' << cell(ratio) << '\n';
    rows.push_back(std::move(row));
  }
  r.outputs = {{"direction", dir}, {"c", c}, {"rows", rows}};
  r.tables["filiform.csv"] = csv.str();
}

std::filesystem::path resolve_lie_file(const std::string& f) {
  std::filesystem::path p(f);
  if (std::filesystem::exists(p)) return p;
  auto in_data = data_dir() / "lie" / p;
  if (std::filesystem::exists(in_data)) return in_data;
  in_data += ".lie";
  if (std::filesystem::exists(in_data)) return in_data;
  throw ValidationError("Lie algebra file '" + f + "' not found", {"file"});
}

void run_lie_classify(const json& in, ExperimentRecord& r, const RunOptions&) {
  const auto L = load_lie_algebra(resolve_lie_file(in["file"]));
  r.outputs = {{"report", to_json(classify(L))}};
}

std::string hex_sha256(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += digits[md[i] >> 4];
    out += digits[md[i] & 15];
  }
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary);
  out << data;
  if (!out) throw Error("cannot write " + p.string());
}

json record_json(const ExperimentRecord& r) {
  json tables = json::array();
  for (const auto& [name, _] : r.tables) tables.push_back(name);
  return {{"id", r.id},           {"kind", r.kind},         {"inputs", r.inputs},
          {"outputs", r.outputs}, {"tables", tables},       {"started", r.started},
          {"finished", r.finished}, {"code_version", r.code_version}};
}

}  // namespace

json round_floats(const json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return nullptr;
    return std::stod(fmt6(v));
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& x : j) out.push_back(round_floats(x));
    return out;
  }
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = round_floats(v);
    return out;
  }
  return j;
}

json canonical_spec(const json& spec) {
  if (!spec.is_object()) throw ValidationError("experiment spec must be a JSON object", {"experiment"});
  if (!spec.contains("experiment") || !spec["experiment"].is_string() ||
      !kKinds.count(spec["experiment"].get<std::string>()))
    throw ValidationError("spec must name an experiment: distortion, karidi, cover, control-curve, "
                          "filiform-diameter or lie-classify",
                          {"experiment"});
  const std::string kind = spec["experiment"];
  SpecReader rd(spec);
  json c = {{"experiment", kind}};

  auto model_and_radius = [&] {
    const auto model = rd.required<std::string>("model");
    const auto radius = rd.required<int>("radius");
    if (spec.contains("model")) rd.check(known_model(model), "model");
    if (spec.contains("radius")) rd.check(radius >= 0, "radius");
    c["model"] = model;
    c["radius"] = radius;
    return model;
  };

  if (kind == "distortion") {
    const auto model = model_and_radius();
    const auto sub = rd.required<std::string>("subgroup");
    if (spec.contains("subgroup"))
      rd.check((sub == "center" && model == "heisenberg") || (sub == "fiber" && model == "sol") || sub == "whole",
               "subgroup");
    c["subgroup"] = sub;
  } else if (kind == "karidi") {
    const auto model = model_and_radius();
    if (spec.contains("model")) rd.check(model == "heisenberg" || model.rfind("Z^", 0) == 0, "model");
    c["max_length"] = rd.optional<int>("max_length", -1);
  } else if (kind == "cover") {
    const auto model = model_and_radius();
    const auto construction = rd.required<std::string>("construction");
    const auto scales = rd.required<std::vector<double>>("scales");
    if (spec.contains("scales")) rd.check(positive_list(scales), "scales");
    if (spec.contains("construction")) {
      const bool ok = (construction == "brick" && model.rfind("Z^", 0) == 0) ||
                      (construction == "heis-brick" && model == "heisenberg") ||
                      (construction == "interval" && model == "Z^1") ||
                      (construction == "exact-seq" && (model == "heisenberg" || model == "Z^2"));
      rd.check(ok, "construction");
    }
    c["construction"] = construction;
    c["scales"] = scales;
  } else if (kind == "control-curve") {
    model_and_radius();
    const auto n = rd.required<int>("families");
    const auto scales = rd.required<std::vector<double>>("scales");
    if (spec.contains("families")) rd.check(n >= 0, "families");
    if (spec.contains("scales")) rd.check(positive_list(scales), "scales");
    c["families"] = n;
    c["scales"] = scales;
    c["rho_cap"] = rd.optional<int>("rho_cap", -1);
  } else if (kind == "filiform-diameter") {
    const auto dir = rd.optional<std::string>("direction", "e4");
    rd.check(dir == "e2" || dir == "e3" || dir == "e4", "direction");
    const auto cc = rd.optional<double>("c", 0.5);
    rd.check(cc > 0, "c");
    const auto x1 = rd.optional<std::vector<double>>("x1", {1, 2, 3});
    rd.check(!x1.empty(), "x1");
    const auto h = rd.optional<double>("h", 0.1);
    rd.check(h > 0 && h <= 1, "h");
    const auto points = rd.optional<int>("points", 5);
    rd.check(points >= 2, "points");
    c["direction"] = dir;
    c["c"] = cc;
    c["x1"] = x1;
    c["h"] = h;
    c["points"] = points;
    c["refine"] = rd.optional<bool>("refine", true);
  } else {
    c["file"] = rd.required<std::string>("file");
  }
  rd.finish(kind);
  return c;
}

std::string spec_hash(const json& canonical) { return hex_sha256(canonical.dump()); }

ExperimentRecord run_experiment(const json& spec, const RunOptions& options) {
  ExperimentRecord r;
  r.inputs = canonical_spec(spec);
  r.kind = r.inputs["experiment"];
  r.id = r.kind + "-" + spec_hash(r.inputs).substr(0, 16);
  r.code_version = NAGATA_VERSION;
  r.started = utc_now();
  if (r.kind == "distortion")
    run_distortion(r.inputs, r, options);
  else if (r.kind == "karidi")
    run_karidi(r.inputs, r, options);
  else if (r.kind == "cover")
    run_cover(r.inputs, r, options);
  else if (r.kind == "control-curve")
    run_control_curve(r.inputs, r, options);
  else if (r.kind == "filiform-diameter")
    run_filiform(r.inputs, r, options);
  else
    run_lie_classify(r.inputs, r, options);
  r.outputs = round_floats(r.outputs);
  r.finished = utc_now();
  if (options.results_root) save_record(r, *options.results_root / r.id);
  return r;
}

void save_record(const ExperimentRecord& r, const std::filesystem::path& dir) {
  const auto record_file = dir / "record.json";
  if (std::filesystem::exists(record_file)) {
    const auto old = json::parse(read_file(record_file));
    if (old.value("inputs", json()) != r.inputs || old.value("outputs", json()) != r.outputs)
      throw Error("refusing to overwrite " + dir.string() + ": it holds different results for the same id");
  }
  std::filesystem::create_directories(dir);
  write_file(dir / "spec.json", r.inputs.dump(2) + "\n");
  write_file(dir / "outputs.json", r.outputs.dump(2) + "\n");
  for (const auto& [name, body] : r.tables) write_file(dir / name, body);
  write_file(record_file, record_json(r).dump(2) + "\n");
}

ExperimentRecord load_record(const std::filesystem::path& dir) {
  json j;
  try {
    j = json::parse(read_file(dir / "record.json"));
  } catch (const json::exception& e) {
    throw ValidationError("bad record.json in " + dir.string() + ": " + e.what());
  }
  ExperimentRecord r;
  try {
    r.id = j.at("id");
    r.kind = j.at("kind");
    r.inputs = j.at("inputs");
    r.outputs = j.at("outputs");
    r.started = j.at("started");
    r.finished = j.at("finished");
    r.code_version = j.at("code_version");
    for (const auto& name : j.at("tables")) r.tables[name] = read_file(dir / name.get<std::string>());
  } catch (const json::exception& e) {
    throw ValidationError("incomplete record in " + dir.string() + ": " + e.what());
  }
  return r;
}

// ---------------------------------------------------------------------------

const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::pass: return "PASS";
    case VerdictKind::fail: return "FAIL";
    case VerdictKind::evidence_only: return "EVIDENCE-ONLY";
  }
  return "?";
}

Verdict compare_to_prediction(const ExperimentRecord& record, const CatalogEntry& entry) {
  Verdict v;
  const auto& out = record.outputs;
  auto need_asdim = [&]() -> const Prediction& {
    if (!entry.asdim_an)
      throw ValidationError("catalog entry '" + entry.name + "' has no asdim_AN prediction", {"entry"});
    return *entry.asdim_an;
  };

  if (record.kind == "cover") {
    const auto& p = need_asdim();
    v.citation = p.citation;
    v.rule = "families vs predicted asdim_AN + 1, certificate must pass";
    const auto families = out.at("families").get<int>();
    const bool pass = out.at("certificate").at("pass").get<bool>();
    v.detail = std::to_string(families) + " families, certificate " + (pass ? "passes" : "fails") +
               ", predicted asdim_AN " + to_string(p);
    if (p.is_infinite())
      v.kind = VerdictKind::evidence_only;  // a finite ball cannot refute or confirm infinity
    else if (!pass)
      v.kind = VerdictKind::fail;
    else
      v.kind = families == p.value + 1 ? VerdictKind::pass : VerdictKind::evidence_only;
    return v;
  }

  if (record.kind == "distortion") {
    if (!entry.distortion || entry.distortion->subgroup != record.inputs.at("subgroup").get<std::string>())
      throw ValidationError("catalog entry '" + entry.name + "' predicts nothing for subgroup " +
                                record.inputs.at("subgroup").dump(),
                            {"entry"});
    const auto& d = *entry.distortion;
    v.citation = d.citation;
    const auto& fits = out.at("fits");
    if (d.model == FitModel::power) {
      v.rule = "power-fit exponent within 0.05 of the prediction, residual < 0.2";
      const auto& f = fits.at("power");
      if (f.contains("error")) {
        v.kind = VerdictKind::fail;
        v.detail = f.at("error");
        return v;
      }
      const double b = f.at("b"), res = f.at("max_relative_residual");
      v.detail = "exponent " + fmt6(b) + " (predicted " + fmt6(d.exponent) + "), residual " + fmt6(res);
      v.kind = std::abs(b - d.exponent) <= 0.05 && res < 0.2 ? VerdictKind::pass : VerdictKind::fail;
    } else {
      v.rule = "log-fit residual < 0.3 and linear residual at least 3x larger";
      const auto& lg = fits.at("log");
      const auto& ln = fits.at("linear");
      if (lg.contains("error") || ln.contains("error")) {
        v.kind = VerdictKind::fail;
        v.detail = "fit failed";
        return v;
      }
      const double rl = lg.at("max_relative_residual"), rn = ln.at("max_relative_residual");
      v.detail = "log residual " + fmt6(rl) + ", linear residual " + fmt6(rn);
      v.kind = rl < 0.3 && rn >= 3 * rl ? VerdictKind::pass : VerdictKind::fail;
    }
    return v;
  }

  if (record.kind == "control-curve") {
    const auto& p = need_asdim();
    v.citation = p.citation;
    v.kind = VerdictKind::evidence_only;
    const auto& pf = out.at("power_fit");
    const auto& lf = out.at("linear_fit");
    if (p.is_infinite()) {
      v.rule = "heuristic curve; superlinear growth (power exponent > 1.3) is consistent with infinity";
      v.detail = pf.contains("error") ? std::string(pf.at("error"))
                                      : "power exponent " + fmt6(pf.at("b").get<double>()) +
                                            (pf.at("b").get<double>() > 1.3 ? " (consistent)" : " (not consistent)");
    } else {
      v.rule = "heuristic curve; linear fit residual < 0.25 is consistent with a finite value";
      v.detail = lf.contains("error") ? std::string(lf.at("error"))
                                      : "linear residual " + fmt6(lf.at("max_relative_residual").get<double>()) +
                                            (lf.at("max_relative_residual").get<double>() < 0.25 ? " (consistent)"
                                                                                                 : " (not consistent)");
    }
    return v;
  }

  if (record.kind == "lie-classify") {
    const auto& p = need_asdim();
    v.citation = p.citation;
    v.rule = "classified asdim_AN equals the catalog value; semisimple algebras defer to the catalog";
    const auto& rep = out.at("report");
    if (rep.at("predicted_asdim_AN").is_number()) {
      const int got = rep.at("predicted_asdim_AN");
      v.detail = "classified " + std::to_string(got) + ", catalog " + to_string(p);
      v.kind = !p.is_infinite() && got == p.value ? VerdictKind::pass : VerdictKind::fail;
    } else {
      const bool semisimple = rep.at("semisimple_by_killing");
      v.detail = std::string("classification requires catalog data; catalog gives ") + to_string(p);
      v.kind = semisimple && !entry.notes.empty() ? VerdictKind::pass : VerdictKind::fail;
    }
    return v;
  }

  throw ValidationError("no comparison rule for experiment kind '" + record.kind + "'", {"experiment"});
}

nlohmann::json to_json(const Verdict& v) {
  return {{"verdict", to_string(v.kind)}, {"rule", v.rule}, {"detail", v.detail}, {"citation", v.citation}};
}

nlohmann::json to_json(const DimensionReport& r) {
  json j = {{"name", r.name},
            {"dim", r.topological_dim},
            {"lower_central_dims", r.lower_central_dims},
            {"derived_dims", r.derived_dims},
            {"is_abelian", r.is_abelian},
            {"is_nilpotent", r.is_nilpotent},
            {"is_solvable", r.is_solvable},
            {"semisimple_by_killing", r.is_semisimple_by_killing}};
  j["nilpotency_degree"] = r.nilpotency_degree ? json(*r.nilpotency_degree) : json(nullptr);
  j["predicted_asdim_AN"] = r.predicted_asdim_an ? json(*r.predicted_asdim_an) : json("requires catalog");
  j["hirsch_length"] = r.hirsch_length ? json(*r.hirsch_length) : json(nullptr);
  return j;
}

nlohmann::json to_json(const KappaReport& r) {
  return {{"model", r.model},
          {"radius", r.radius},
          {"kappa", r.kappa},
          {"max_D_over_d", r.max_D_over_d},
          {"max_d_over_D", r.max_d_over_D},
          {"argmax", format_element(r.argmax)},
          {"samples", r.samples},
          {"min_length", r.min_length},
          {"max_length", r.max_length}};
}

nlohmann::json to_json(const GridMeasurement& m) {
  return {{"value", m.value}, {"h", m.h}, {"padding", m.padding}, {"nodes", m.nodes},
          {"box_lo", m.box_lo}, {"box_hi", m.box_hi}};
}

}  // namespace nagata
