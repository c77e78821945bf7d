#include "nagata/catalog.hpp"

#include <cstdlib>

#include "nagata/error.hpp"

#ifndef NAGATA_DEFAULT_DATA_DIR
#define NAGATA_DEFAULT_DATA_DIR "data"
#endif

namespace nagata {

namespace {

const char* const kPolycyclic = "polycyclic group with a word metric: asdim_AN equals the Hirsch length";
const char* const kAbelian = "Z^n is quasi-isometric to R^n; n+1 brick families with linear control, and no fewer";

std::vector<CatalogEntry> make_catalog() {
  std::vector<CatalogEntry> c;
  for (int n = 1; n <= 3; ++n) {
    CatalogEntry e;
    e.name = "Z^" + std::to_string(n);
    e.model = e.name;
    if (n == 2) e.lie_file = "abelian2.lie";
    e.asdim = Prediction::finite(n, kAbelian);
    e.asdim_an = Prediction::finite(n, kAbelian);
    e.dim_an = Prediction::finite(n, "the Euclidean space R^n has Assouad-Nagata dimension n");
    e.hirsch = Prediction::finite(n, "free abelian of rank n");
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "heisenberg";
    e.model = "heisenberg";
    e.lie_file = "heis3.lie";
    e.asdim = Prediction::finite(3, kPolycyclic);
    e.asdim_an = Prediction::finite(3, kPolycyclic);
    e.hirsch = Prediction::finite(3, "derived series quotients Z^2 and Z");
    e.distortion = DistortionPrediction{
        "center", FitModel::power, 0.5,
        "the center of a 2-step nilpotent group sits in the second layer: |z|_G ~ |z|_center^(1/2)"};
    e.notes = "integer Heisenberg group; lattice in the real Heisenberg group";
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "filiform4";
    e.lie_file = "filiform4.lie";
    e.asdim_an = Prediction::finite(4, "connected nilpotent Lie group with left-invariant metric: dimension 4");
    e.dim_an = Prediction::finite(4, "connected nilpotent Lie group with left-invariant metric: dimension 4");
    e.hirsch = Prediction::finite(4, "lattices have Hirsch length equal to the nilpotent group's dimension");
    e.notes = "continuous model only; a lattice exists since the structure constants are rational";
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "sol";
    e.model = "sol";
    e.asdim_an = Prediction::finite(3, kPolycyclic);
    e.hirsch = Prediction::finite(3, "Z^2 fiber (rank 2) extended by Z");
    e.distortion = DistortionPrediction{"fiber", FitModel::log, 1,
                                        "hyperbolic monodromy distorts the Z^2 fiber exponentially"};
    e.notes = "Z^2 x| Z with monodromy [[2,1],[1,1]]";
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "lamplighter-Z2-Z2";
    e.model = "lamplighter";
    e.asdim = Prediction::finite(2, "wreath products with base Z^2 and finite lamps have asymptotic dimension 2");
    e.asdim_an = Prediction::infinite(
        "with lamps over Z^2 no fixed number of families gives linear control at all scales");
    e.notes = "Z/2 wr Z^2; not finitely presented, exponential growth";
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "sl2";
    e.lie_file = "sl2.lie";
    e.asdim_an = Prediction::finite(
        2, "connected Lie group with left-invariant metric: dim G minus dim of a maximal compact subgroup");
    e.notes = "SL(2,R) = A N K: A diagonal (dim 1), N unipotent upper triangular (dim 1), K = SO(2) (dim 1); "
              "A N is a solvable group of dimension 2 quasi-isometric to G";
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "so3";
    e.lie_file = "so3.lie";
    e.asdim_an = Prediction::finite(0, "compact group: the metric is bounded");
    e.notes = "SO(3) is its own maximal compact subgroup; A and N are trivial";
    c.push_back(std::move(e));
  }
  return c;
}

}  // namespace

std::string to_string(const Prediction& p) {
  return p.is_infinite() ? std::string("inf") : std::to_string(p.value);
}

const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> catalog = make_catalog();
  return catalog;
}

const CatalogEntry& catalog_lookup(const std::string& name) {
  for (const auto& e : builtin_catalog())
    if (e.name == name) return e;
  // Model names that differ from the entry name.
  for (const auto& e : builtin_catalog())
    if (!e.model.empty() && e.model == name) return e;
  throw ValidationError("no catalog entry named '" + name + "'", {"name"});
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("NAGATA_DATA_DIR"); env && *env) return env;
  return NAGATA_DEFAULT_DATA_DIR;
}

std::filesystem::path lie_path(const CatalogEntry& e) {
  if (e.lie_file.empty()) throw ValidationError("catalog entry '" + e.name + "' has no Lie algebra file");
  return data_dir() / "lie" / e.lie_file;
}

nlohmann::json to_json(const Prediction& p) {
  nlohmann::json j{{"citation", p.citation}};
  if (p.is_infinite())
    j["value"] = "inf";
  else
    j["value"] = p.value;
  return j;
}

nlohmann::json to_json(const CatalogEntry& e) {
  nlohmann::json j{{"name", e.name}, {"model", e.model}, {"lie_file", e.lie_file}, {"notes", e.notes}};
  nlohmann::json pred = nlohmann::json::object();
  if (e.asdim) pred["asdim"] = to_json(*e.asdim);
  if (e.asdim_an) pred["asdim_AN"] = to_json(*e.asdim_an);
  if (e.dim_an) pred["dim_AN"] = to_json(*e.dim_an);
  if (e.hirsch) pred["hirsch"] = to_json(*e.hirsch);
  j["predicted"] = pred;
  if (e.distortion)
    j["distortion"] = {{"subgroup", e.distortion->subgroup},
                       {"model", to_string(e.distortion->model)},
                       {"exponent", e.distortion->exponent},
                       {"citation", e.distortion->citation}};
  return j;
}

}  // namespace nagata
