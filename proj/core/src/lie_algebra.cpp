#include "nagata/lie_algebra.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "nagata/error.hpp"

namespace nagata {

namespace {

using IVector = std::vector<mpz_class>;

IVector to_integer_row(const RVector& row) {
  mpz_class l = 1;
  for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  IVector out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = row[i].get_num() * (l / row[i].get_den());
  return out;
}

void make_primitive(IVector& row) {
  mpz_class g = 0;
  for (const auto& x : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g == 0 || g == 1) return;
  for (auto& x : row) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

bool is_zero(const IVector& row) {
  for (const auto& x : row)
    if (x != 0) return false;
  return true;
}

// Fraction-free reduced echelon form: integer row operations followed by
// content removal, pivots taken lowest column first.
std::vector<IVector> integer_echelon(std::vector<IVector> rows, std::size_t width) {
  std::size_t next = 0;
  for (std::size_t col = 0; col < width && next < rows.size(); ++col) {
    std::size_t pivot = next;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[next], rows[pivot]);
    IVector& p = rows[next];
    if (p[col] < 0)
      for (auto& x : p) x = -x;
    make_primitive(p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == next || rows[r][col] == 0) continue;
      const mpz_class a = p[col];
      const mpz_class b = rows[r][col];
      for (std::size_t k = 0; k < width; ++k) rows[r][k] = a * rows[r][k] - b * p[k];
      make_primitive(rows[r]);
    }
    ++next;
  }
  rows.resize(next);
  for (auto& r : rows) {
    make_primitive(r);
    for (const auto& x : r) {
      if (x == 0) continue;
      if (x < 0)
        for (auto& y : r) y = -y;
      break;
    }
  }
  return rows;
}

RMatrix to_rational(const std::vector<IVector>& rows) {
  RMatrix out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    RVector v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = Rational(r[i]);
    out.push_back(std::move(v));
  }
  return out;
}

std::size_t row_width(const RMatrix& rows) { return rows.empty() ? 0 : rows.front().size(); }

}  // namespace

std::string format_rational(const Rational& q) { return q.get_str(); }

std::string format_vector(const RVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_rational(v[i]);
  }
  return s + "]";
}

LieAlgebra::LieAlgebra(std::string name, int dim, std::vector<Rational> tensor)
    : name_(std::move(name)), dim_(dim), tensor_(std::move(tensor)) {}

LieAlgebra::LieAlgebra(std::string name, int dim, const std::vector<StructureConstant>& entries)
    : name_(std::move(name)), dim_(dim) {
  if (dim < 1) throw ValidationError("Lie algebra dimension must be positive", {"dim"});
  tensor_.assign(static_cast<std::size_t>(dim) * dim * dim, Rational(0));
  std::set<std::tuple<int, int, int>> seen;
  auto at = [&](int i, int j, int k) -> Rational& {
    return tensor_[(static_cast<std::size_t>(i) * dim + j) * dim + k];
  };
  for (const auto& e : entries) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim)
      throw ValidationError("structure constant index out of range in " + name_, {"entries"});
    if (e.i >= e.j)
      throw ValidationError("structure constants must be given with i < j (" + std::to_string(e.i + 1) + " " +
                                std::to_string(e.j + 1) + ")",
                            {"entries"});
    if (!seen.insert({e.i, e.j, e.k}).second)
      throw ValidationError("duplicate structure constant " + std::to_string(e.i + 1) + " " +
                                std::to_string(e.j + 1) + " " + std::to_string(e.k + 1),
                            {"entries"});
    at(e.i, e.j, e.k) = e.value;
    at(e.j, e.i, e.k) = -e.value;
  }
  validate_jacobi();
}

LieAlgebra LieAlgebra::from_tensor(std::string name, int dim, std::vector<Rational> tensor) {
  if (dim < 1) throw ValidationError("Lie algebra dimension must be positive", {"dim"});
  if (tensor.size() != static_cast<std::size_t>(dim) * dim * dim)
    throw DimensionMismatch("structure tensor must have dim^3 entries", {"tensor"});
  LieAlgebra L(std::move(name), dim, std::move(tensor));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (L.c(i, j, k) != -L.c(j, i, k))
          throw ValidationError("structure tensor of " + L.name_ + " is not antisymmetric at (" +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                                    std::to_string(k + 1) + ")",
                                {"tensor"});
  L.validate_jacobi();
  return L;
}

void LieAlgebra::validate_jacobi() const {
  const int n = dim_;
  // [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]], coefficient of e_m
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          Rational s = 0;
          for (int l = 0; l < n; ++l) {
            s += c(j, k, l) * c(i, l, m);
            s += c(k, i, l) * c(j, l, m);
            s += c(i, j, l) * c(k, l, m);
          }
          if (s != 0)
            throw ValidationError("Jacobi identity fails for " + name_ + " on (e" + std::to_string(i + 1) + ", e" +
                                      std::to_string(j + 1) + ", e" + std::to_string(k + 1) + ")",
                                  {"entries"});
        }
}

RVector LieAlgebra::basis_vector(int i) const {
  if (i < 0 || i >= dim_) throw DimensionMismatch("basis index out of range");
  RVector v(static_cast<std::size_t>(dim_), Rational(0));
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

RVector LieAlgebra::bracket(const RVector& x, const RVector& y) const {
  const auto n = static_cast<std::size_t>(dim_);
  if (x.size() != n || y.size() != n)
    throw DimensionMismatch("bracket arguments must have length " + std::to_string(dim_) + " (got " +
                                std::to_string(x.size()) + " and " + std::to_string(y.size()) + ")",
                            {"x", "y"});
  RVector out(n, Rational(0));
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[j] == 0 || i == j) continue;
      const Rational w = x[i] * y[j];
      for (int k = 0; k < dim_; ++k)
        if (c(i, j, k) != 0) out[k] += w * c(i, j, k);
    }
  }
  return out;
}

RMatrix LieAlgebra::ad(const RVector& x) const {
  const auto n = static_cast<std::size_t>(dim_);
  RMatrix m(n, RVector(n, Rational(0)));
  for (int j = 0; j < dim_; ++j) {
    RVector col = bracket(x, basis_vector(j));
    for (std::size_t k = 0; k < n; ++k) m[k][j] = col[k];
  }
  return m;
}

std::vector<StructureConstant> LieAlgebra::entries() const {
  std::vector<StructureConstant> out;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        if (c(i, j, k) != 0) out.push_back({i, j, k, c(i, j, k)});
  return out;
}

LieAlgebra parse_lie_algebra(std::istream& in, const std::string& default_name) {
  std::string line;
  int dim = -1;
  std::string name = default_name;
  std::vector<StructureConstant> entries;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    auto fail = [&](const std::string& msg) {
      return ValidationError("line " + std::to_string(lineno) + ": " + msg, {"line " + std::to_string(lineno)});
    };
    if (first == "dim") {
      if (dim != -1) throw fail("duplicate dim header");
      if (!(ls >> dim) || dim < 1) throw fail("expected `dim n` with n >= 1");
      continue;
    }
    if (first == "name") {
      std::getline(ls >> std::ws, name);
      continue;
    }
    if (dim == -1) throw fail("structure constants before the `dim` header");
    StructureConstant e;
    std::string q;
    try {
      e.i = std::stoi(first) - 1;
    } catch (const std::exception&) {
      throw fail("expected `i j k p/q`");
    }
    if (!(ls >> e.j >> e.k >> q)) throw fail("expected `i j k p/q`");
    e.j -= 1;
    e.k -= 1;
    std::string rest;
    if (ls >> rest) throw fail("trailing text after coefficient");
    if (e.value.set_str(q, 10) != 0) throw fail("bad rational coefficient `" + q + "`");
    if (e.value.get_den() == 0) throw fail("zero denominator in `" + q + "`");
    e.value.canonicalize();
    if (e.value == 0) continue;
    entries.push_back(e);
  }
  if (dim == -1) throw ValidationError("missing `dim n` header", {"dim"});
  return LieAlgebra(name, dim, entries);
}

LieAlgebra load_lie_algebra(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open Lie algebra file " + path.string(), {"file"});
  return parse_lie_algebra(in, path.stem().string());
}

void write_lie_algebra(const LieAlgebra& L, std::ostream& out) {
  out << "name " << L.name() << "\n";
  out << "dim " << L.dim() << "\n";
  for (const auto& e : L.entries())
    out << e.i + 1 << ' ' << e.j + 1 << ' ' << e.k + 1 << ' ' << format_rational(e.value) << "\n";
}

RMatrix echelon_basis(RMatrix rows) {
  const std::size_t width = row_width(rows);
  std::vector<IVector> ints;
  ints.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != width) throw DimensionMismatch("rows of different lengths");
    IVector v = to_integer_row(r);
    if (!is_zero(v)) ints.push_back(std::move(v));
  }
  return to_rational(integer_echelon(std::move(ints), width));
}

int rank(const RMatrix& rows) { return static_cast<int>(echelon_basis(rows).size()); }

bool in_span(const RMatrix& basis, const RVector& v) {
  RMatrix rows = basis;
  rows.push_back(v);
  return rank(rows) == rank(basis);
}

bool is_subspace(const RMatrix& inner, const RMatrix& outer) {
  RMatrix rows = outer;
  rows.insert(rows.end(), inner.begin(), inner.end());
  return rank(rows) == rank(outer);
}

Rational determinant(RMatrix m) {
  const std::size_t n = m.size();
  for (const auto& r : m)
    if (r.size() != n) throw DimensionMismatch("determinant of a non-square matrix");
  if (n == 0) return 1;
  // Bareiss elimination on an integer scaling of the rows.
  mpz_class scale = 1;
  std::vector<IVector> a;
  for (const auto& r : m) {
    mpz_class l = 1;
    for (const auto& q : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    scale *= l;
    a.push_back(to_integer_row(r));
  }
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  Rational det(a[n - 1][n - 1] * sign, scale);
  det.canonicalize();
  return det;
}

RMatrix bracket_span(const LieAlgebra& L, const RMatrix& A, const RMatrix& B) {
  RMatrix rows;
  for (const auto& x : A)
    for (const auto& y : B) rows.push_back(L.bracket(x, y));
  if (rows.empty()) return {};
  return echelon_basis(std::move(rows));
}

const char* to_string(SeriesKind kind) {
  return kind == SeriesKind::lower_central ? "lower_central" : "derived";
}

namespace {

RMatrix identity_basis(int n) {
  RMatrix m(static_cast<std::size_t>(n), RVector(static_cast<std::size_t>(n), Rational(0)));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

SubspaceChain commutator_series(const LieAlgebra& L, SeriesKind kind) {
  SubspaceChain chain{kind, {identity_basis(L.dim())}, {L.dim()}};
  while (true) {
    const RMatrix& last = chain.subspaces.back();
    RMatrix next = kind == SeriesKind::lower_central ? bracket_span(L, chain.subspaces.front(), last)
                                                     : bracket_span(L, last, last);
    const int d = static_cast<int>(next.size());
    const bool stable = d == chain.dims.back();
    chain.subspaces.push_back(std::move(next));
    chain.dims.push_back(d);
    if (d == 0 || stable) break;
  }
  return chain;
}

}  // namespace

SubspaceChain lower_central_series(const LieAlgebra& L) {
  return commutator_series(L, SeriesKind::lower_central);
}

SubspaceChain derived_series(const LieAlgebra& L) { return commutator_series(L, SeriesKind::derived); }

RMatrix killing_form(const LieAlgebra& L) {
  const auto n = static_cast<std::size_t>(L.dim());
  std::vector<RMatrix> ads;
  for (int i = 0; i < L.dim(); ++i) ads.push_back(L.ad(L.basis_vector(i)));
  RMatrix B(n, RVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Rational t = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) t += ads[i][a][b] * ads[j][b][a];
      B[i][j] = t;
      B[j][i] = t;
    }
  return B;
}

int hirsch_length(std::span<const int> quotient_ranks) {
  int sum = 0;
  for (int r : quotient_ranks) {
    if (r < 0) throw ValidationError("quotient ranks must be nonnegative", {"quotient_ranks"});
    sum += r;
  }
  return sum;
}

DimensionReport classify(const LieAlgebra& L) {
  DimensionReport r;
  r.name = L.name();
  r.topological_dim = L.dim();
  const auto lower = lower_central_series(L);
  const auto derived = derived_series(L);
  r.lower_central_dims = lower.dims;
  r.derived_dims = derived.dims;
  r.is_nilpotent = lower.reaches_zero();
  r.is_solvable = derived.reaches_zero();
  r.is_abelian = lower.dims.size() >= 2 && lower.dims[1] == 0;
  if (r.is_nilpotent) r.nilpotency_degree = static_cast<int>(lower.dims.size()) - 1;
  r.is_semisimple_by_killing = determinant(killing_form(L)) != 0;
  if (r.is_solvable) {
    r.predicted_asdim_an = L.dim();
    std::vector<int> ranks;
    for (std::size_t i = 0; i + 1 < derived.dims.size(); ++i) ranks.push_back(derived.dims[i] - derived.dims[i + 1]);
    r.hirsch_length = hirsch_length(ranks);
  }
  return r;
}

}  // namespace nagata
