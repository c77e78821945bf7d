#include <doctest.h>

#include <sstream>

#include "nagata/error.hpp"
#include "nagata/lie_algebra.hpp"
#include "oracles.hpp"

using namespace nagata;

namespace {

LieAlgebra load(const std::string& name) { return load_lie_algebra(std::string(NAGATA_TEST_DATA) + "/lie/" + name + ".lie"); }

RVector vec(std::initializer_list<int> xs) {
  RVector v;
  for (int x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST_CASE("bracket on basis vectors") {
  const auto F = load("filiform4");
  CHECK(F.bracket(F.basis_vector(0), F.basis_vector(1)) == vec({0, 0, 1, 0}));
  CHECK(F.bracket(F.basis_vector(1), F.basis_vector(0)) == vec({0, 0, -1, 0}));
  CHECK(F.bracket(F.basis_vector(0), F.basis_vector(2)) == vec({0, 0, 0, 1}));
  CHECK(F.bracket(F.basis_vector(1), F.basis_vector(2)) == vec({0, 0, 0, 0}));
  CHECK_THROWS_AS(F.bracket(vec({1, 0, 0}), F.basis_vector(0)), DimensionMismatch);
}

TEST_CASE("bracket is bilinear and antisymmetric on random vectors") {
  const auto S = load("sl2");
  const RVector x{Rational(1, 2), 3, -2}, y{4, Rational(-1, 3), 1}, z{0, 5, Rational(7, 4)};
  RVector xy = S.bracket(x, y), yx = S.bracket(y, x);
  for (int i = 0; i < 3; ++i) CHECK(xy[i] == -yx[i]);
  RVector x_plus_z(3);
  for (int i = 0; i < 3; ++i) x_plus_z[i] = x[i] + z[i];
  const auto lhs = S.bracket(x_plus_z, y), zy = S.bracket(z, y);
  for (int i = 0; i < 3; ++i) CHECK(lhs[i] == xy[i] + zy[i]);
}

TEST_CASE("lower central and derived series match span closure") {
  for (const char* name : {"heis3", "filiform4", "sl2", "so3", "abelian2"}) {
    CAPTURE(name);
    const auto L = load(name);
    CHECK(lower_central_series(L).dims == oracle::series_dims(L, false));
    CHECK(derived_series(L).dims == oracle::series_dims(L, true));
  }
  CHECK(lower_central_series(load("filiform4")).dims == std::vector<int>{4, 2, 1, 0});
  CHECK(lower_central_series(load("heis3")).dims == std::vector<int>{3, 1, 0});
  CHECK(derived_series(load("heis3")).dims == std::vector<int>{3, 1, 0});
  CHECK(lower_central_series(load("abelian2")).dims == std::vector<int>{2, 0});
  const auto d = derived_series(load("sl2")).dims;
  REQUIRE(d.size() >= 2);
  CHECK(d[0] == 3);
  CHECK(d[1] == 3);
}

TEST_CASE("series terms are nested subspaces") {
  const auto chain = lower_central_series(load("filiform4"));
  for (std::size_t i = 1; i < chain.subspaces.size(); ++i)
    if (!chain.subspaces[i].empty()) CHECK(is_subspace(chain.subspaces[i], chain.subspaces[i - 1]));
}

TEST_CASE("Killing form agrees with the trace oracle") {
  for (const char* name : {"heis3", "filiform4", "sl2", "so3", "abelian2"}) {
    CAPTURE(name);
    const auto L = load(name);
    CHECK(killing_form(L) == oracle::killing_by_trace(L));
  }
  const auto B = killing_form(load("sl2"));
  CHECK(B[0][0] == 8);
  CHECK(B[1][2] == 4);
  CHECK(B[2][1] == 4);
  CHECK(oracle::det_cofactor(B) == -128);
  CHECK(determinant(B) == -128);
  for (const auto& row : killing_form(load("heis3")))
    for (const auto& x : row) CHECK(x == 0);
}

TEST_CASE("Jacobi violations are rejected") {
  // [e1,e2] = e3, [e1,e3] = e1: the Jacobi sum on (e1, e2, e3) is e3.
  std::vector<StructureConstant> bad{{0, 1, 2, 1}, {0, 2, 0, 1}};
  CHECK_THROWS_AS(LieAlgebra("bad", 3, bad), ValidationError);
  CHECK_THROWS_AS(LieAlgebra("bad", 2, std::vector<StructureConstant>{{1, 0, 0, 1}}), ValidationError);
  CHECK_THROWS_AS(LieAlgebra("bad", 2, std::vector<StructureConstant>{{0, 1, 5, 1}}), ValidationError);
  CHECK_THROWS_AS(LieAlgebra("bad", 2, std::vector<StructureConstant>{{0, 1, 0, 1}, {0, 1, 0, 2}}), ValidationError);
}

TEST_CASE("every shipped algebra passes validation") {
  for (const char* name : {"heis3", "filiform4", "sl2", "so3", "abelian2"}) CHECK_NOTHROW(load(name));
}

TEST_CASE("text format round trip") {
  const auto F = load("filiform4");
  std::stringstream s;
  write_lie_algebra(F, s);
  const auto G = parse_lie_algebra(s);
  CHECK(G.dim() == F.dim());
  const auto a = F.entries(), b = G.entries();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].i == b[i].i);
    CHECK(a[i].j == b[i].j);
    CHECK(a[i].k == b[i].k);
    CHECK(a[i].value == b[i].value);
  }
}

TEST_CASE("parser reports malformed input") {
  std::istringstream no_header("1 2 3 1\n");
  CHECK_THROWS_AS(parse_lie_algebra(no_header), ValidationError);
  std::istringstream bad_index("dim 2\n1 3 1 1\n");
  CHECK_THROWS_AS(parse_lie_algebra(bad_index), ValidationError);
  std::istringstream fraction("dim 3\n1 2 3 1/12\n");
  CHECK(parse_lie_algebra(fraction).c(0, 1, 2) == Rational(1, 12));
}

TEST_CASE("classify") {
  const auto f = classify(load("filiform4"));
  CHECK(f.topological_dim == 4);
  CHECK(f.is_nilpotent);
  CHECK(f.is_solvable);
  CHECK_FALSE(f.is_abelian);
  REQUIRE(f.nilpotency_degree);
  CHECK(*f.nilpotency_degree == 3);
  REQUIRE(f.predicted_asdim_an);
  CHECK(*f.predicted_asdim_an == 4);

  const auto s = classify(load("sl2"));
  CHECK(s.is_semisimple_by_killing);
  CHECK_FALSE(s.is_solvable);
  CHECK_FALSE(s.predicted_asdim_an);

  const auto a = classify(load("abelian2"));
  CHECK(a.is_abelian);
  REQUIRE(a.predicted_asdim_an);
  CHECK(*a.predicted_asdim_an == 2);

  const auto h = classify(load("heis3"));
  REQUIRE(h.hirsch_length);
  CHECK(*h.hirsch_length == 3);
}

TEST_CASE("hirsch length sums ranks") {
  const std::vector<int> heis{2, 1};
  CHECK(hirsch_length(heis) == 3);
  CHECK(hirsch_length(std::vector<int>{}) == 0);
  CHECK_THROWS_AS(hirsch_length(std::vector<int>{2, -1}), ValidationError);
}

TEST_CASE("exact rational elimination") {
  const RMatrix m{vec({2, 4}), vec({1, 2})};
  CHECK(rank(m) == 1);
  CHECK(determinant(m) == 0);
  CHECK(in_span(m, vec({3, 6})));
  CHECK_FALSE(in_span(m, vec({1, 0})));
  const auto e = echelon_basis({vec({0, 2, 4}), vec({0, 1, 2}), vec({3, 0, 0})});
  REQUIRE(e.size() == 2);
  CHECK(e[0] == vec({1, 0, 0}));
  CHECK(e[1] == vec({0, 1, 2}));
}
