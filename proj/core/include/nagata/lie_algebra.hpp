#pragma once

#include <gmpxx.h>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nagata {

using Rational = mpq_class;
using RVector = std::vector<Rational>;
/// Row-major; a "basis matrix" stores one basis vector per row.
using RMatrix = std::vector<RVector>;

/// One nonzero structure constant [e_i, e_j] = ... + value e_k + ...
/// Indices are 0-based here; the text format is 1-based.
struct StructureConstant {
  int i = 0;
  int j = 0;
  int k = 0;
  Rational value;
};

/// Finite-dimensional Lie algebra over Q given by structure constants in a
/// fixed basis e_1..e_n. Construction validates antisymmetry and the Jacobi
/// identity exactly.
class LieAlgebra {
 public:
  /// Entries with i < j; the j < i half is filled in by antisymmetry.
  /// Throws ValidationError on out-of-range or duplicate entries, i == j,
  /// i > j, or a Jacobi failure.
  LieAlgebra(std::string name, int dim, const std::vector<StructureConstant>& entries);

  /// Full tensor c[i][j][k] (n^3 entries, index (i*n + j)*n + k); checks
  /// antisymmetry as well.
  static LieAlgebra from_tensor(std::string name, int dim, std::vector<Rational> tensor);

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return dim_; }
  const Rational& c(int i, int j, int k) const {
    return tensor_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }

  /// Throws DimensionMismatch if either argument does not have length dim().
  RVector bracket(const RVector& x, const RVector& y) const;
  /// Matrix of ad(x) acting on column coordinate vectors: (ad x)[k][j] = coefficient
  /// of e_k in [x, e_j].
  RMatrix ad(const RVector& x) const;
  RVector basis_vector(int i) const;

  /// Nonzero entries with i < j, in (i, j, k) order.
  std::vector<StructureConstant> entries() const;

 private:
  LieAlgebra(std::string name, int dim, std::vector<Rational> tensor);
  void validate_jacobi() const;

  std::string name_;
  int dim_;
  std::vector<Rational> tensor_;
};

/// Parses the text format: a `dim n` header, optional `name <label>` line,
/// then `i j k p/q` lines (1-based, i < j). `#` starts a comment.
LieAlgebra parse_lie_algebra(std::istream& in, const std::string& default_name = "lie");
LieAlgebra load_lie_algebra(const std::filesystem::path& path);
void write_lie_algebra(const LieAlgebra& L, std::ostream& out);

/// Reduced row echelon basis of the row span, rows scaled to primitive
/// integer vectors with positive pivot. Pivot columns are chosen lowest index
/// first, so the output depends only on the span.
RMatrix echelon_basis(RMatrix rows);
int rank(const RMatrix& rows);
/// True when v lies in the span of `basis` (any generating set).
bool in_span(const RMatrix& basis, const RVector& v);
/// True when every row of `inner` lies in the span of `outer`.
bool is_subspace(const RMatrix& inner, const RMatrix& outer);
Rational determinant(RMatrix m);

/// span{[x, y] : x in A, y in B} for subspaces given by basis rows.
RMatrix bracket_span(const LieAlgebra& L, const RMatrix& A, const RMatrix& B);

enum class SeriesKind { lower_central, derived };
const char* to_string(SeriesKind kind);

/// Terms of a commutator series, starting with the whole algebra. The chain
/// stops at the zero subspace, or repeats its last term once when it
/// stabilizes at a nonzero subspace.
struct SubspaceChain {
  SeriesKind kind;
  std::vector<RMatrix> subspaces;
  std::vector<int> dims;

  bool reaches_zero() const { return !dims.empty() && dims.back() == 0; }
};

SubspaceChain lower_central_series(const LieAlgebra& L);
SubspaceChain derived_series(const LieAlgebra& L);

/// B[i][j] = trace(ad e_i o ad e_j).
RMatrix killing_form(const LieAlgebra& L);

struct DimensionReport {
  std::string name;
  int topological_dim = 0;
  std::vector<int> lower_central_dims;
  std::vector<int> derived_dims;
  /// Last index with a nonzero lower central term; only for nilpotent algebras.
  std::optional<int> nilpotency_degree;
  bool is_abelian = false;
  bool is_nilpotent = false;
  bool is_solvable = false;
  bool is_semisimple_by_killing = false;
  /// Set for solvable algebras (equal to the dimension). Empty means the value
  /// depends on group data (maximal compact subgroups) and must come from the
  /// catalog.
  std::optional<int> predicted_asdim_an;
  /// Sum of the ranks of consecutive derived quotients; solvable algebras only.
  std::optional<int> hirsch_length;
};

DimensionReport classify(const LieAlgebra& L);

/// Sum of the ranks of the successive derived quotients.
int hirsch_length(std::span<const int> quotient_ranks);

std::string format_rational(const Rational& q);
std::string format_vector(const RVector& v);

}  // namespace nagata
