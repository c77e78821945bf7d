#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nagata {

/// Group elements are integer tuples. Fixed-arity models (Z^n, Heisenberg,
/// SOL lattices) use a fixed length; the lamplighter uses a variable-length
/// canonical encoding (cursor followed by sorted lamp coordinates).
using Element = std::vector<std::int64_t>;
using ElementView = std::span<const std::int64_t>;

std::string format_element(ElementView g);

/// A finitely generated group with exact multiplication and a finite
/// symmetric generating set. Distances are word metrics for right
/// multiplication by generators: d(g, h) = |g^-1 h|.
class DiscreteGroupModel {
 public:
  virtual ~DiscreteGroupModel() = default;

  const std::string& name() const noexcept { return name_; }
  const std::vector<Element>& generators() const noexcept { return generators_; }
  const std::vector<std::string>& generator_names() const noexcept { return generator_names_; }

  virtual Element identity() const = 0;
  virtual void multiply(ElementView a, ElementView b, Element& out) const = 0;
  virtual void inverse(ElementView a, Element& out) const = 0;
  /// Length of every element tuple, or 0 when the encoding is variable-length.
  virtual std::size_t arity() const = 0;
  /// True when `g` is a canonical encoding of some element.
  virtual bool is_canonical(ElementView g) const;
  /// Closed-form word length for models that have one (Z^n with the standard
  /// generators). Everything else returns nullopt and must go through BFS.
  virtual std::optional<std::int64_t> closed_form_length(ElementView g) const;

  Element multiply(ElementView a, ElementView b) const;
  Element inverse(ElementView a) const;

  /// FNV-1a over the model name and generator tuples; identifies the
  /// generating set in ball cache files.
  std::uint64_t generator_hash() const;

  /// Index of the inverse of each generator in `generators()`.
  const std::vector<std::size_t>& inverse_generator_index() const noexcept { return inverse_index_; }

 protected:
  DiscreteGroupModel(std::string name, std::vector<Element> generators,
                     std::vector<std::string> generator_names);
  /// Must be called at the end of every concrete constructor: checks that the
  /// generating set is closed under inversion and records inverse indices.
  void index_inverses();

 private:
  std::string name_;
  std::vector<Element> generators_;
  std::vector<std::string> generator_names_;
  std::vector<std::size_t> inverse_index_;
};

using ModelPtr = std::shared_ptr<const DiscreteGroupModel>;

using Matrix2 = std::array<std::array<std::int64_t, 2>, 2>;

/// Z^n with generators e_1..e_n followed by their inverses.
ModelPtr abelian_model(int n);

/// Discrete Heisenberg group on Z^3 with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
/// Generators x, y, x^-1, y^-1. The continuous law with the 1/2-symmetrised
/// central term is carried to this one by (a, b, c) -> (a, b, c - ab/2).
ModelPtr heisenberg_model();

/// Z^2 x|_A Z with (v, t)(w, s) = (v + A^t w, t + s), encoded (v1, v2, t).
/// Requires det A = 1 and |trace A| > 2.
ModelPtr sol_lattice_model(const Matrix2& a);

/// Z_2 wr Z^2. Encoding: (cursor_x, cursor_y, lamp_1x, lamp_1y, ...), lamps
/// sorted lexicographically. Generators: cursor moves +-e1, +-e2 and the
/// toggle of the lamp under the cursor.
ModelPtr lamplighter_model();

/// Resolves CLI/catalog model identifiers: "Z^n" (0 <= n <= 16), "heisenberg",
/// "sol" (A = [[2,1],[1,1]]), "lamplighter".
ModelPtr model_by_name(const std::string& name);

/// A subgroup H <= G that carries its own generating set.
struct SubgroupSpec {
  std::string id;
  ModelPtr model;
  std::function<Element(ElementView h)> embed;
  /// The H-coordinates of g when g lies in H.
  std::function<std::optional<Element>(ElementView g)> restrict_to;
};

/// Center of the discrete Heisenberg group, {(0,0,c)}, generated by (0,0,1).
SubgroupSpec heisenberg_center();
/// Fiber Z^2 x {0} of a SOL lattice with generators e1, e2.
SubgroupSpec sol_fiber();
/// The whole group viewed as a subgroup of itself.
SubgroupSpec whole_group(const ModelPtr& g);

/// Normal subgroup K <= G together with a canonical coset key for G/K.
struct QuotientSpec {
  std::string id;
  std::function<bool(ElementView g)> in_kernel;
  std::function<Element(ElementView g)> coset_key;
};

/// Heisenberg modulo its center; the key of (a, b, c) is (a, b).
QuotientSpec heisenberg_mod_center();
/// Z^n modulo the span of the first k coordinates; the key keeps the rest.
QuotientSpec abelian_mod_first(int n, int k);

}  // namespace nagata
