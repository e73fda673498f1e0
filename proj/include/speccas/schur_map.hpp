#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "speccas/types.hpp"

namespace speccas {

class SchurMap;

// Leaf variants. Coefficient lists are ascending: coeffs[k] multiplies z^k.
struct Identity {};
struct Affine {
  double t;  // z -> t + (1 - t) z, t in (0, 1)
};
struct Blaschke {
  double t;  // z -> (z - t)/(1 - t z), t in [0, 1)
};
struct Mobius {
  cplx a, b, c, d;  // z -> (a z + b)/(c z + d)
};
struct Polynomial {
  std::vector<cplx> coeffs;
};
struct RationalMap {
  std::vector<cplx> num;
  std::vector<cplx> den;
};
struct Composition {
  std::vector<SchurMap> maps;  // applied left to right: maps[0] first
};

// A symbolic self-map of the closed unit disk. Nodes are immutable and
// shared, so copies are cheap and instances are safe for concurrent reads.
class SchurMap {
 public:
  using Node = std::variant<Identity, Affine, Blaschke, Mobius, Polynomial, RationalMap, Composition>;

  static SchurMap identity();
  static SchurMap affine(double t);
  static SchurMap blaschke(double t);
  static SchurMap mobius(cplx a, cplx b, cplx c, cplx d);
  static SchurMap polynomial(std::vector<cplx> coeffs);
  static SchurMap rational(std::vector<cplx> num, std::vector<cplx> den);
  static SchurMap composition(std::vector<SchurMap> maps);

  const Node& node() const { return *node_; }

  // Structural identity test (an Identity leaf, or a composition of them).
  bool is_identity() const;

 private:
  explicit SchurMap(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

  std::shared_ptr<const Node> node_;
};

// Evaluates the map at z. Throws errc::pole_at_point when a denominator
// magnitude falls to pole_eps or below.
cplx eval_map(const SchurMap& map, cplx z);

}  // namespace speccas
