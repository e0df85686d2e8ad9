#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ifslab/drivers.hpp"
#include "ifslab/geometry.hpp"
#include "ifslab/linalg.hpp"
#include "ifslab/point_cloud.hpp"

namespace ifslab {

namespace maps {

struct HyperplaneProjection {
  Hyperplane plane;
};

struct SubspaceProjection {
  AffineSubspace subspace;
};

struct ConvexProjection {
  ConvexBody body;
};

/// x -> linear * x + shift. Only nonexpansive linear parts are admitted.
struct Affine {
  Matrix linear;
  Vector shift;
};

}  // namespace maps

/// One generator of the system. Immutable once constructed.
class MapSpec {
 public:
  using Kind = std::variant<maps::HyperplaneProjection, maps::SubspaceProjection, maps::ConvexProjection,
                            maps::Affine>;

  /// Affine maps are checked here: square, matching shift, and spectral norm
  /// at most 1 + kAffineNormSlack.
  explicit MapSpec(Kind kind);

  static MapSpec hyperplane(Vector normal, double offset);
  static MapSpec subspace(AffineSubspace s);
  static MapSpec convex(ConvexBody body);
  static MapSpec affine(Matrix linear, Vector shift);

  const Kind& kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept;
  Vector apply(const Vector& x) const;

  /// Linear part of an affine-linear map, if the map has one.
  std::optional<Matrix> linear_part() const;

  std::string describe() const;

  static constexpr double kAffineNormSlack = 1e-9;

 private:
  Kind kind_;
};

/// (R^d; f_1, ..., f_N)
class IFSystem {
 public:
  explicit IFSystem(std::vector<MapSpec> maps);

  std::size_t size() const noexcept { return maps_.size(); }
  int alphabet() const noexcept { return static_cast<int>(maps_.size()); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<MapSpec>& maps() const noexcept { return maps_; }
  const MapSpec& map(Symbol i) const;

 private:
  std::vector<MapSpec> maps_;
  std::size_t dim_;
};

/// x_0, ..., x_n and the symbols i_1, ..., i_n that produced them.
struct Orbit {
  std::vector<Vector> points;
  std::vector<Symbol> symbols;

  std::size_t steps() const noexcept { return symbols.size(); }
};

struct Word {
  std::vector<Symbol> symbols;
};

Vector apply_map(const IFSystem& sys, Symbol i, const Vector& x);

/// f_w(x) = f_{u_l}(...f_{u_1}(x)); the first symbol acts first.
Vector apply_word(const IFSystem& sys, const Word& w, const Vector& x);

/// Runs n steps, pulling symbols from `driver`. Throws DriverExhausted when a
/// finite driver runs dry and SymbolError when the driver's symbols exceed
/// the system's alphabet.
Orbit run_orbit(const IFSystem& sys, const Vector& x0, SymbolSequence& driver, std::size_t n);
Orbit run_orbit(const IFSystem& sys, const Vector& x0, const DriverSpec& driver, std::size_t n);

/// Phi(S) = union of f_i(S) over all maps, merged within kMergeTol. No
/// closure is taken.
PointCloud hutchinson(const IFSystem& sys, const PointCloud& s);

/// Spectral norm of the linear part of f_w, or nullopt when some map along
/// the word is a convex-body projection (which has no global linear part).
std::optional<double> composition_lipschitz_exact(const IFSystem& sys, const Word& w);

struct TreeLipschitzEstimate {
  double value = 0.0;
  std::size_t pairs_evaluated = 0;
  std::size_t pairs_skipped = 0;
  bool degenerate = false;  // every sampled pair coincided
};

/// Empirical lower bound for the Lipschitz constant of f_w on the branching
/// tree {f_v(x0) : |v| <= depth}. `samples` pairs of tree nodes are drawn
/// from the seeded stream before any map is evaluated; pairs closer than
/// 1e-12 are skipped.
TreeLipschitzEstimate composition_lipschitz_on_tree(const IFSystem& sys, const Word& w, const Vector& x0,
                                                    std::size_t depth, std::size_t samples, std::uint64_t seed);

}  // namespace ifslab
