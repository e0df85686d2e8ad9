#include "ifslab/ifs.hpp"

#include <sstream>
#include <type_traits>

namespace ifslab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

MapSpec::MapSpec(Kind kind) : kind_(std::move(kind)) {
  if (const auto* a = std::get_if<maps::Affine>(&kind_)) {
    if (a->linear.rows() != a->linear.cols() || a->linear.rows() == 0) {
      throw ValidationError("Affine map: linear part must be a nonempty square matrix");
    }
    if (a->shift.dim() != a->linear.rows()) {
      throw DimensionError(a->linear.rows(), a->shift.dim(), "Affine map shift");
    }
    const double norm = spectral_norm(a->linear).value;
    if (norm > 1.0 + kAffineNormSlack) {
      std::ostringstream os;
      os.precision(17);
      os << "Affine map: spectral norm " << norm << " exceeds 1 (map is not nonexpansive)";
      throw ValidationError(os.str());
    }
  }
}

MapSpec MapSpec::hyperplane(Vector normal, double offset) {
  return MapSpec(maps::HyperplaneProjection{Hyperplane(std::move(normal), offset)});
}

MapSpec MapSpec::subspace(AffineSubspace s) { return MapSpec(maps::SubspaceProjection{std::move(s)}); }

MapSpec MapSpec::convex(ConvexBody body) { return MapSpec(maps::ConvexProjection{std::move(body)}); }

MapSpec MapSpec::affine(Matrix linear, Vector shift) {
  return MapSpec(maps::Affine{std::move(linear), std::move(shift)});
}

std::size_t MapSpec::dim() const noexcept {
  return std::visit(Overloaded{
                        [](const maps::HyperplaneProjection& m) { return m.plane.dim(); },
                        [](const maps::SubspaceProjection& m) { return m.subspace.dim(); },
                        [](const maps::ConvexProjection& m) { return m.body.dim(); },
                        [](const maps::Affine& m) { return m.shift.dim(); },
                    },
                    kind_);
}

Vector MapSpec::apply(const Vector& x) const {
  return std::visit(Overloaded{
                        [&](const maps::HyperplaneProjection& m) { return project_hyperplane(x, m.plane); },
                        [&](const maps::SubspaceProjection& m) { return project_affine_subspace(x, m.subspace); },
                        [&](const maps::ConvexProjection& m) { return project_convex(x, m.body); },
                        [&](const maps::Affine& m) { return m.linear * x + m.shift; },
                    },
                    kind_);
}

std::optional<Matrix> MapSpec::linear_part() const {
  return std::visit(
      Overloaded{
          [](const maps::HyperplaneProjection& m) -> std::optional<Matrix> {
            // I - a a^T / |a|^2
            const Vector& a = m.plane.normal();
            const std::size_t d = a.dim();
            const double inv = 1.0 / a.norm_squared();
            Matrix p = Matrix::identity(d);
            for (std::size_t i = 0; i < d; ++i)
              for (std::size_t j = 0; j < d; ++j) p(i, j) -= a[i] * a[j] * inv;
            return p;
          },
          [](const maps::SubspaceProjection& m) -> std::optional<Matrix> {
            const std::size_t d = m.subspace.dim();
            Matrix p(d, d);
            for (const auto& e : m.subspace.basis())
              for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) p(i, j) += e[i] * e[j];
            return p;
          },
          [](const maps::ConvexProjection&) -> std::optional<Matrix> { return std::nullopt; },
          [](const maps::Affine& m) -> std::optional<Matrix> { return m.linear; },
      },
      kind_);
}

std::string MapSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  auto vec = [&os](const Vector& v) {
    os << '(';
    for (std::size_t i = 0; i < v.dim(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
  };
  std::visit(Overloaded{
                 [&](const maps::HyperplaneProjection& m) {
                   os << "hyperplane a=";
                   vec(m.plane.normal());
                   os << " b=" << m.plane.offset();
                 },
                 [&](const maps::SubspaceProjection& m) {
                   os << "subspace anchor=";
                   vec(m.subspace.anchor());
                   os << " rank=" << m.subspace.basis().size();
                 },
                 [&](const maps::ConvexProjection& m) {
                   const auto& s = m.body.shape();
                   if (std::holds_alternative<Halfspace>(s)) os << "halfspace";
                   else if (std::holds_alternative<Ball>(s)) os << "ball";
                   else os << "box";
                 },
                 [&](const maps::Affine& m) {
                   os << "affine shift=";
                   vec(m.shift);
                 },
             },
             kind_);
  return os.str();
}

// ---------------------------------------------------------------------------

IFSystem::IFSystem(std::vector<MapSpec> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) throw ValidationError("IFSystem: at least one map is required");
  dim_ = maps_.front().dim();
  for (std::size_t i = 1; i < maps_.size(); ++i) {
    if (maps_[i].dim() != dim_) {
      throw DimensionError(dim_, maps_[i].dim(), "IFSystem map " + std::to_string(i + 1));
    }
  }
}

const MapSpec& IFSystem::map(Symbol i) const {
  if (i < 1 || static_cast<std::size_t>(i) > maps_.size()) {
    throw SymbolError("symbol " + std::to_string(i) + " outside 1.." + std::to_string(maps_.size()));
  }
  return maps_[static_cast<std::size_t>(i - 1)];
}

Vector apply_map(const IFSystem& sys, Symbol i, const Vector& x) {
  const MapSpec& f = sys.map(i);
  if (x.dim() != sys.dim()) throw DimensionError(sys.dim(), x.dim(), "apply_map");
  return f.apply(x);
}

Vector apply_word(const IFSystem& sys, const Word& w, const Vector& x) {
  Vector y = x;
  for (Symbol s : w.symbols) y = apply_map(sys, s, y);
  return y;
}

Orbit run_orbit(const IFSystem& sys, const Vector& x0, SymbolSequence& driver, std::size_t n) {
  if (x0.dim() != sys.dim()) throw DimensionError(sys.dim(), x0.dim(), "run_orbit x0");
  Orbit orbit;
  orbit.points.reserve(n + 1);
  orbit.symbols.reserve(n);
  orbit.points.push_back(x0);
  for (std::size_t k = 0; k < n; ++k) {
    const Symbol s = driver.next();
    orbit.points.push_back(sys.map(s).apply(orbit.points.back()));
    orbit.symbols.push_back(s);
  }
  return orbit;
}

Orbit run_orbit(const IFSystem& sys, const Vector& x0, const DriverSpec& driver, std::size_t n) {
  SymbolSequence seq(driver);
  return run_orbit(sys, x0, seq, n);
}

PointCloud hutchinson(const IFSystem& sys, const PointCloud& s) {
  if (s.empty()) throw ValidationError("hutchinson: empty input cloud");
  if (s.dim() != sys.dim()) throw DimensionError(sys.dim(), s.dim(), "hutchinson");
  PointCloud out(sys.dim());
  for (const auto& f : sys.maps())
    for (const auto& p : s.points()) out.insert(f.apply(p));
  return out;
}

std::optional<double> composition_lipschitz_exact(const IFSystem& sys, const Word& w) {
  if (w.symbols.empty()) throw ValidationError("composition_lipschitz_exact: empty word");
  Matrix product = Matrix::identity(sys.dim());
  for (Symbol s : w.symbols) {
    auto lin = sys.map(s).linear_part();
    if (!lin) return std::nullopt;
    product = *lin * product;
  }
  return spectral_norm(product, 1e-12, 10000).value;
}

TreeLipschitzEstimate composition_lipschitz_on_tree(const IFSystem& sys, const Word& w, const Vector& x0,
                                                    std::size_t depth, std::size_t samples,
                                                    std::uint64_t seed) {
  if (samples < 2) throw ValidationError("composition_lipschitz_on_tree: samples must be at least 2");
  if (w.symbols.empty()) throw ValidationError("composition_lipschitz_on_tree: empty word");
  for (Symbol s : w.symbols) sys.map(s);  // range check before sampling
  if (x0.dim() != sys.dim()) throw DimensionError(sys.dim(), x0.dim(), "composition_lipschitz_on_tree");

  // The whole list of node addresses is drawn first, so the sample set is a
  // function of the seed alone.
  SplitMix64 rng(seed);
  const auto n = static_cast<std::uint64_t>(sys.size());
  auto draw_word = [&] {
    Word v;
    const auto len = rng.next_below(static_cast<std::uint64_t>(depth) + 1);
    for (std::uint64_t k = 0; k < len; ++k) v.symbols.push_back(static_cast<Symbol>(rng.next_below(n)) + 1);
    return v;
  };
  std::vector<std::pair<Word, Word>> pairs;
  pairs.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    Word a = draw_word();
    Word b = draw_word();
    pairs.emplace_back(std::move(a), std::move(b));
  }

  TreeLipschitzEstimate est;
  for (const auto& [a, b] : pairs) {
    const Vector p = apply_word(sys, a, x0);
    const Vector q = apply_word(sys, b, x0);
    const double d = distance(p, q);
    if (d < 1e-12) {
      ++est.pairs_skipped;
      continue;
    }
    ++est.pairs_evaluated;
    const double ratio = distance(apply_word(sys, w, p), apply_word(sys, w, q)) / d;
    if (ratio > est.value) est.value = ratio;
  }
  est.degenerate = est.pairs_evaluated == 0;
  return est;
}

}  // namespace ifslab
