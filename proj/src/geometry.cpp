#include "ifslab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

namespace ifslab {

namespace {

void require_finite(std::span<const double> coords) {
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!std::isfinite(coords[i])) {
      throw ValidationError("Vector: coordinate " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ValidationError("Vector: dimension must be positive");
  require_finite(coords_);
}

Vector::Vector(std::initializer_list<double> coords) : Vector(std::vector<double>(coords)) {}

Vector Vector::zeros(std::size_t dim) {
  if (dim == 0) throw ValidationError("Vector: dimension must be positive");
  return Vector(std::vector<double>(dim, 0.0), Unchecked{});
}

Vector Vector::unit(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw ValidationError("Vector::unit: axis out of range");
  std::vector<double> c(dim, 0.0);
  c[axis] = 1.0;
  return Vector(std::move(c), Unchecked{});
}

double Vector::dot(const Vector& other) const {
  require_same_dim(*this, other, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) s += coords_[i] * other.coords_[i];
  return s;
}

double Vector::norm_squared() const { return dot(*this); }

double Vector::norm() const {
  return std::sqrt(norm_squared());
}

Vector Vector::operator+(const Vector& other) const {
  require_same_dim(*this, other, "operator+");
  std::vector<double> c(coords_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.coords_[i];
  return Vector(std::move(c), Unchecked{});
}

Vector Vector::operator-(const Vector& other) const {
  require_same_dim(*this, other, "operator-");
  std::vector<double> c(coords_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= other.coords_[i];
  return Vector(std::move(c), Unchecked{});
}

Vector Vector::operator*(double s) const {
  std::vector<double> c(coords_);
  for (double& v : c) v *= s;
  return Vector(std::move(c), Unchecked{});
}

void require_same_dim(const Vector& a, const Vector& b, const char* where) {
  if (a.dim() != b.dim()) throw DimensionError(a.dim(), b.dim(), where);
}

double distance(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------

Hyperplane::Hyperplane(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  if (!std::isfinite(offset_)) throw ValidationError("Hyperplane: offset is not finite");
  if (normal_.norm() < kDegenerateNormal) {
    throw ValidationError("Hyperplane: normal vector is degenerate (norm < 1e-12)");
  }
}

double Hyperplane::residual(const Vector& x) const { return normal_.dot(x) - offset_; }

Vector project_hyperplane(const Vector& x, const Hyperplane& h) {
  require_same_dim(x, h.normal(), "project_hyperplane");
  const double t = h.residual(x) / h.normal().norm_squared();
  return x - h.normal() * t;
}

// ---------------------------------------------------------------------------

AffineSubspace::AffineSubspace(Vector anchor, std::vector<Vector> basis)
    : anchor_(std::move(anchor)), basis_(std::move(basis)) {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    require_same_dim(anchor_, basis_[i], "AffineSubspace");
    if (std::abs(basis_[i].norm() - 1.0) > kOrthonormalTol) {
      throw ValidationError("AffineSubspace: basis vector " + std::to_string(i) + " is not unit-norm");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(basis_[i].dot(basis_[j])) > kOrthonormalTol) {
        throw ValidationError("AffineSubspace: basis vectors " + std::to_string(j) + " and " +
                              std::to_string(i) + " are not orthogonal");
      }
    }
  }
}

AffineSubspace AffineSubspace::from_spanning_set(Vector anchor, const std::vector<Vector>& directions) {
  for (const auto& d : directions) require_same_dim(anchor, d, "AffineSubspace::from_spanning_set");
  return AffineSubspace(std::move(anchor), orthonormalize(directions));
}

AffineSubspace AffineSubspace::from_constraints(const std::vector<Vector>& rows,
                                                const std::vector<double>& rhs) {
  if (rows.empty()) throw ValidationError("AffineSubspace::from_constraints: no constraints");
  if (rows.size() != rhs.size()) {
    throw ValidationError("AffineSubspace::from_constraints: rows and rhs differ in length");
  }
  const std::size_t dim = rows.front().dim();

  // Gram-Schmidt on the rows, carrying the right-hand side through the same
  // row operations so that q_k . x = c_k describes the same set.
  std::vector<Vector> q;
  std::vector<double> c;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_same_dim(rows.front(), rows[i], "AffineSubspace::from_constraints");
    Vector r = rows[i];
    double b = rhs[i];
    const double scale = std::max(1.0, r.norm());
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < q.size(); ++k) {
        const double p = q[k].dot(r);
        r = r - q[k] * p;
        b -= c[k] * p;
      }
    }
    const double n = r.norm();
    if (n < kDependenceThreshold * scale) {
      if (std::abs(b) > 1e-9 * std::max(1.0, std::abs(rhs[i]))) {
        throw ValidationError("AffineSubspace::from_constraints: constraint " + std::to_string(i) +
                              " is inconsistent with the preceding ones");
      }
      continue;
    }
    q.push_back(r * (1.0 / n));
    c.push_back(b / n);
  }

  Vector anchor = Vector::zeros(dim);
  for (std::size_t k = 0; k < q.size(); ++k) anchor = anchor + q[k] * c[k];

  std::vector<Vector> complement;
  for (std::size_t axis = 0; axis < dim; ++axis) {
    Vector e = Vector::unit(dim, axis);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qk : q) e = e - qk * qk.dot(e);
    }
    complement.push_back(std::move(e));
  }
  return AffineSubspace(std::move(anchor), orthonormalize(complement));
}

Vector project_affine_subspace(const Vector& x, const AffineSubspace& s) {
  require_same_dim(x, s.anchor(), "project_affine_subspace");
  const Vector rel = x - s.anchor();
  Vector out = s.anchor();
  for (const auto& e : s.basis()) out = out + e * e.dot(rel);
  return out;
}

// ---------------------------------------------------------------------------

ConvexBody::ConvexBody(Shape shape) : shape_(std::move(shape)) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          if (s.normal.dim() == 0 || s.normal.norm() < kDegenerateNormal) {
            throw ValidationError("Halfspace: normal vector is degenerate");
          }
          if (!std::isfinite(s.offset)) throw ValidationError("Halfspace: offset is not finite");
        } else if constexpr (std::is_same_v<T, Ball>) {
          if (s.center.dim() == 0) throw ValidationError("Ball: center missing");
          if (!(s.radius > 0.0) || !std::isfinite(s.radius)) {
            throw ValidationError("Ball: radius must be positive");
          }
        } else {
          if (s.lower.dim() == 0) throw ValidationError("Box: bounds missing");
          require_same_dim(s.lower, s.upper, "Box");
          for (std::size_t i = 0; i < s.lower.dim(); ++i) {
            if (s.lower[i] > s.upper[i]) {
              throw ValidationError("Box: lower exceeds upper in coordinate " + std::to_string(i));
            }
          }
        }
      },
      shape_);
}

std::size_t ConvexBody::dim() const noexcept {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) return s.normal.dim();
        else if constexpr (std::is_same_v<T, Ball>) return s.center.dim();
        else return s.lower.dim();
      },
      shape_);
}

bool ConvexBody::contains(const Vector& x, double tol) const {
  if (x.dim() != dim()) throw DimensionError(dim(), x.dim(), "ConvexBody::contains");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return s.normal.dot(x) <= s.offset + tol * s.normal.norm();
        } else if constexpr (std::is_same_v<T, Ball>) {
          return distance(x, s.center) <= s.radius + tol;
        } else {
          for (std::size_t i = 0; i < x.dim(); ++i) {
            if (x[i] < s.lower[i] - tol || x[i] > s.upper[i] + tol) return false;
          }
          return true;
        }
      },
      shape_);
}

Vector project_convex(const Vector& x, const ConvexBody& k) {
  if (x.dim() != k.dim()) throw DimensionError(k.dim(), x.dim(), "project_convex");
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          const double excess = s.normal.dot(x) - s.offset;
          if (excess <= 0.0) return x;
          return x - s.normal * (excess / s.normal.norm_squared());
        } else if constexpr (std::is_same_v<T, Ball>) {
          const Vector rel = x - s.center;
          const double r = rel.norm();
          if (r <= s.radius) return x;
          return s.center + rel * (s.radius / r);
        } else {
          std::vector<double> c(x.coords().begin(), x.coords().end());
          for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::clamp(c[i], s.lower[i], s.upper[i]);
          return Vector(std::move(c));
        }
      },
      k.shape());
}

std::vector<Vector> orthonormalize(std::span<const Vector> vectors) {
  std::vector<Vector> out;
  for (const auto& v : vectors) {
    if (!out.empty()) require_same_dim(out.front(), v, "orthonormalize");
    Vector r = v;
    // two passes of modified Gram-Schmidt ("twice is enough")
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : out) r = r - e * e.dot(r);
    }
    const double n = r.norm();
    if (n < kDependenceThreshold * std::max(1.0, v.norm())) continue;
    out.push_back(r * (1.0 / n));
  }
  return out;
}

}  // namespace ifslab
