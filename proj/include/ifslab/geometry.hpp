#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <variant>
#include <vector>

#include "ifslab/errors.hpp"

namespace ifslab {

/// Point of R^d. Coordinates are always finite; the constructor rejects
/// NaN and infinities.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<double> coords);
  Vector(std::initializer_list<double> coords);

  static Vector zeros(std::size_t dim);
  static Vector unit(std::size_t dim, std::size_t axis);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  double dot(const Vector& other) const;
  double norm() const;
  double norm_squared() const;

  Vector operator+(const Vector& other) const;
  Vector operator-(const Vector& other) const;
  Vector operator*(double s) const;
  friend Vector operator*(double s, const Vector& v) { return v * s; }

  bool operator==(const Vector& other) const = default;

 private:
  struct Unchecked {};
  Vector(std::vector<double> coords, Unchecked) : coords_(std::move(coords)) {}

  std::vector<double> coords_;
};

void require_same_dim(const Vector& a, const Vector& b, const char* where);

/// Euclidean distance.
double distance(const Vector& x, const Vector& y);

/// {x : normal . x = offset}
class Hyperplane {
 public:
  // Throws ValidationError when |normal| < 1e-12.
  Hyperplane(Vector normal, double offset);

  const Vector& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }
  std::size_t dim() const noexcept { return normal_.dim(); }

  /// Signed violation a.x - b.
  double residual(const Vector& x) const;

 private:
  Vector normal_;
  double offset_;
};

/// anchor + span(basis) with an orthonormal basis. An empty basis is a single
/// point.
class AffineSubspace {
 public:
  // Basis must already be orthonormal to within 1e-10.
  AffineSubspace(Vector anchor, std::vector<Vector> basis);

  /// Orthonormalizes the spanning set first; dependent directions are dropped.
  static AffineSubspace from_spanning_set(Vector anchor, const std::vector<Vector>& directions);

  /// {x : rows[k] . x = rhs[k] for all k}. The anchor is the least-norm
  /// solution and the basis spans the orthogonal complement of the row space.
  /// Throws ValidationError for inconsistent constraints.
  static AffineSubspace from_constraints(const std::vector<Vector>& rows,
                                         const std::vector<double>& rhs);

  const Vector& anchor() const noexcept { return anchor_; }
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return anchor_.dim(); }

 private:
  Vector anchor_;
  std::vector<Vector> basis_;
};

/// {x : normal . x <= offset}
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

struct Box {
  Vector lower;
  Vector upper;
};

/// Closed convex set with an explicit nearest-point map.
class ConvexBody {
 public:
  using Shape = std::variant<Halfspace, Ball, Box>;

  // Validates the shape: nonzero halfspace normal, positive radius,
  // lower <= upper componentwise, consistent dimensions.
  explicit ConvexBody(Shape shape);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t dim() const noexcept;
  bool contains(const Vector& x, double tol = 1e-12) const;

 private:
  Shape shape_;
};

Vector project_hyperplane(const Vector& x, const Hyperplane& h);
Vector project_affine_subspace(const Vector& x, const AffineSubspace& s);
Vector project_convex(const Vector& x, const ConvexBody& k);

/// Modified Gram-Schmidt with reorthogonalization. Vectors whose residual
/// norm after deflation falls below 1e-10 are dropped.
std::vector<Vector> orthonormalize(std::span<const Vector> vectors);

inline constexpr double kDegenerateNormal = 1e-12;
inline constexpr double kDependenceThreshold = 1e-10;
inline constexpr double kOrthonormalTol = 1e-10;

}  // namespace ifslab
