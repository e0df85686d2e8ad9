#include "ifslab/kaczmarz.hpp"

#include <algorithm>
#include <cmath>

namespace ifslab {

LinearSystem::LinearSystem(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw ValidationError("LinearSystem: at least one row is required");
  dim_ = rows_.front().coeffs.dim();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].coeffs.dim() != dim_) throw DimensionError(dim_, rows_[i].coeffs.dim(), "LinearSystem row");
    if (rows_[i].coeffs.norm() < kDegenerateNormal) {
      throw ValidationError("LinearSystem: row " + std::to_string(i + 1) + " is zero");
    }
    if (!std::isfinite(rows_[i].rhs)) {
      throw ValidationError("LinearSystem: rhs of row " + std::to_string(i + 1) + " is not finite");
    }
  }
}

double LinearSystem::residual(const Vector& x) const {
  double worst = 0.0;
  for (const auto& r : rows_) worst = std::max(worst, std::abs(r.coeffs.dot(x) - r.rhs) / r.coeffs.norm());
  return worst;
}

IFSystem system_to_ifs(const LinearSystem& sys) {
  std::vector<MapSpec> maps;
  maps.reserve(sys.size());
  for (const auto& r : sys.rows()) maps.push_back(MapSpec::hyperplane(r.coeffs, r.rhs));
  return IFSystem(std::move(maps));
}

SolveReport solve(const LinearSystem& sys, const DriverSpec& driver, const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw ValidationError("solve: tol must be positive");
  if (opts.max_iter < 1) throw ValidationError("solve: max_iter must be at least 1");
  const IFSystem ifs = system_to_ifs(sys);
  SymbolSequence seq(driver);

  Orbit orbit;
  orbit.points.push_back(opts.x0 ? *opts.x0 : Vector::zeros(sys.dim()));
  if (orbit.points.front().dim() != sys.dim()) {
    throw DimensionError(sys.dim(), orbit.points.front().dim(), "solve x0");
  }
  std::vector<double> norms{orbit.points.front().norm()};

  SolveReport rep;
  rep.residual = sys.residual(orbit.points.back());
  while (rep.residual > opts.tol && rep.iterations < opts.max_iter) {
    const Symbol s = seq.next();
    orbit.points.push_back(ifs.map(s).apply(orbit.points.back()));
    orbit.symbols.push_back(s);
    norms.push_back(orbit.points.back().norm());
    ++rep.iterations;
    rep.residual = sys.residual(orbit.points.back());
  }
  rep.converged = rep.residual <= opts.tol;
  rep.final_point = orbit.points.back();
  rep.max_norm = *std::max_element(norms.begin(), norms.end());
  rep.max_norm_first_half =
      *std::max_element(norms.begin(), norms.begin() + static_cast<std::ptrdiff_t>(rep.iterations / 2 + 1));

  if (!rep.converged) {
    const std::size_t tail = std::max<std::size_t>(1, orbit.points.size() / 5);
    OmegaEstimate est = estimate_omega(orbit, orbit.points.size() - tail, std::max(opts.tol, 1e-9));
    est.driver = driver.name();
    rep.omega = std::move(est);
  }
  return rep;
}

double gap_between(const LinearSystem& sys, std::size_t i, std::size_t j) {
  if (i >= sys.size() || j >= sys.size()) throw ValidationError("gap_between: row index out of range");
  const Row& ri = sys.rows()[i];
  const Row& rj = sys.rows()[j];
  const double ni = ri.coeffs.norm();
  const double nj = rj.coeffs.norm();
  const Vector ui = ri.coeffs * (1.0 / ni);
  const Vector uj = rj.coeffs * (1.0 / nj);
  const double cosine = ui.dot(uj);
  // sine of the angle between the normals, from the rejection of ui off uj
  const double sine = (ui - uj * cosine).norm();
  if (sine > 1e-10) return 0.0;
  const double sign = cosine >= 0.0 ? 1.0 : -1.0;
  return std::abs(ri.rhs / ni - sign * rj.rhs / nj);
}

}  // namespace ifslab
