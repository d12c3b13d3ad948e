#include "pcula/potential.hpp"

#include "pcula/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace pcula {

Potential Potential::quadratic(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("quadratic potential: alpha must be positive");
  Potential p;
  p.kind_ = Kind::Quadratic;
  p.alpha_ = alpha;
  p.m_ = alpha / 2.0;
  p.lipschitz_ = alpha / 2.0;
  p.label_ = "quadratic";
  return p;
}

Potential Potential::gaussian_centered(Eigen::MatrixXd precision) {
  if (precision.rows() == 0 || precision.rows() != precision.cols())
    throw InvalidArgument("gaussian potential: precision must be square");
  if (!precision.allFinite())
    throw InvalidArgument("gaussian potential: non-finite precision");
  const double scale = std::max(1.0, precision.cwiseAbs().maxCoeff());
  if ((precision - precision.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidArgument("gaussian potential: precision must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(precision,
                                                     Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0))
    throw InvalidArgument("gaussian potential: precision must be positive definite");
  Potential p;
  p.kind_ = Kind::GaussianCentered;
  p.precision_ = std::move(precision);
  p.m_ = lo / 2.0;
  p.lipschitz_ = hi / 2.0;
  p.label_ = "gaussian";
  return p;
}

Potential Potential::custom(ValueFn value, GradientFn gradient, double m,
                            double lipschitz, std::string label) {
  if (!value || !gradient)
    throw InvalidArgument("custom potential: value and gradient are required");
  if (!(m >= 0.0) || !(lipschitz > 0.0) || !std::isfinite(lipschitz))
    throw InvalidArgument("custom potential: need m >= 0 and finite L > 0");
  if (m > lipschitz)
    throw InvalidArgument("custom potential: m must not exceed L");
  Potential p;
  p.kind_ = Kind::Custom;
  p.callbacks_ = std::make_shared<const Callbacks>(
      Callbacks{std::move(value), std::move(gradient)});
  p.m_ = m;
  p.lipschitz_ = lipschitz;
  p.label_ = std::move(label);
  return p;
}

std::optional<Eigen::Index> Potential::dimension() const {
  if (kind_ == Kind::GaussianCentered) return precision_.rows();
  return std::nullopt;
}

double Potential::value(const Point& x) const {
  switch (kind_) {
    case Kind::Quadratic:
      return 0.25 * alpha_ * x.squaredNorm();
    case Kind::GaussianCentered:
      if (x.size() != precision_.rows())
        throw DimensionMismatch("potential value", precision_.rows(), x.size());
      return 0.25 * x.dot(precision_ * x);
    case Kind::Custom:
      return callbacks_->value(x);
  }
  return 0.0;
}

Point Potential::gradient(const Point& x) const {
  switch (kind_) {
    case Kind::Quadratic:
      return (0.5 * alpha_) * x;
    case Kind::GaussianCentered:
      if (x.size() != precision_.rows())
        throw DimensionMismatch("potential gradient", precision_.rows(),
                                x.size());
      return 0.5 * (precision_ * x);
    case Kind::Custom: {
      Point g = callbacks_->gradient(x);
      if (g.size() != x.size())
        throw DimensionMismatch("custom gradient", x.size(), g.size());
      return g;
    }
  }
  return Point();
}

bool operator==(const Potential& a, const Potential& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Potential::Kind::Quadratic:
      return a.alpha_ == b.alpha_;
    case Potential::Kind::GaussianCentered:
      return a.precision_.rows() == b.precision_.rows() &&
             a.precision_ == b.precision_;
    case Potential::Kind::Custom:
      return a.callbacks_ == b.callbacks_ && a.m_ == b.m_ &&
             a.lipschitz_ == b.lipschitz_;
  }
  return false;
}

PenalizedPotential::PenalizedPotential(Potential base, ConvexDomain domain,
                                       double n, bool strict)
    : base_(std::move(base)), domain_(std::move(domain)), n_(n), strict_(strict) {
  if (!(n_ >= 0.0) || !std::isfinite(n_))
    throw InvalidArgument("penalty n must be finite and nonnegative");
  if (auto d = base_.dimension(); d && *d != domain_.dimension())
    throw DimensionMismatch("penalized potential", domain_.dimension(), *d);
}

Point PenalizedPotential::penalty_gradient(const Point& x) const {
  auto r = domain_.project(x);
  if (strict_ && !r.converged) throw ProjectionNotConverged(r.warning);
  return x - r.point;
}

double PenalizedPotential::value(const Point& x) const {
  if (x.size() != dimension())
    throw DimensionMismatch("penalized value", dimension(), x.size());
  const double g = base_.value(x);
  if (n_ == 0.0) return g;
  auto r = domain_.project(x);
  if (strict_ && !r.converged) throw ProjectionNotConverged(r.warning);
  return g + 0.5 * n_ * r.squared_distance;
}

Point PenalizedPotential::gradient(const Point& x) const {
  if (x.size() != dimension())
    throw DimensionMismatch("penalized gradient", dimension(), x.size());
  Point g = base_.gradient(x);
  if (n_ == 0.0) return g;
  g += n_ * penalty_gradient(x);
  return g;
}

CurvatureConstants PenalizedPotential::constants() const noexcept {
  return {base_.strong_convexity(), base_.lipschitz() + n_};
}

PenalizedPotential PenalizedPotential::with_penalty(double n) const {
  return PenalizedPotential(base_, domain_, n, strict_);
}

bool operator==(const PenalizedPotential& a, const PenalizedPotential& b) {
  return a.n_ == b.n_ && a.strict_ == b.strict_ && a.base_ == b.base_ &&
         a.domain_ == b.domain_;
}

}  // namespace pcula
