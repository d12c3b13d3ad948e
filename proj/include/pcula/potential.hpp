#pragma once

#include "pcula/domain.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace pcula {

/// Differentiable energy g together with its strong-convexity constant m and
/// gradient-Lipschitz constant L. The target density is proportional to
/// exp(-2 g / sigma^2), so Quadratic(alpha) at sigma = 1 is the centered
/// Gaussian with precision alpha * I.
class Potential {
 public:
  using ValueFn = std::function<double(const Point&)>;
  using GradientFn = std::function<Point(const Point&)>;

  enum class Kind { Quadratic, GaussianCentered, Custom };

  /// g(x) = (alpha / 4) |x|^2, valid in any dimension.
  static Potential quadratic(double alpha);

  /// g(x) = x^T P x / 4 for a symmetric positive definite precision P.
  static Potential gaussian_centered(Eigen::MatrixXd precision);

  /// User-supplied g. Both callbacks must be safe to call concurrently.
  static Potential custom(ValueFn value, GradientFn gradient, double m,
                          double lipschitz, std::string label = "custom");

  Kind kind() const noexcept { return kind_; }
  double value(const Point& x) const;
  Point gradient(const Point& x) const;

  double strong_convexity() const noexcept { return m_; }
  double lipschitz() const noexcept { return lipschitz_; }

  /// Fixed dimension for GaussianCentered; empty when any dimension works.
  std::optional<Eigen::Index> dimension() const;

  double alpha() const noexcept { return alpha_; }
  const Eigen::MatrixXd& precision() const noexcept { return precision_; }
  const std::string& label() const noexcept { return label_; }

  /// Structural equality; Custom potentials compare by callback identity.
  friend bool operator==(const Potential& a, const Potential& b);

 private:
  Potential() = default;

  struct Callbacks {
    ValueFn value;
    GradientFn gradient;
  };

  Kind kind_ = Kind::Quadratic;
  double alpha_ = 0.0;
  Eigen::MatrixXd precision_;
  std::shared_ptr<const Callbacks> callbacks_;
  double m_ = 0.0;
  double lipschitz_ = 0.0;
  std::string label_;
};

struct CurvatureConstants {
  double m;
  double lipschitz;
};

/// f_n(x) = g(x) + (n/2) dist^2(x, D).
class PenalizedPotential {
 public:
  PenalizedPotential(Potential base, ConvexDomain domain, double n,
                     bool strict = false);

  double value(const Point& x) const;
  Point gradient(const Point& x) const;

  /// (m, L + n): strong convexity is inherited from g, the penalty gradient
  /// is 1-Lipschitz.
  CurvatureConstants constants() const noexcept;

  const Potential& base() const noexcept { return base_; }
  const ConvexDomain& domain() const noexcept { return domain_; }
  double penalty() const noexcept { return n_; }
  bool strict() const noexcept { return strict_; }
  Eigen::Index dimension() const noexcept { return domain_.dimension(); }

  PenalizedPotential with_penalty(double n) const;

  friend bool operator==(const PenalizedPotential& a,
                         const PenalizedPotential& b);

 private:
  Point penalty_gradient(const Point& x) const;

  Potential base_;
  ConvexDomain domain_;
  double n_;
  bool strict_;
};

}  // namespace pcula
