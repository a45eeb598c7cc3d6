#pragma once

// Shared vocabulary: losses, the feasible ball, data records and regret
// accounting. Everything here is an immutable value type.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fsmix/errors.hpp"

namespace fsmix {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class LossKind { Squared1D, LeastSquares, Logistic, GenericExpConcave };

const char* to_string(LossKind kind);

/// A loss family together with its mixability (or exp-concavity) coefficient.
///
/// Squared1D and LeastSquares evaluate (z - y)^2 with labels in [-B, B] and
/// are 1/(2B^2)-mixable; Logistic evaluates log(1 + exp(-y z)) with labels in
/// {-1, +1} and is 1-mixable. GenericExpConcave only carries (eta, G) for the
/// projected surrogate learner; it has no closed-form evaluation.
struct LossSpec {
  LossKind kind = LossKind::Squared1D;
  double eta = 0.5;
  double B = 1.0;
  double G = 1.0;
  std::optional<double> beta;  // smoothness, metadata only

  static LossSpec squared_1d(double B, std::optional<double> eta = std::nullopt);
  static LossSpec least_squares(double B, std::optional<double> eta = std::nullopt);
  static LossSpec logistic(std::optional<double> eta = std::nullopt);
  static LossSpec generic_exp_concave(double eta, double G);

  /// Throws ArgumentError when a coefficient is non-positive or non-finite.
  void validate() const;
};

/// Euclidean ball {w : ||w - center|| <= R}.
struct DomainSpec {
  int d = 1;
  double R = 1.0;
  Vector center;

  DomainSpec() = default;
  DomainSpec(int dim, double radius);
  DomainSpec(int dim, double radius, Vector c);

  double diameter() const { return 2.0 * R; }
  bool contains(const Vector& w) const;
  Vector project(const Vector& w) const;
};

struct DataPoint {
  Vector x;
  double y = 0.0;
};

struct ComparatorSequence {
  std::vector<Vector> u;

  /// True when every element lies in the domain.
  bool within(const DomainSpec& domain) const;
};

struct RegretReport {
  std::vector<double> learner_loss;
  std::vector<double> comparator_loss;
  std::vector<double> cum_dynamic_regret;
  double path_length = 0.0;

  double final_regret() const {
    return cum_dynamic_regret.empty() ? 0.0 : cum_dynamic_regret.back();
  }
};

/// Feature actually used by the loss: the implicit scalar 1 for Squared1D,
/// the point's x otherwise.
Vector effective_feature(const LossSpec& spec, const DataPoint& point);

/// Throws LabelRangeError when the label is inadmissible for the family.
void check_label(const LossSpec& spec, double y);

/// Loss of a scalar prediction (score for logistic).
double loss_eval(const LossSpec& spec, double prediction, const DataPoint& point);

/// Loss of a weight vector, evaluated at the score w^T x.
double loss_eval(const LossSpec& spec, const Vector& w, const DataPoint& point);

/// log(1 + exp(-margin)) without overflow.
double logistic_loss(double margin);
double sigmoid(double z);

/// Sum of consecutive Euclidean steps; 0 for a single element.
double path_length(const ComparatorSequence& seq);

RegretReport dynamic_regret(const std::vector<double>& learner_losses,
                            const std::vector<double>& comparator_losses);

}  // namespace fsmix
