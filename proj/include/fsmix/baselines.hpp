#pragma once

#include <variant>

#include "fsmix/ensemble.hpp"

namespace fsmix {

struct ConstantStep {
  double eta = 0.1;
};

/// eta_t = c / t.
struct InverseTStep {
  double c = 1.0;
};

using StepSchedule = std::variant<ConstantStep, InverseTStep>;

struct OgdState {
  Vector w;
  StepSchedule schedule;
  int round = 1;

  static OgdState init(const DomainSpec& domain, StepSchedule schedule);
  double step_size() const;
};

/// w' = project(w - eta_t g). Throws ArgumentError on a non-finite gradient.
OgdState ogd_step(OgdState s, const Vector& g, const DomainSpec& domain);

/// The ensemble with mu = 0: one base learner, no newborns.
EnsembleState static_ew(const LossSpec& spec, const DomainSpec& domain, int horizon);

}  // namespace fsmix
