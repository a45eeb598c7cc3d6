#include "fsmix/baselines.hpp"

namespace fsmix {

OgdState OgdState::init(const DomainSpec& domain, StepSchedule schedule) {
  const double size = std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ConstantStep>) return s.eta;
        else return s.c;
      },
      schedule);
  if (!(size > 0.0) || !std::isfinite(size)) throw ArgumentError("ogd: step parameter must be positive");
  return {domain.center, schedule, 1};
}

double OgdState::step_size() const {
  if (const auto* c = std::get_if<ConstantStep>(&schedule)) return c->eta;
  return std::get<InverseTStep>(schedule).c / round;
}

OgdState ogd_step(OgdState s, const Vector& g, const DomainSpec& domain) {
  if (g.size() != s.w.size()) throw DimensionError("ogd: gradient dimension mismatch");
  if (!g.allFinite()) throw ArgumentError("ogd: non-finite gradient");
  if (!g.isZero(0.0)) s.w = domain.project(s.w - s.step_size() * g);
  ++s.round;
  return s;
}

EnsembleState static_ew(const LossSpec& spec, const DomainSpec& domain, int horizon) {
  return EnsembleState::with_share(spec, domain, horizon, 0.0);
}

}  // namespace fsmix
