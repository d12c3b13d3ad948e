#include "pcula/sampler.hpp"

#include "pcula/errors.hpp"

#include <cmath>
#include <sstream>

namespace pcula {

std::vector<std::string> ChainConfig::validate() const {
  std::vector<std::string> errs;
  if (!(sigma > 0.0) || !std::isfinite(sigma)) errs.emplace_back("sigma > 0 required");
  if (!(h > 0.0) || !std::isfinite(h)) errs.emplace_back("h > 0 required");
  if (steps < 1) errs.emplace_back("steps >= 1 required");
  if (thin < 1) errs.emplace_back("thin >= 1 required");
  if (burn_in && steps >= 1 && *burn_in >= steps)
    errs.emplace_back("burn_in < steps required");
  if (initial) {
    if (initial->size() != potential.dimension())
      errs.emplace_back("initial point has dimension " +
                        std::to_string(initial->size()) + ", domain has " +
                        std::to_string(potential.dimension()));
    else if (!initial->allFinite())
      errs.emplace_back("initial point must be finite");
  }
  return errs;
}

void ChainConfig::check() const {
  auto errs = validate();
  if (!errs.empty()) throw ConfigError(std::move(errs));
}

Point ChainConfig::initial_point() const {
  if (initial) return *initial;
  return potential.domain().project(Point::Zero(potential.dimension())).point;
}

std::uint64_t ChainConfig::effective_burn_in() const {
  return burn_in ? *burn_in : steps / 10;
}

double ChainConfig::max_stable_step() const {
  const auto c = potential.constants();
  return 1.0 / (c.m + c.lipschitz);
}

std::optional<std::string> ChainConfig::stability_warning() const {
  if (h <= max_stable_step()) return std::nullopt;
  std::ostringstream os;
  os << "step size h = " << h << " exceeds 1/(m + L_n) = " << max_stable_step();
  return os.str();
}

ChainState initial_state(const ChainConfig& cfg) {
  return ChainState{cfg.initial_point(), 0, NormalStream(cfg.seed, cfg.stream)};
}

namespace {

// In-place update; xi is overwritten with the drawn noise when draw is set.
void advance(ChainState& s, const ChainConfig& cfg, Point& xi, bool draw) {
  if (draw) s.rng.fill(xi);
  Point grad = cfg.potential.gradient(s.position);
  const double scale = cfg.sigma * std::sqrt(cfg.h);
  s.position = s.position + (-cfg.h) * grad + scale * xi;
  ++s.step_index;
  if (!s.position.allFinite()) throw DivergenceError(s.step_index);
}

class SampleRecorder {
 public:
  SampleRecorder(const ChainConfig& cfg, Eigen::Index d)
      : burn_in_(cfg.effective_burn_in()), thin_(cfg.thin) {
    const auto count = (cfg.steps - burn_in_) / thin_;
    samples_.resize(d, static_cast<Eigen::Index>(count));
  }

  void offer(const ChainState& s) {
    if (s.step_index <= burn_in_) return;
    if ((s.step_index - burn_in_) % thin_ != 0) return;
    if (next_ < samples_.cols()) samples_.col(next_++) = s.position;
  }

  Trajectory finish(ChainState final_state) && {
    Trajectory t;
    t.samples = std::move(samples_);
    t.first_step = burn_in_ + thin_;
    t.thin = thin_;
    t.final_state = std::move(final_state);
    return t;
  }

 private:
  std::uint64_t burn_in_;
  std::uint64_t thin_;
  Eigen::MatrixXd samples_;
  Eigen::Index next_ = 0;
};

}  // namespace

ChainState pcula_step(const ChainState& state, const ChainConfig& cfg) {
  if (state.position.size() != cfg.potential.dimension())
    throw DimensionMismatch("pcula_step", cfg.potential.dimension(),
                            state.position.size());
  ChainState next = state;
  Point xi(state.position.size());
  advance(next, cfg, xi, true);
  return next;
}

ChainState pcula_step(const ChainState& state, const ChainConfig& cfg,
                      const Point& xi) {
  if (state.position.size() != cfg.potential.dimension())
    throw DimensionMismatch("pcula_step", cfg.potential.dimension(),
                            state.position.size());
  if (xi.size() != state.position.size())
    throw DimensionMismatch("pcula_step noise", state.position.size(), xi.size());
  ChainState next = state;
  Point noise = xi;
  advance(next, cfg, noise, false);
  return next;
}

Trajectory run_chain(const ChainConfig& cfg) {
  cfg.check();
  ChainState s = initial_state(cfg);
  const auto d = s.position.size();
  SampleRecorder rec(cfg, d);
  Point xi(d);
  for (std::uint64_t k = 0; k < cfg.steps; ++k) {
    advance(s, cfg, xi, true);
    rec.offer(s);
  }
  return std::move(rec).finish(std::move(s));
}

CoupledRun run_coupled(const ChainConfig& a, const ChainConfig& b) {
  a.check();
  b.check();
  std::vector<std::string> errs;
  if (a.h != b.h) errs.emplace_back("coupled chains must share h");
  if (a.sigma != b.sigma) errs.emplace_back("coupled chains must share sigma");
  if (a.steps != b.steps) errs.emplace_back("coupled chains must share steps");
  if (a.seed != b.seed || a.stream != b.stream)
    errs.emplace_back("coupled chains must share the noise seed and stream");
  if (!(a.potential == b.potential))
    errs.emplace_back("coupled chains must share the potential");
  if (a.effective_burn_in() != b.effective_burn_in() || a.thin != b.thin)
    errs.emplace_back("coupled chains must share burn_in and thin");
  if (!errs.empty()) throw ConfigError(std::move(errs));

  ChainState sa = initial_state(a);
  ChainState sb = initial_state(b);
  const auto d = sa.position.size();
  SampleRecorder ra(a, d), rb(b, d);
  CoupledRun out;
  out.distances.reserve(a.steps + 1);
  out.distances.push_back((sa.position - sb.position).norm());
  Point xi(d);
  for (std::uint64_t k = 0; k < a.steps; ++k) {
    advance(sa, a, xi, true);
    sb.rng = sa.rng;
    advance(sb, b, xi, false);
    ra.offer(sa);
    rb.offer(sb);
    out.distances.push_back((sa.position - sb.position).norm());
  }
  out.a = std::move(ra).finish(std::move(sa));
  out.b = std::move(rb).finish(std::move(sb));
  return out;
}

Trajectory projected_euler_chain(const ChainConfig& cfg) {
  cfg.check();
  const Potential& g = cfg.potential.base();
  const ConvexDomain& dom = cfg.potential.domain();
  ChainState s = initial_state(cfg);
  const auto d = s.position.size();
  SampleRecorder rec(cfg, d);
  Point xi(d);
  const double scale = cfg.sigma * std::sqrt(cfg.h);
  for (std::uint64_t k = 0; k < cfg.steps; ++k) {
    s.rng.fill(xi);
    Point grad = g.gradient(s.position);
    Point free_step = s.position + (-cfg.h) * grad + scale * xi;
    auto r = dom.project(free_step);
    if (cfg.potential.strict() && !r.converged)
      throw ProjectionNotConverged(r.warning);
    s.position = std::move(r.point);
    ++s.step_index;
    if (!s.position.allFinite()) throw DivergenceError(s.step_index);
    rec.offer(s);
  }
  return std::move(rec).finish(std::move(s));
}

}  // namespace pcula
