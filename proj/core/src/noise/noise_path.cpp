#include "levypde/noise/noise_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levypde/noise/philox.hpp"

namespace levypde::noise {

std::pair<std::size_t, std::size_t> NoisePath::events_in_step(
    std::int64_t k) const {
  auto lo = std::lower_bound(
      jumps.begin(), jumps.end(), k,
      [](const JumpEvent& e, std::int64_t v) { return e.step < v; });
  auto hi = std::upper_bound(
      jumps.begin(), jumps.end(), k,
      [](std::int64_t v, const JumpEvent& e) { return v < e.step; });
  return {static_cast<std::size_t>(lo - jumps.begin()),
          static_cast<std::size_t>(hi - jumps.begin())};
}

NoisePath generate_path(const model::MarkMeasure& mark, double T, double dt,
                        std::uint64_t base_seed, std::uint64_t path_index) {
  if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (dt > T * (1.0 + 1e-12)) throw std::invalid_argument("dt exceeds horizon");

  NoisePath p;
  p.dt = dt;
  p.n_steps = std::max<std::int64_t>(1, std::llround(T / dt));
  p.base_seed = base_seed;
  p.path_index = path_index;

  CounterRng brown(base_seed, path_index, Stream::kBrownian);
  p.dw.resize(p.n_steps);
  double root_dt = std::sqrt(dt);
  for (std::int64_t k = 0; k < p.n_steps; ++k)
    p.dw[k] = root_dt * brown.normal(static_cast<std::uint64_t>(k));

  if (mark.rate > 0.0) {
    CounterRng clock(base_seed, path_index, Stream::kJumpTime);
    CounterRng marks(base_seed, path_index, Stream::kJumpMark);
    double t = 0.0;
    for (std::uint64_t i = 0;; ++i) {
      t += -std::log(clock.uniform(i)) / mark.rate;
      if (t > T) break;
      JumpEvent ev;
      ev.time = t;
      ev.step = std::min<std::int64_t>(p.n_steps - 1,
                                       static_cast<std::int64_t>(t / dt));
      ev.mark = mark.sample(marks.uniform(i));
      p.jumps.push_back(ev);
    }
  }
  return p;
}

double compensator(const model::ProblemSpec& spec, double u) {
  if (!spec.has_jumps()) return 0.0;
  return spec.eta_profile(u) * spec.h_mass;
}

}  // namespace levypde::noise
