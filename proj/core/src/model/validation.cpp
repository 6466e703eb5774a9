#include "levypde/model/validation.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "levypde/noise/philox.hpp"

namespace levypde::model {

namespace {

struct Worst {
  double viol = -1e300;
  double at_u = 0.0, at_v = 0.0;
  void offer(double v, double u, double w) {
    if (v > viol) {
      viol = v;
      at_u = u;
      at_v = w;
    }
  }
};

AssumptionCheck close(const std::string& id, const std::string& what,
                      const Worst& w, double tol, const std::string& note = "") {
  AssumptionCheck c;
  c.id = id;
  c.what = what;
  c.worst = std::max(0.0, w.viol);
  c.at_u = w.at_u;
  c.at_v = w.at_v;
  c.pass = w.viol <= tol;
  c.note = note;
  return c;
}

}  // namespace

const AssumptionCheck* AssumptionReport::find(const std::string& id) const {
  for (auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string AssumptionReport::to_json() const {
  nlohmann::json j;
  j["all_pass"] = all_pass;
  j["seed"] = seed;
  j["probe_count"] = probe_count;
  j["checks"] = nlohmann::json::array();
  for (auto& c : checks) {
    nlohmann::json e;
    e["id"] = c.id;
    e["what"] = c.what;
    e["pass"] = c.pass;
    e["worst_violation"] = c.worst;
    e["at_u"] = c.at_u;
    e["at_v"] = c.at_v;
    if (!c.note.empty()) e["note"] = c.note;
    j["checks"].push_back(e);
  }
  return j.dump(2);
}

AssumptionReport validate_assumptions(const ProblemSpec& spec, int probe_count,
                                      std::uint64_t seed) {
  if (probe_count < 100)
    throw std::invalid_argument("assumption audit needs >= 100 probes");
  if (spec.mark.rate < 0.0)
    throw std::invalid_argument("jump rate must be >= 0");

  const double tol = 1e-9;
  const double R = spec.range_bound;
  const double S = spec.state_bound;
  noise::CounterRng rng(seed, 0, noise::Stream::kProbe);
  // Lipschitz claims hold over the state range their constants were
  // computed on; monotonicity and bound claims are probed over the full
  // declared range.
  std::vector<double> probe(probe_count), probe_s(probe_count);
  for (int i = 0; i < probe_count; ++i) {
    probe[i] = -R + 2.0 * R * rng.uniform(static_cast<std::uint64_t>(i));
    probe_s[i] =
        -S + 2.0 * S * rng.uniform(static_cast<std::uint64_t>(i + probe_count));
  }

  AssumptionReport rep;
  rep.seed = seed;
  rep.probe_count = probe_count;

  // A1: integrable data. The audit grid spans the data support generously.
  {
    Worst w;
    double hw = std::max(2.0, std::abs(spec.u0.center) + 8.0 * spec.u0.width);
    int n = 256;
    double dx = 2.0 * hw / n;
    double mass = 0.0;
    bool finite = true;
    for (int i = 0; i < n; ++i) {
      double x = -hw + (i + 0.5) * dx;
      double v = spec.dim == 1 ? spec.u0.value(x) : spec.u0.value(x, 0.0);
      if (!std::isfinite(v)) finite = false;
      mass += std::abs(v) * dx;
    }
    w.offer(finite && std::isfinite(mass) ? 0.0 : 1.0, mass, 0.0);
    rep.checks.push_back(close("A1", "u0 in L1 (finite grid mass)", w, tol,
                               "grid mass " + std::to_string(mass)));
  }

  // A2: Phi(0) = 0, nondecreasing, Lipschitz.
  {
    Worst w;
    w.offer(std::abs(spec.phi.value(0.0)), 0.0, 0.0);
    for (int i = 0; i < probe_count; ++i) {
      w.offer(-spec.phi.deriv(probe[i]), probe[i], 0.0);
      if (i + 1 < probe_count) {
        double u = probe_s[i], v = probe_s[i + 1];
        w.offer(std::abs(spec.phi.value(u) - spec.phi.value(v)) -
                    spec.lip_phi * std::abs(u - v) * (1.0 + tol),
                u, v);
      }
    }
    rep.checks.push_back(
        close("A2", "Phi nondecreasing Lipschitz with Phi(0) = 0", w, tol));
  }

  // A3: f(0) = 0 componentwise, Lipschitz (l1 sum).
  {
    Worst w;
    for (int k = 0; k < spec.dim; ++k)
      w.offer(std::abs(spec.flux.value(0.0, k)), 0.0, 0.0);
    for (int i = 0; i + 1 < probe_count; ++i) {
      double u = probe_s[i], v = probe_s[i + 1];
      double s = 0.0;
      for (int k = 0; k < spec.dim; ++k)
        s += std::abs(spec.flux.value(u, k) - spec.flux.value(v, k));
      w.offer(s - spec.lip_flux_sum * std::abs(u - v) * (1.0 + tol), u, v);
    }
    rep.checks.push_back(
        close("A3", "f Lipschitz with f(0) = 0", w, tol,
              "Lipschitz constants over the state range"));
  }

  // A4: sigma(0) = 0, Lipschitz.
  {
    Worst w;
    w.offer(std::abs(spec.sigma.value(0.0)), 0.0, 0.0);
    for (int i = 0; i + 1 < probe_count; ++i) {
      double u = probe_s[i], v = probe_s[i + 1];
      w.offer(std::abs(spec.sigma.value(u) - spec.sigma.value(v)) -
                  spec.lip_sigma * std::abs(u - v) * (1.0 + tol),
              u, v);
    }
    rep.checks.push_back(
        close("A4", "sigma Lipschitz with sigma(0) = 0", w, tol));
  }

  // A5: eta(0, z) = 0 and |eta(u,z) - eta(v,z)| <= L |u-v| h(z).
  {
    Worst w;
    for (double z : spec.mark.coarse_nodes)
      w.offer(std::abs(spec.eta(0.0, z)), 0.0, z);
    for (int i = 0; i + 1 < probe_count; ++i) {
      double u = probe_s[i], v = probe_s[i + 1];
      for (double z : spec.mark.coarse_nodes) {
        double hz = spec.jump_profile.value(z);
        w.offer(std::abs(spec.eta(u, z) - spec.eta(v, z)) -
                    spec.lip_jump * std::abs(u - v) * hz * (1.0 + tol) - 1e-12,
                u, z);
      }
    }
    rep.checks.push_back(
        close("A5", "eta(0; z) = 0 and eta Lipschitz against h(z)", w, tol));
  }

  // A6: eta nondecreasing in u.
  {
    Worst w;
    for (int i = 0; i + 1 < probe_count; ++i) {
      double u = std::min(probe[i], probe[i + 1]);
      double v = std::max(probe[i], probe[i + 1]);
      for (double z : spec.mark.coarse_nodes)
        w.offer(spec.eta(u, z) - spec.eta(v, z), u, z);
    }
    rep.checks.push_back(close("A6", "eta nondecreasing in u", w, tol));
  }

  // A7: declared bounds |sigma| <= sigma_b, |eta| <= eta_b h(z).
  {
    Worst w;
    for (int i = 0; i < probe_count; ++i) {
      double u = probe[i];
      w.offer(std::abs(spec.sigma.value(u)) - spec.sigma_bound, u, 0.0);
      for (double z : spec.mark.coarse_nodes)
        w.offer(std::abs(spec.eta(u, z)) -
                    spec.jump_bound * spec.jump_profile.value(z),
                u, z);
    }
    rep.checks.push_back(
        close("A7", "noise amplitudes within declared bounds", w, tol));
  }

  rep.all_pass = true;
  for (auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

}  // namespace levypde::model
