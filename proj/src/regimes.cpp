#include "ontoflux/regimes.hpp"

#include <cmath>

#include "ontoflux/error.hpp"

namespace ontoflux {

double Rng::uniform() {
  // 53 random bits, shifted by half an ulp so 0 and 1 are never returned.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  return u * factor;
}

double Rng::exponential(double rate) { return -std::log(uniform()) / rate; }

GammaParams GammaParams::make(double mu, double r) {
  if (!(mu > 0.0) || !(r > 0.0)) throw InvalidConfig("gamma parameters must be positive");
  return GammaParams{mu, r};
}

double sample_gamma(const GammaParams& params, Rng& rng) {
  // Marsaglia & Tsang for shape >= 1; shape < 1 via Gamma(r + 1) * U^(1/r).
  const double shape = params.r < 1.0 ? params.r + 1.0 : params.r;
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  double sample;
  for (;;) {
    const double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      sample = d * v;
      break;
    }
  }
  if (params.r < 1.0) sample *= std::pow(rng.uniform(), 1.0 / params.r);
  return sample / params.mu;
}

double sample_poisson_interarrival(double rate, Rng& rng) {
  if (!(rate > 0.0)) throw NonPositiveRate("Poisson rate must be positive");
  return rng.exponential(rate);
}

Adjustment adjust_exogenous(Time prev_delivery, Time placed_at, double drawn) {
  if (!(placed_at >= 0.0) || !(drawn >= 0.0))
    throw PreconditionFailed("placement time and drawn lead must be nonnegative");
  if (placed_at + drawn >= prev_delivery) return {placed_at + drawn, drawn};
  if (prev_delivery < placed_at) throw NegativeAdjustment("adjusted lead would be negative");
  return {prev_delivery, prev_delivery - placed_at};
}

double erlang_b(int servers, double offered_load) {
  if (servers < 0 || !(offered_load >= 0.0)) throw PreconditionFailed("erlang_b needs S >= 0 and a >= 0");
  double b = 1.0;
  for (int k = 1; k <= servers; ++k) b = offered_load * b / (k + offered_load * b);
  return b;
}

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Exogenous: return "exo";
    case Regime::Endogenous: return "endo";
    case Regime::ExogenousIID: return "exo-iid";
  }
  return "?";
}

void SimConfig::validate() const {
  auto fail = [](const std::string& what) { throw InvalidConfig(what); };
  if (base_stock < 1) fail("base_stock must be >= 1");
  if (!(demand_rate >= 0.0) || !std::isfinite(demand_rate)) fail("demand_rate must be >= 0");
  if (!(lead.mu > 0.0) || !(lead.r > 0.0)) fail("lead gamma parameters must be positive");
  if (!(review_period > 0.0)) fail("review_period must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) fail("horizon must be positive");
  if (!(warmup >= 0.0) || !(warmup < horizon)) fail("warmup must satisfy 0 <= warmup < horizon");
  if (!(costs.holding >= 0.0) || !(costs.lost_penalty >= 0.0) || !(costs.processing >= 0.0))
    fail("costs must be nonnegative");
}

}  // namespace ontoflux
