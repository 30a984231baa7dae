#pragma once

// Stochastic layer, lead-time regimes and the lost-sales base-stock simulator.

#include <cstdint>
#include <optional>
#include <random>

#include "ontoflux/kb.hpp"

namespace ontoflux {

/// Seeded generator with portable transforms on top of mt19937_64, so that a
/// seed reproduces the same sample stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal (Marsaglia polar method).
  double normal();
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

/// Gamma with rate mu (scale 1/mu) and shape r.
struct GammaParams {
  double mu = 1.0;
  double r = 1.0;

  /// Throws InvalidConfig unless mu > 0 and r > 0.
  static GammaParams make(double mu, double r);
  double mean() const noexcept { return r / mu; }
  double variance() const noexcept { return r / (mu * mu); }
  bool operator==(const GammaParams&) const = default;
};

double sample_gamma(const GammaParams& params, Rng& rng);

/// Exponential inter-arrival of a Poisson process. Throws NonPositiveRate.
double sample_poisson_interarrival(double rate, Rng& rng);

struct Adjustment {
  Time effective_delivery = 0.0;
  double adjusted_lead = 0.0;
};

/// Non-crossing rule for exogenous lead times: an order whose drawn lead would
/// deliver before its predecessor is moved onto the predecessor's delivery.
Adjustment adjust_exogenous(Time prev_delivery, Time placed_at, double drawn);

/// Erlang loss probability B(servers, offered_load).
double erlang_b(int servers, double offered_load);

enum class Regime { Exogenous, Endogenous, ExogenousIID };
enum class InventoryMetric { OnHand, Position };

const char* to_string(Regime regime) noexcept;

struct CostParams {
  double holding = 1.0;       // per item per time unit
  double lost_penalty = 10.0; // per lost demand
  double processing = 1.0;    // per completed merge
  bool operator==(const CostParams&) const = default;
};

struct SimConfig {
  Regime regime = Regime::Exogenous;
  int base_stock = 1;
  double demand_rate = 1.0;
  GammaParams lead;
  double review_period = 1.0;
  double horizon = 1000.0;
  double warmup = 0.0;
  std::uint64_t seed = 1;
  CostParams costs;
  InventoryMetric inventory_metric = InventoryMetric::OnHand;

  /// Throws InvalidConfig.
  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

struct UpdateOrder {
  std::uint64_t seq = 0;
  Time placed_at = 0.0;
  /// When the lead time was fixed: review epoch (Exogenous), service start
  /// (Endogenous) or placement (ExogenousIID).
  Time released_at = 0.0;
  double drawn_lead = 0.0;
  Time effective_delivery = 0.0;
};

struct SimStats {
  double fill_rate = 1.0;
  double avg_on_hand = 0.0;
  double long_run_avg_cost = 0.0;
  double service_time_mean = 0.0;
  double service_time_var = 0.0;
  std::uint64_t lost_count = 0;
  std::uint64_t served_count = 0;

  double loss_fraction() const noexcept {
    const auto total = lost_count + served_count;
    return total == 0 ? 0.0 : static_cast<double>(lost_count) / static_cast<double>(total);
  }
  bool operator==(const SimStats&) const = default;
};

/// Optional hooks for tests and event coupling.
class SimObserver {
 public:
  virtual ~SimObserver() = default;
  /// Called once per order, in seq order, when its delivery time is fixed.
  virtual void on_order(const UpdateOrder&) {}
  /// Called when an order is delivered.
  virtual void on_delivery(const UpdateOrder&) {}
  /// Called after every processed event.
  virtual void on_state(Time, int /*on_hand*/, int /*on_order*/) {}
};

SimStats run_simulation(const SimConfig& config, SimObserver* observer = nullptr);

}  // namespace ontoflux
