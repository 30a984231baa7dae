// Event-driven lost-sales base-stock system.
//
// Every served unit demand drops the inventory position to S-1 and places one
// replenishment order immediately, so position (on hand + on order) stays at S.
// Lead times depend on the regime:
//   Exogenous     orders wait for the next review epoch, get a Gamma draw there
//                 and pass through adjust_exogenous (no crossing);
//   Endogenous    orders queue FIFO at a single server with Gamma service;
//   ExogenousIID  Gamma draw at placement, crossing allowed.

#include <cmath>
#include <deque>
#include <queue>
#include <vector>

#include "ontoflux/error.hpp"
#include "ontoflux/regimes.hpp"

namespace ontoflux {

namespace {

enum class EventKind { Delivery = 0, Review = 1, Demand = 2 };

struct Event {
  Time time;
  EventKind kind;
  std::uint64_t seq;  // order seq for deliveries, insertion counter otherwise

  // Min-heap on (time, kind, seq): deliveries at equal times resolve in seq order.
  bool operator>(const Event& other) const {
    if (time != other.time) return time > other.time;
    if (kind != other.kind) return kind > other.kind;
    return seq > other.seq;
  }
};

class Simulator {
 public:
  Simulator(const SimConfig& config, SimObserver* observer)
      : cfg_(config), observer_(observer), rng_(config.seed), on_hand_(config.base_stock) {}

  SimStats run() {
    if (cfg_.demand_rate > 0.0) schedule_demand(0.0);
    while (!events_.empty()) {
      const Event e = events_.top();
      if (e.time > cfg_.horizon) break;
      events_.pop();
      advance(e.time);
      switch (e.kind) {
        case EventKind::Demand: handle_demand(e.time); break;
        case EventKind::Review: handle_review(e.time); break;
        case EventKind::Delivery: handle_delivery(e.time, e.seq); break;
      }
      if (observer_) observer_->on_state(e.time, on_hand_, on_order_);
    }
    advance(cfg_.horizon);
    return stats();
  }

 private:
  void schedule(Time t, EventKind kind, std::uint64_t seq) { events_.push(Event{t, kind, seq}); }

  void schedule_demand(Time now) {
    schedule(now + sample_poisson_interarrival(cfg_.demand_rate, rng_), EventKind::Demand, counter_++);
  }

  void advance(Time t) {
    const Time from = std::max(clock_, cfg_.warmup);
    if (t > from) area_on_hand_ += static_cast<double>(on_hand_) * (t - from);
    clock_ = t;
  }

  bool measuring(Time t) const { return t >= cfg_.warmup; }

  void handle_demand(Time t) {
    if (on_hand_ > 0) {
      --on_hand_;
      if (measuring(t)) ++served_;
      place_order(t);
    } else if (measuring(t)) {
      ++lost_;
    }
    schedule_demand(t);
  }

  void place_order(Time t) {
    UpdateOrder order;
    order.seq = orders_.size();
    order.placed_at = t;
    orders_.push_back(order);
    ++on_order_;
    switch (cfg_.regime) {
      case Regime::ExogenousIID: {
        const double drawn = sample_gamma(cfg_.lead, rng_);
        release(order.seq, t, drawn, t + drawn);
        break;
      }
      case Regime::Exogenous:
        if (dormant_.empty()) {
          const double index = std::floor(t / cfg_.review_period) + 1.0;
          schedule(index * cfg_.review_period, EventKind::Review, counter_++);
        }
        dormant_.push_back(order.seq);
        break;
      case Regime::Endogenous:
        queue_.push_back(order.seq);
        if (!server_busy_) start_service(t);
        break;
    }
  }

  /// Fixes the order's delivery time and schedules it.
  void release(std::uint64_t seq, Time released_at, double drawn, Time delivery) {
    UpdateOrder& order = orders_[seq];
    order.released_at = released_at;
    order.drawn_lead = drawn;
    order.effective_delivery = delivery;
    schedule(delivery, EventKind::Delivery, seq);
    if (observer_) observer_->on_order(order);
  }

  void handle_review(Time epoch) {
    for (const auto seq : dormant_) {
      const double drawn = sample_gamma(cfg_.lead, rng_);
      const Adjustment adj = adjust_exogenous(last_delivery_, epoch, drawn);
      last_delivery_ = adj.effective_delivery;
      release(seq, epoch, drawn, adj.effective_delivery);
    }
    dormant_.clear();
  }

  void start_service(Time t) {
    const std::uint64_t seq = queue_.front();
    queue_.pop_front();
    server_busy_ = true;
    const double service = sample_gamma(cfg_.lead, rng_);
    release(seq, t, service, t + service);
  }

  void handle_delivery(Time t, std::uint64_t seq) {
    ++on_hand_;
    --on_order_;
    const UpdateOrder& order = orders_[seq];
    if (measuring(t)) ++completed_;
    if (order.placed_at >= cfg_.warmup) {
      // Welford update of realized lead time.
      const double x = t - order.placed_at;
      ++lead_n_;
      const double delta = x - lead_mean_;
      lead_mean_ += delta / static_cast<double>(lead_n_);
      lead_m2_ += delta * (x - lead_mean_);
    }
    if (observer_) observer_->on_delivery(order);
    if (cfg_.regime == Regime::Endogenous) {
      server_busy_ = false;
      if (!queue_.empty()) start_service(t);
    }
  }

  SimStats stats() const {
    const double elapsed = cfg_.horizon - cfg_.warmup;
    SimStats s;
    s.served_count = served_;
    s.lost_count = lost_;
    const auto demands = served_ + lost_;
    s.fill_rate = demands == 0 ? 1.0 : static_cast<double>(served_) / static_cast<double>(demands);
    s.avg_on_hand = cfg_.inventory_metric == InventoryMetric::Position ? static_cast<double>(cfg_.base_stock)
                                                                       : area_on_hand_ / elapsed;
    s.long_run_avg_cost = (cfg_.costs.holding * area_on_hand_ + cfg_.costs.lost_penalty * static_cast<double>(lost_) +
                           cfg_.costs.processing * static_cast<double>(completed_)) /
                          elapsed;
    s.service_time_mean = lead_n_ == 0 ? 0.0 : lead_mean_;
    s.service_time_var = lead_n_ < 2 ? 0.0 : lead_m2_ / static_cast<double>(lead_n_ - 1);
    return s;
  }

  const SimConfig& cfg_;
  SimObserver* observer_;
  Rng rng_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t counter_ = 0;
  Time clock_ = 0.0;

  int on_hand_;
  int on_order_ = 0;
  std::vector<UpdateOrder> orders_;
  std::vector<std::uint64_t> dormant_;
  std::deque<std::uint64_t> queue_;
  bool server_busy_ = false;
  Time last_delivery_ = 0.0;

  std::uint64_t served_ = 0;
  std::uint64_t lost_ = 0;
  std::uint64_t completed_ = 0;
  double area_on_hand_ = 0.0;
  std::uint64_t lead_n_ = 0;
  double lead_mean_ = 0.0;
  double lead_m2_ = 0.0;
};

}  // namespace

SimStats run_simulation(const SimConfig& config, SimObserver* observer) {
  config.validate();
  return Simulator(config, observer).run();
}

}  // namespace ontoflux
