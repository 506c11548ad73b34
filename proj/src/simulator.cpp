#include "aimd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "aimd/limit_map.hpp"

namespace aimd {

namespace {

constexpr double kTouch = 1e-12;

// Per-cycle tallies in physical units.
struct CycleTally {
  double v0 = 0.0;
  double S = 0.0;
  double wall = 0.0;
  double sent = 0.0;    // integral of lambda dt
  double served = 0.0;  // integral of g dt
  double queue = 0.0;   // integral of x dt
  double y_min = 0.0;
  double s_min = 0.0;   // time of the minimum since the cycle started
  double slide = 0.0;
  int k = 0;
};

class Runner {
 public:
  explicit Runner(const SimConfig& cfg) : cfg_(cfg), p_(cfg.params), np_(normalize(cfg.params)) {}

  SimResult run() {
    const double A = np_.A();
    const double b = np_.b;
    if (!(cfg_.v_init > 0.0)) throw std::invalid_argument("v_init must be positive");
    if (!(cfg_.y_init >= 0.0 && cfg_.y_init <= b)) {
      throw std::invalid_argument("y_init must lie in [0, B/m]");
    }
    if (cfg_.measure_cycles < 1) throw std::invalid_argument("measure_cycles must be >= 1");
    s_ = 0.0;
    v_ = cfg_.v_init;
    y_ = cfg_.y_init;
    t_ = 0.0;
    start_cycle();
    emit("segment");

    bool just_hit_b = false;
    bool measuring = false;
    int measured = 0;
    int last_k = 0;
    int stable_k = 0;
    std::deque<double> tail;
    std::vector<CycleTally> kept;

    while (result_.cycles_run < cfg_.max_cycles) {
      if (y_ >= b && (just_hit_b || v_ >= A)) {
        just_hit_b = false;
        overflow_and_jump();
        const CycleTally done = cur_;
        ++result_.cycles_run;
        ++result_.jump_multiplicities[done.k];
        const double prev = cur_.v0;
        start_cycle();
        if (measuring) {
          kept.push_back(done);
          if (++measured >= cfg_.measure_cycles) break;
          continue;
        }
        stable_k = done.k == last_k ? stable_k + 1 : 1;
        last_k = done.k;
        tail.push_back(v_);
        if (tail.size() > 8) tail.pop_front();
        const double gap = std::abs(v_ - prev);
        if (result_.cycles_run > cfg_.warmup_cycles && result_.cycles_run >= 2 && stable_k >= 3 &&
            gap < 1e-12 * std::max(1.0, std::abs(v_))) {
          measuring = true;
        }
        continue;
      }
      if (y_ <= 0.0 && v_ < np_.q) {
        slide();
        continue;
      }
      just_hit_b = free_segment();
    }

    if (static_cast<int>(kept.size()) < cfg_.measure_cycles) {
      std::ostringstream os;
      os.precision(17);
      os << "simulation did not settle within " << cfg_.max_cycles << " cycles; post-jump tail:";
      for (double v : tail) os << ' ' << v;
      throw ConvergenceError(os.str());
    }
    summarize(kept);
    return std::move(result_);
  }

 private:
  void start_cycle() {
    cur_ = CycleTally{};
    cur_.v0 = v_;
    cur_.y_min = y_;
  }

  void emit(const char* name) {
    if (!cfg_.record_trace) return;
    result_.trace.push_back(TraceEvent{t_, s_, v_, y_, name});
  }

  void account(const Segment& seg, double int_y, double int_y2, double int_v) {
    const double dt = time_convert(seg, p_);
    cur_.wall += dt;
    cur_.S += seg.length;
    cur_.sent += p_.m * int_v;
    switch (seg.kind) {
      case SegmentKind::slide:
        cur_.served += p_.m * int_v;  // empty queue: everything sent is served
        break;
      case SegmentKind::free:
      case SegmentKind::overflow:
        cur_.served += p_.mu * dt;  // queue is non-empty (up to isolated touches)
        break;
    }
    cur_.queue += p_.m * p_.T * int_y + p_.m * p_.m / p_.mu * int_y2;
    t_ += dt;
    s_ += seg.length;
  }

  void overflow_and_jump() {
    emit("hit_b");
    const double b = np_.b;
    account(Segment{SegmentKind::overflow, v_, b, 1.0}, b, b * b, v_ + 0.5);
    v_ += 1.0;
    const JumpResult jr = jump(v_, np_.A(), np_.beta);
    v_ = jr.v_after;
    y_ = b;
    cur_.k = jr.k;
    emit("jump");
  }

  void slide() {
    const double L = slide_on_floor(v_, np_.q);
    account(Segment{SegmentKind::slide, v_, 0.0, L}, 0.0, 0.0, v_ * L + 0.5 * L * L);
    cur_.slide += L;
    v_ = np_.q;
    y_ = 0.0;
    emit("slide_end");
  }

  // Returns true when the segment ends by reaching y = b.
  bool free_segment() {
    const double q = np_.q;
    const double b = np_.b;
    const auto minimum = segment_minimum(v_, y_, q);
    const bool to_floor = minimum && minimum->y < -kTouch && y_ > 0.0;
    double L = 0.0;
    if (to_floor) {
      L = *hit_time_to_level(v_, y_, q, 0.0, Direction::falling);
    } else {
      const auto hit = hit_time_to_level(v_, y_, q, b, Direction::rising);
      if (!hit) throw std::logic_error("free segment reaches neither y=0 nor y=b");
      L = *hit;
    }
    if (!to_floor && minimum && minimum->s <= L && minimum->y < cur_.y_min) {
      cur_.y_min = minimum->y;
      cur_.s_min = cur_.S + minimum->s;
    }
    if (cfg_.record_trace && L > 0.0) {
      for (int i = 1; i < cfg_.trace_samples; ++i) {
        const double ds = L * i / cfg_.trace_samples;
        const SegmentIntegrals part = integrate_segment(v_, y_, q, ds);
        const State st = segment_state(v_, y_, q, ds);
        const double dt = p_.T * ds + p_.m / p_.mu * part.y;
        result_.trace.push_back(TraceEvent{t_ + dt, s_ + ds, st.v, st.y, "segment"});
      }
    }
    const SegmentIntegrals in = integrate_segment(v_, y_, q, L);
    account(Segment{SegmentKind::free, v_, y_, L}, in.y, in.y2, in.v);
    v_ += L;
    if (to_floor) {
      y_ = 0.0;
      cur_.y_min = 0.0;
      emit("hit_0");
      return false;
    }
    y_ = b;
    return true;
  }

  void summarize(const std::vector<CycleTally>& kept) {
    double wall = 0.0, sent = 0.0, served = 0.0, queue = 0.0;
    for (const auto& c : kept) {
      wall += c.wall;
      sent += c.sent;
      served += c.served;
      queue += c.queue;
    }
    result_.lambda_bar = sent / wall;
    result_.g_bar = served / wall;
    result_.x_bar = queue / wall;
    result_.T_cycle_measured = wall / static_cast<double>(kept.size());

    const CycleTally& last = kept.back();
    CycleDescriptor d;
    d.order = last.k;
    d.v0 = last.v0;
    d.S_cycle = last.S;
    d.s1 = last.S - 1.0;
    d.y_min = last.y_min;
    d.slide = last.slide;
    if (last.slide > kCriticalTolerance) {
      d.shape = Shape::clipped;
      d.y_min = 0.0;
    } else {
      d.shape = last.y_min <= kCriticalTolerance ? Shape::critical : Shape::unclipped;
      d.s0 = last.s_min;
    }
    result_.limit_cycle = d;
  }

  const SimConfig& cfg_;
  FluidParams p_;
  NormalizedParams np_;
  double s_ = 0.0, v_ = 0.0, y_ = 0.0, t_ = 0.0;
  CycleTally cur_;
  SimResult result_;
};

}  // namespace

SimConfig normalized_config(const NormalizedParams& p, double v_init, double y_init) {
  SimConfig cfg;
  cfg.params = FluidParams{p.q, 1.0, 1.0, p.b, p.beta, Unit::packets};
  cfg.v_init = v_init;
  cfg.y_init = y_init;
  return cfg;
}

double time_convert(const Segment& seg, const FluidParams& p) {
  switch (seg.kind) {
    case SegmentKind::slide:
      return p.T * seg.length;
    case SegmentKind::overflow:
      return (p.T + p.B / p.mu) * seg.length;
    case SegmentKind::free: {
      const NormalizedParams np = normalize(p);
      const double int_y = integrate_segment(seg.v0, seg.y0, np.q, seg.length).y;
      return p.T * seg.length + p.m / p.mu * int_y;
    }
  }
  return 0.0;
}

SimResult run(const SimConfig& cfg) {
  cfg.params.validate();
  return Runner(cfg).run();
}

}  // namespace aimd
