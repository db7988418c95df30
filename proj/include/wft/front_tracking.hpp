#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "wft/boundary.hpp"
#include "wft/piecewise.hpp"
#include "wft/riemann.hpp"
#include "wft/system.hpp"
#include "wft/weights.hpp"

namespace wft {

struct WaveFront {
  std::uint64_t id = 0;
  double position = 0.0;     // at anchor_time
  double anchor_time = 0.0;
  double speed = 0.0;
  int family = 1;            // n+1 marks a non-physical front
  double strength = 0.0;     // Euclidean jump size for non-physical fronts
  int generation = 1;
  State left_state, right_state;
  double speed_perturbation = 0.0;

  double x(double t) const { return position + speed * (t - anchor_time); }
};

struct Configuration {
  double time = 0.0;
  std::vector<WaveFront> fronts;  // anchored at `time`
  double boundary_position = 0.0;
  State trace;                    // u(t, gamma(t)+) before the first front
  State left_of_boundary;         // base state

  PiecewiseConstant to_function() const;
  const State& far_right() const { return fronts.empty() ? trace : fronts.back().right_state; }
  /// Throws InvariantViolation when chaining or ordering is broken.
  void check(double tol = 1e-9) const;
};

struct SolverParams {
  double epsilon = 0.0;
  double rho = 0.0;
  double delta0 = kInf;  // user smallness bound on data TV
  std::size_t event_budget = 10'000'000;
  NewtonOptions newton;
  double np_drop = 1e-13;        // non-physical jumps below this are absorbed
  double zero_strength = 1e-13;  // Riemann components below this are dropped
  bool check_invariants = true;

  void validate() const;
};

enum class EventKind { Initial, FrontCollision, BoundaryHit, BoundaryDataJump, SplitStep };
const char* to_string(EventKind k);

struct EventRecord {
  std::size_t index = 0;
  double time = 0.0;
  EventKind kind = EventKind::Initial;
  double location = 0.0;
  std::vector<std::uint64_t> incoming_ids, outgoing_ids;
  std::vector<int> incoming_families, outgoing_families;
  std::vector<double> incoming_strengths, outgoing_strengths;
  bool accurate = true;
  bool physical_pair = false;
  double product = 0.0;  // |sigma' sigma''| for collisions
  double dV = 0.0, dVg = 0.0, dQ = 0.0, dUpsilon = 0.0;
  double V = 0.0, Vg = 0.0, Q = 0.0, Upsilon = 0.0;  // after the event
  double np_total = 0.0;
  std::size_t fronts = 0;
  State u_left, u_right;  // states flanking the event point before it
};

/// Space-time segment of one front, from birth to death.
struct FrontLine {
  std::uint64_t id = 0;
  double t_birth = 0.0, x_birth = 0.0, speed = 0.0;
  double t_death = kInf;
  int family = 1;
  double strength = 0.0;
  int generation = 1;
  State left, right;

  double x(double t) const { return x_birth + speed * (t - t_birth); }
};

struct Snapshot {
  Configuration cfg;
  bool split = false;  // taken right after a source step
};

struct FunctionalSample {
  double time = 0.0;
  double V = 0.0, Vg = 0.0, Q = 0.0, Upsilon = 0.0, np_total = 0.0;
  double l1 = 0.0;  // ||u - base||_L1; NaN when not computed
  std::size_t fronts = 0;
};

struct RunOptions {
  double T = 1.0;
  std::vector<double> snapshot_times;
  bool snapshot_every_event = false;
  bool record_history = true;
  bool record_events = true;
};

struct Trajectory {
  const HyperbolicSystem* system = nullptr;
  Boundary boundary;
  SolverParams params;
  FunctionalWeights weights;
  double T = 0.0;
  Configuration initial, final;
  std::vector<Snapshot> snapshots;
  std::vector<EventRecord> events;
  std::vector<FunctionalSample> functionals;
  std::vector<FrontLine> history;

  /// Latest snapshot taken exactly at t (after the source step, if any).
  const Configuration* snapshot_at(double t) const;
};

/// Replaces an arbitrary (Lipschitz or BV) datum by the piecewise-constant approximations used by the
/// tracker. A datum already piecewise constant is returned unchanged.
struct SampledProfile {
  std::function<State(double)> f;
  double a = 0.0, b = 1.0;  // support of f - outside
  State outside;
};

PiecewiseConstant approximate_profile(const SampledProfile& p, double epsilon);
/// Piecewise-constant g^eps from a function on [0, t_end], constant g(t_end) afterwards; sampled at
/// right endpoints so the tail variation never grows.
PiecewiseConstant approximate_boundary_data(const std::function<Eigen::VectorXd(double)>& g, double t_end,
                                            double epsilon);

/// The event-driven epsilon-approximate solver.
class FrontTracker {
 public:
  FrontTracker(const HyperbolicSystem& sys, Boundary bdry, SolverParams params, FunctionalWeights w = {});

  /// Builds the initial configuration from piecewise-constant data at t0.
  void init(const PiecewiseConstant& u0, double t0 = 0.0);

  /// Time of the next event (inf if none).
  double next_event_time();
  /// Processes the next event if its time is <= horizon.
  std::optional<EventRecord> step(double horizon = kInf);
  /// Processes every event with time <= t and moves the clock to t.
  std::size_t advance_to(double t);
  /// Adds inc (restricted to [gamma(now), inf)) to the current solution and re-solves
  /// every jump it touches with the Accurate solvers. Logged as a SplitStep.
  EventRecord apply_increment(const PiecewiseConstant& inc);

  double time() const { return now_; }
  Configuration configuration() const { return configuration_at(now_); }
  Configuration configuration_at(double t) const;
  /// The L1 norm costs a pass over all fronts; per-event samples skip it.
  FunctionalSample sample(bool with_l1 = true) const;
  std::size_t front_count() const { return fronts_.size(); }
  std::size_t event_count() const { return events_done_; }

  double V() const { return V_; }
  double Vg() const { return Vg_; }
  double Q() const { return Q_; }
  double Upsilon() const { return V_ + w_.H1 * Vg_ + w_.H2 * Q_; }
  double np_total() const { return np_total_; }

  void set_recording(bool history, bool events);
  const std::vector<FrontLine>& history() const { return history_; }
  const std::vector<EventRecord>& events() const { return events_; }
  std::vector<FrontLine> take_history() { return std::move(history_); }
  std::vector<EventRecord> take_events() { return std::move(events_); }

  const HyperbolicSystem& system() const { return sys_; }
  const Boundary& boundary() const { return bdry_; }
  const SolverParams& params() const { return p_; }
  const FunctionalWeights& weights() const { return w_; }

  /// Recomputes V and Q from scratch (for checking the incremental bookkeeping).
  std::pair<double, double> recompute_VQ() const;

 private:
  using FrontList = std::list<WaveFront>;
  using It = FrontList::iterator;

  struct QEvent {
    double t, tp, x;
    std::uint64_t a, b;  // b == 0 for boundary hits
    bool operator>(const QEvent& o) const;
  };

  struct Outgoing {
    int family;
    double strength;
    double speed;
    int generation;
    State left, right;
  };

  bool physical(int family) const { return family <= sys_.n(); }
  double vweight(int family) const { return family <= bdry_.ell ? w_.K : 1.0; }
  bool approaching(int fa, double sa, int fb, double sb) const;

  WaveFront make_front(const Outgoing& o, double x, double t);
  void fan_to_outgoing(const std::vector<ElementaryWave>& fan, int generation_default,
                       const std::function<int(int)>& generation_of, const std::function<bool(int)>& split,
                       std::vector<Outgoing>& out) const;
  void add_np(const State& from, const State& to, int generation, std::vector<Outgoing>& out) const;

  std::vector<Outgoing> resolve_collision(const WaveFront& L, const WaveFront& R, bool& accurate) const;
  std::vector<Outgoing> resolve_boundary(const State& u_o, double t, int generation, const State& trace_before,
                                         State& new_trace) const;

  /// Replaces [first, last) by fronts built from `out`, born at (t, x). Returns the new range and
  /// fills the record's functional deltas.
  std::pair<It, It> replace(It first, It last, const std::vector<Outgoing>& out, double t, double x,
                            EventRecord& rec);
  double group_q(const std::vector<std::pair<int, double>>& group) const;
  void schedule_pair(It l);
  void schedule_boundary();
  void schedule_around(It first, It last);
  void rebuild_queue();
  double boundary_hit_time(const WaveFront& f) const;
  void finish_record(EventRecord& rec);
  void record_birth(const WaveFront& f);
  void record_death(const WaveFront& f, double t);
  Eigen::VectorXd g_at(double t) const { return bdry_.gdata.at(t); }
  void check_local(It first, It last) const;

  const HyperbolicSystem& sys_;
  Boundary bdry_;
  SolverParams p_;
  FunctionalWeights w_;

  FrontList fronts_;
  std::unordered_map<std::uint64_t, It> index_;
  std::priority_queue<QEvent, std::vector<QEvent>, std::greater<QEvent>> queue_;
  std::size_t next_jump_ = 0;
  double now_ = 0.0;
  State trace_;
  std::uint64_t next_id_ = 1;
  std::size_t events_done_ = 0;

  double V_ = 0.0, Vg_ = 0.0, Q_ = 0.0, np_total_ = 0.0;

  bool rec_history_ = true, rec_events_ = true;
  std::vector<FrontLine> history_;
  std::unordered_map<std::uint64_t, std::size_t> hist_index_;
  std::vector<EventRecord> events_;
};

/// Homogeneous run to T with snapshots at the requested times.
Trajectory run(const HyperbolicSystem& sys, const Boundary& bdry, const SolverParams& params,
               const FunctionalWeights& w, const PiecewiseConstant& u0, const RunOptions& opt);

/// Drives an already initialized tracker to opt.T, filling snapshots / functionals into traj.
void drive(FrontTracker& ft, const RunOptions& opt, Trajectory& traj);

}  // namespace wft
