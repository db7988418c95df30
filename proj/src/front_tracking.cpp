#include "wft/front_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "wft/errors.hpp"

namespace wft {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Initial: return "Initial";
    case EventKind::FrontCollision: return "FrontCollision";
    case EventKind::BoundaryHit: return "BoundaryHit";
    case EventKind::BoundaryDataJump: return "BoundaryDataJump";
    case EventKind::SplitStep: return "SplitStep";
  }
  return "?";
}

// ---------------------------------------------------------------- Configuration

PiecewiseConstant Configuration::to_function() const {
  PiecewiseConstant f;
  f.values.push_back(left_of_boundary);
  f.breaks.push_back(boundary_position);
  f.values.push_back(trace);
  for (const auto& w : fronts) {
    const double x = w.x(time);
    if (x <= f.breaks.back()) {
      f.values.back() = w.right_state;
    } else {
      f.breaks.push_back(x);
      f.values.push_back(w.right_state);
    }
  }
  f.simplify();
  return f;
}

void Configuration::check(double tol) const {
  State prev = trace;
  double xprev = boundary_position;
  for (const auto& w : fronts) {
    const double x = w.x(time);
    if (x < xprev - 1e-9 * (1 + std::abs(x)))
      fail(ErrorKind::InvariantViolation, "front " + std::to_string(w.id) + " out of order");
    if ((w.left_state - prev).norm() > tol)
      fail(ErrorKind::InvariantViolation, "chaining broken at front " + std::to_string(w.id));
    prev = w.right_state;
    xprev = x;
  }
}

const Configuration* Trajectory::snapshot_at(double t) const {
  // right continuity: a snapshot taken after a source step at t wins
  const Configuration* out = nullptr;
  for (const auto& s : snapshots)
    if (s.cfg.time == t) out = &s.cfg;
  return out;
}

void SolverParams::validate() const {
  if (!(epsilon > 0)) fail(ErrorKind::ValidationError, "solver.epsilon must be positive");
  if (!(rho > 0)) fail(ErrorKind::ValidationError, "solver.rho must be positive");
}

// ---------------------------------------------------------------- data approximation

PiecewiseConstant approximate_profile(const SampledProfile& p, double epsilon) {
  if (!(p.b > p.a)) fail(ErrorKind::ValidationError, "profile support must have positive length");
  // Gauss-Legendre on each cell for the averages.
  static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  auto build = [&](int m) {
    const double h = (p.b - p.a) / m;
    std::vector<double> br;
    std::vector<State> vals{p.outside};
    for (int k = 0; k <= m; ++k) br.push_back(p.a + k * h);
    for (int k = 0; k < m; ++k) {
      const double c = p.a + (k + 0.5) * h;
      State acc = State::Zero(p.outside.size());
      for (int q = 0; q < 4; ++q) acc += 0.5 * gw[q] * p.f(c + 0.5 * h * gx[q]);
      vals.push_back(acc);
    }
    vals.push_back(p.outside);
    PiecewiseConstant out{br, vals};
    out.simplify();
    return out;
  };
  auto error = [&](const PiecewiseConstant& s) {
    // fine midpoint quadrature of |f - s|
    const int fine = 20000;
    const double h = (p.b - p.a) / fine;
    double e = 0.0;
    for (int k = 0; k < fine; ++k) {
      const double x = p.a + (k + 0.5) * h;
      e += (p.f(x) - s.at(x)).norm() * h;
    }
    return e;
  };
  int m = 4;
  for (; m <= (1 << 20); m *= 2) {
    PiecewiseConstant s = build(m);
    if (error(s) < 0.5 * epsilon) return s;
  }
  fail(ErrorKind::NoConvergence, "profile approximation did not reach the requested L1 accuracy");
}

PiecewiseConstant approximate_boundary_data(const std::function<Eigen::VectorXd(double)>& g, double t_end,
                                            double epsilon) {
  for (int m = 1; m <= (1 << 20); m *= 2) {
    const double h = t_end / m;
    std::vector<double> br;
    std::vector<State> vals;
    vals.push_back(g(h));
    for (int k = 1; k < m; ++k) {
      br.push_back(k * h);
      vals.push_back(g((k + 1) * h));
    }
    br.push_back(t_end);
    vals.push_back(g(t_end));
    PiecewiseConstant out{br, vals};
    // sup error on a fine grid
    double err = 0.0;
    const int fine = 64 * m;
    for (int k = 0; k <= fine; ++k) {
      const double t = t_end * k / fine;
      err = std::max(err, (g(t) - out.at(t)).norm());
    }
    if (err < epsilon) {
      out.simplify();
      return out;
    }
  }
  fail(ErrorKind::NoConvergence, "boundary data approximation did not reach the requested accuracy");
}

// ---------------------------------------------------------------- tracker

bool FrontTracker::QEvent::operator>(const QEvent& o) const {
  if (t != o.t) return t > o.t;
  if (tp != o.tp) return tp > o.tp;
  if (x != o.x) return x > o.x;
  if (a != o.a) return a > o.a;
  return b > o.b;
}

FrontTracker::FrontTracker(const HyperbolicSystem& sys, Boundary bdry, SolverParams params, FunctionalWeights w)
    : sys_(sys), bdry_(std::move(bdry)), p_(params), w_(w) {
  p_.validate();
  bdry_.validate(sys_);
  trace_ = sys_.base();
}

void FrontTracker::set_recording(bool history, bool events) {
  rec_history_ = history;
  rec_events_ = events;
}

bool FrontTracker::approaching(int fa, double sa, int fb, double sb) const {
  const bool pa = physical(fa), pb = physical(fb);
  if (!pa) return pb;
  if (!pb) return false;
  if (fa > fb) return true;
  if (fa == fb && sys_.gnl(fa)) return sa < 0 || sb < 0;
  return false;
}

double FrontTracker::group_q(const std::vector<std::pair<int, double>>& g) const {
  double q = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      if (approaching(g[a].first, g[a].second, g[b].first, g[b].second))
        q += std::abs(g[a].second * g[b].second);
  return q;
}

std::pair<double, double> FrontTracker::recompute_VQ() const {
  const int n = sys_.n();
  double V = 0.0, Q = 0.0;
  std::vector<double> S(n + 2, 0.0), Sshock(n + 2, 0.0);
  for (const auto& f : fronts_) {
    const double a = std::abs(f.strength);
    V += vweight(f.family) * a;
    const int j = f.family;
    if (physical(j)) {
      double acc = S[n + 1];
      for (int k = j + 1; k <= n; ++k) acc += S[k];
      if (sys_.gnl(j)) acc += f.strength < 0 ? S[j] : Sshock[j];
      Q += a * acc;
    }
    S[j] += a;
    if (physical(j) && sys_.gnl(j) && f.strength < 0) Sshock[j] += a;
  }
  return {V, Q};
}

WaveFront FrontTracker::make_front(const Outgoing& o, double x, double t) {
  WaveFront f;
  f.id = next_id_++;
  f.position = x;
  f.anchor_time = t;
  f.speed = o.speed;
  f.family = o.family;
  f.strength = o.strength;
  f.generation = o.generation;
  f.left_state = o.left;
  f.right_state = o.right;
  f.speed_perturbation = double((f.id % 1000) + 1) * 1e-12 * sys_.lambda_hat();
  return f;
}

void FrontTracker::fan_to_outgoing(const std::vector<ElementaryWave>& fan, int, const std::function<int(int)>& gen,
                                   const std::function<bool(int)>& split, std::vector<Outgoing>& out) const {
  for (const auto& w : fan) {
    if (w.kind == WaveKind::Rarefaction && split(w.family)) {
      const int m = std::max(1, static_cast<int>(std::ceil(w.strength / p_.epsilon - 1e-9)));
      const double ds = w.strength / m;
      State cur = w.left;
      for (int k = 1; k <= m; ++k) {
        State next = k == m ? w.right : rarefaction_curve(sys_, cur, w.family, ds);
        const double s = sys_.lambda(next, w.family);
        out.push_back({w.family, ds, s, gen(w.family), cur, next});
        cur = std::move(next);
      }
    } else {
      const double s = w.kind == WaveKind::Rarefaction ? w.speed_hi : w.speed_lo;
      out.push_back({w.family, w.strength, s, gen(w.family), w.left, w.right});
    }
  }
}

void FrontTracker::add_np(const State& from, const State& to, int generation, std::vector<Outgoing>& out) const {
  const double d = (to - from).norm();
  if (d > p_.np_drop || (out.empty() && d > 0.0)) {
    out.push_back({sys_.n() + 1, d, sys_.lambda_hat(), generation, from, to});
  } else if (!out.empty()) {
    out.back().right = to;
  }
}

std::vector<FrontTracker::Outgoing> FrontTracker::resolve_collision(const WaveFront& L, const WaveFront& R,
                                                                    bool& accurate) const {
  const int n = sys_.n();
  const State& ul = L.left_state;
  const State& ur = R.right_state;
  const bool phys = physical(L.family) && physical(R.family);
  const double prod = std::abs(L.strength * R.strength);
  std::vector<Outgoing> out;
  const int gmax = std::max(L.generation, R.generation);
  if (phys && prod >= p_.rho) {
    accurate = true;
    Strengths s = riemann_strengths(sys_, ul, ur, p_.newton);
    for (Eigen::Index k = 0; k < s.size(); ++k)
      if (std::abs(s(k)) <= p_.zero_strength) s(k) = 0.0;
    const auto fan = build_fan(sys_, ul, s, 1, ur);
    const bool lraref = sys_.gnl(L.family) && L.strength > 0;
    const bool rraref = sys_.gnl(R.family) && R.strength > 0;
    auto gen = [&](int i) {
      if (i == L.family && i == R.family) return std::min(L.generation, R.generation);
      if (i == L.family) return L.generation;
      if (i == R.family) return R.generation;
      return gmax + 1;
    };
    auto split = [&](int i) { return !((i == L.family && lraref) || (i == R.family && rraref)); };
    fan_to_outgoing(fan, 1, gen, split, out);
    if (fan.empty() && (ur - ul).norm() > 0.0) add_np(ul, ur, gmax + 1, out);
    return out;
  }
  accurate = false;
  if (!physical(L.family) && physical(R.family)) {
    const CurvePoint p = lax_step(sys_, ul, R.family, R.strength);
    out.push_back({R.family, R.strength, p.speed, R.generation, ul, p.state});
    add_np(p.state, ur, L.generation, out);
    return out;
  }
  if (!phys) fail(ErrorKind::InvariantViolation, "a physical front cannot overtake a non-physical one");
  const int i = L.family, j = R.family;
  if (i == j) {
    const double s = L.strength + R.strength;
    State u1 = ul;
    if (s != 0.0) {
      const CurvePoint p = lax_step(sys_, ul, i, s);
      out.push_back({i, s, p.speed, std::min(L.generation, R.generation), ul, p.state});
      u1 = p.state;
    }
    add_np(u1, ur, gmax + 1, out);
    return out;
  }
  const CurvePoint p1 = lax_step(sys_, ul, j, R.strength);
  out.push_back({j, R.strength, p1.speed, R.generation, ul, p1.state});
  const CurvePoint p2 = lax_step(sys_, p1.state, i, L.strength);
  out.push_back({i, L.strength, p2.speed, L.generation, p1.state, p2.state});
  add_np(p2.state, ur, gmax + 1, out);
  (void)n;
  return out;
}

std::vector<FrontTracker::Outgoing> FrontTracker::resolve_boundary(const State& u_o, double t, int generation,
                                                                   const State&, State& new_trace) const {
  const Eigen::VectorXd g = g_at(t);
  BoundaryRiemannSolution b = solve_boundary_riemann(sys_, bdry_, u_o, g, CurveKind::Lax, p_.newton);
  new_trace = b.trace_state;
  Strengths s = b.strengths;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (std::abs(s(k)) <= p_.zero_strength) s(k) = 0.0;
  const auto fan = build_fan(sys_, new_trace, s, bdry_.ell + 1, u_o);
  std::vector<Outgoing> out;
  fan_to_outgoing(fan, generation, [&](int) { return generation; }, [](int) { return true; }, out);
  if (fan.empty()) new_trace = u_o;  // every strength negligible
  const double gs = bdry_.gamma.slope(t);
  for (const auto& o : out)
    if (o.speed <= gs)
      fail(ErrorKind::InvariantViolation, "boundary fan speed does not exceed the boundary slope");
  return out;
}

void FrontTracker::record_birth(const WaveFront& f) {
  if (!rec_history_) return;
  FrontLine l;
  l.id = f.id;
  l.t_birth = f.anchor_time;
  l.x_birth = f.position;
  l.speed = f.speed;
  l.family = f.family;
  l.strength = f.strength;
  l.generation = f.generation;
  l.left = f.left_state;
  l.right = f.right_state;
  hist_index_[f.id] = history_.size();
  history_.push_back(std::move(l));
}

void FrontTracker::record_death(const WaveFront& f, double t) {
  if (!rec_history_) return;
  auto it = hist_index_.find(f.id);
  if (it != hist_index_.end()) {
    history_[it->second].t_death = t;
    hist_index_.erase(it);
  }
}

std::pair<FrontTracker::It, FrontTracker::It> FrontTracker::replace(It first, It last,
                                                                    const std::vector<Outgoing>& out, double t,
                                                                    double x, EventRecord& rec) {
  const int n = sys_.n();
  std::vector<double> SL(n + 2, 0.0), SLs(n + 2, 0.0), SR(n + 2, 0.0), SRs(n + 2, 0.0);
  auto acc = [&](const WaveFront& f, std::vector<double>& S, std::vector<double>& Ss) {
    const double a = std::abs(f.strength);
    S[f.family] += a;
    if (physical(f.family) && sys_.gnl(f.family) && f.strength < 0) Ss[f.family] += a;
  };
  for (It it = fronts_.begin(); it != first; ++it) acc(*it, SL, SLs);
  for (It it = last; it != fronts_.end(); ++it) acc(*it, SR, SRs);
  auto contrib = [&](int j, double s) {
    double l = 0.0, r = 0.0;
    if (physical(j)) {
      l = SL[n + 1];
      for (int k = j + 1; k <= n; ++k) l += SL[k];
      for (int k = 1; k < j; ++k) r += SR[k];
      if (sys_.gnl(j)) {
        l += s < 0 ? SL[j] : SLs[j];
        r += s < 0 ? SR[j] : SRs[j];
      }
    } else {
      for (int k = 1; k <= n; ++k) r += SR[k];
    }
    return std::abs(s) * (l + r);
  };

  std::vector<std::pair<int, double>> gold, gnew;
  double dV = 0.0, dQ = 0.0, dnp = 0.0;
  for (It it = first; it != last; ++it) {
    gold.emplace_back(it->family, it->strength);
    rec.incoming_ids.push_back(it->id);
    rec.incoming_families.push_back(it->family);
    rec.incoming_strengths.push_back(it->strength);
    dV -= vweight(it->family) * std::abs(it->strength);
    dQ -= contrib(it->family, it->strength);
    if (!physical(it->family)) dnp -= std::abs(it->strength);
  }
  for (const auto& o : out) {
    gnew.emplace_back(o.family, o.strength);
    dV += vweight(o.family) * std::abs(o.strength);
    dQ += contrib(o.family, o.strength);
    if (!physical(o.family)) dnp += std::abs(o.strength);
  }
  dQ += group_q(gnew) - group_q(gold);

  for (It it = first; it != last;) {
    record_death(*it, t);
    index_.erase(it->id);
    it = fronts_.erase(it);
  }
  It new_first = last;
  bool first_set = false;
  for (const auto& o : out) {
    WaveFront f = make_front(o, x, t);
    rec.outgoing_ids.push_back(f.id);
    rec.outgoing_families.push_back(f.family);
    rec.outgoing_strengths.push_back(f.strength);
    record_birth(f);
    It it = fronts_.insert(last, std::move(f));
    index_[it->id] = it;
    if (!first_set) {
      new_first = it;
      first_set = true;
    }
  }
  V_ += dV;
  Q_ += dQ;
  np_total_ += dnp;
  rec.dV = dV;
  rec.dQ = dQ;
  return {new_first, last};
}

double FrontTracker::boundary_hit_time(const WaveFront& f) const {
  const auto& g = bdry_.gamma;
  for (std::size_t k = g.piece_of(now_); k < g.pieces(); ++k) {
    const double ts = std::max(now_, g.piece_start(k));
    const double te = g.piece_end(k);
    const double d0 = f.x(ts) - g.at(ts);
    const double rel = f.speed - g.piece_slope(k);
    if (d0 <= 1e-13 * (1.0 + std::abs(g.at(ts)))) {
      if (rel < 0 || d0 < -1e-9) return ts;
    } else if (rel < 0) {
      const double th = ts + d0 / (-rel);
      if (th < te) return th;
    }
    if (std::isinf(te)) break;
  }
  return kInf;
}

void FrontTracker::schedule_pair(It l) {
  It r = std::next(l);
  if (r == fronts_.end()) return;
  const double sl = l->speed, sr = r->speed;
  if (!(sl > sr)) return;
  const double gap = std::max(0.0, r->x(now_) - l->x(now_));
  const double t = now_ + gap / (sl - sr);
  const double slp = sl + l->speed_perturbation, srp = sr + r->speed_perturbation;
  const double tp = slp > srp ? now_ + gap / (slp - srp) : kInf;
  queue_.push({t, tp, l->x(t), l->id, r->id});
}

void FrontTracker::schedule_boundary() {
  if (fronts_.empty()) return;
  const WaveFront& f = fronts_.front();
  const double th = boundary_hit_time(f);
  if (std::isinf(th)) return;
  if (!physical(f.family))
    fail(ErrorKind::InvariantViolation, "non-physical front reaching the boundary (unreachable by construction)");
  if (f.family > bdry_.ell)
    fail(ErrorKind::InvariantViolation, "incoming family " + std::to_string(f.family) + " reaching the boundary");
  queue_.push({th, th, bdry_.gamma.at(th), f.id, 0});
}

void FrontTracker::schedule_around(It first, It last) {
  if (first == last) {
    if (first != fronts_.begin() && first != fronts_.end()) schedule_pair(std::prev(first));
    return;
  }
  It it = first != fronts_.begin() ? std::prev(first) : first;
  while (true) {
    schedule_pair(it);
    if (std::next(it) == last || std::next(it) == fronts_.end()) break;
    ++it;
  }
}

void FrontTracker::rebuild_queue() {
  queue_ = {};
  for (It it = fronts_.begin(); it != fronts_.end(); ++it) schedule_pair(it);
  schedule_boundary();
}

void FrontTracker::check_local(It first, It last) const {
  if (!p_.check_invariants) return;
  const State* prev = &trace_;
  auto it = FrontList::const_iterator(first);
  if (it != fronts_.cbegin()) {
    prev = &std::prev(it)->right_state;
  }
  for (; it != fronts_.cend(); ++it) {
    if ((it->left_state - *prev).norm() > 1e-8)
      fail(ErrorKind::InvariantViolation, "chaining broken at front " + std::to_string(it->id));
    prev = &it->right_state;
    if (it == FrontList::const_iterator(last)) break;
  }
}

void FrontTracker::finish_record(EventRecord& rec) {
  rec.index = events_done_;
  rec.V = V_;
  rec.Vg = Vg_;
  rec.Q = Q_;
  rec.Upsilon = Upsilon();
  rec.dUpsilon = rec.dV + w_.H1 * rec.dVg + w_.H2 * rec.dQ;
  rec.np_total = np_total_;
  rec.fronts = fronts_.size();
  ++events_done_;
  if (rec_events_) events_.push_back(rec);
  if (events_done_ > p_.event_budget)
    fail(ErrorKind::EventBudgetExceeded, "more than " + std::to_string(p_.event_budget) + " events");
}

void FrontTracker::init(const PiecewiseConstant& u0_in, double t0) {
  u0_in.validate();
  if (u0_in.dim() != sys_.n()) fail(ErrorKind::ValidationError, "initial datum has wrong dimension");
  if ((u0_in.values.back() - sys_.base()).norm() > 1e-12)
    fail(ErrorKind::ValidationError, "initial datum must equal the base state at +infinity");
  fronts_.clear();
  index_.clear();
  queue_ = {};
  history_.clear();
  hist_index_.clear();
  events_.clear();
  events_done_ = 0;
  now_ = t0;
  const double g0 = bdry_.gamma.at(t0);
  const PiecewiseConstant u0 = restrict_right(u0_in, g0, sys_.base());
  if (total_variation(u0, g0, kInf) > p_.delta0)
    fail(ErrorKind::TVTooLarge, "TV(u0) exceeds delta0");
  if (total_variation(bdry_.gdata) > p_.delta0) fail(ErrorKind::TVTooLarge, "TV(g) exceeds delta0");

  std::vector<Outgoing> all;
  std::vector<double> xs;
  const State u_g = u0.at(g0);
  State tr;
  auto bout = resolve_boundary(u_g, t0, 1, u_g, tr);
  trace_ = tr;
  for (auto& o : bout) {
    all.push_back(o);
    xs.push_back(g0);
  }
  for (std::size_t k = 0; k < u0.breaks.size(); ++k) {
    const double x = u0.breaks[k];
    if (x <= g0) continue;
    const State& a = u0.values[k];
    const State& b = u0.values[k + 1];
    Strengths s = riemann_strengths(sys_, a, b, p_.newton);
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (std::abs(s(i)) <= p_.zero_strength) s(i) = 0.0;
    const auto fan = build_fan(sys_, a, s, 1, b);
    std::vector<Outgoing> out;
    fan_to_outgoing(fan, 1, [](int) { return 1; }, [](int) { return true; }, out);
    if (fan.empty() && (b - a).norm() > 0.0) add_np(a, b, 1, out);
    for (auto& o : out) {
      all.push_back(o);
      xs.push_back(x);
    }
  }
  for (std::size_t k = 0; k < all.size(); ++k) {
    WaveFront f = make_front(all[k], xs[k], t0);
    record_birth(f);
    It it = fronts_.insert(fronts_.end(), std::move(f));
    index_[it->id] = it;
  }
  next_jump_ = 0;
  while (next_jump_ < bdry_.gdata.breaks.size() && bdry_.gdata.breaks[next_jump_] <= t0) ++next_jump_;
  Vg_ = total_variation(bdry_.gdata, t0, kInf);
  auto [V, Q] = recompute_VQ();
  V_ = V;
  Q_ = Q;
  np_total_ = 0.0;
  for (const auto& f : fronts_)
    if (!physical(f.family)) np_total_ += std::abs(f.strength);
  if (p_.check_invariants) configuration().check();
  rebuild_queue();
  EventRecord rec;
  rec.time = t0;
  rec.kind = EventKind::Initial;
  rec.location = g0;
  for (const auto& f : fronts_) {
    rec.outgoing_ids.push_back(f.id);
    rec.outgoing_families.push_back(f.family);
    rec.outgoing_strengths.push_back(f.strength);
  }
  rec.u_left = trace_;
  rec.u_right = trace_;
  finish_record(rec);
}

double FrontTracker::next_event_time() {
  while (!queue_.empty()) {
    const QEvent& e = queue_.top();
    auto ia = index_.find(e.a);
    bool valid = ia != index_.end();
    if (valid) {
      if (e.b == 0) {
        valid = ia->second == fronts_.begin();
      } else {
        auto ib = index_.find(e.b);
        valid = ib != index_.end() && std::next(ia->second) == ib->second;
      }
    }
    if (valid) break;
    queue_.pop();
  }
  const double tq = queue_.empty() ? kInf : queue_.top().t;
  const double tj = next_jump_ < bdry_.gdata.breaks.size() ? bdry_.gdata.breaks[next_jump_] : kInf;
  return std::min(tq, tj);
}

std::optional<EventRecord> FrontTracker::step(double horizon) {
  const double tn = next_event_time();
  if (tn > horizon || std::isinf(tn)) return std::nullopt;
  const double tq = queue_.empty() ? kInf : queue_.top().t;
  const double tj = next_jump_ < bdry_.gdata.breaks.size() ? bdry_.gdata.breaks[next_jump_] : kInf;
  const bool top_is_hit = !queue_.empty() && queue_.top().b == 0;

  EventRecord rec;
  bool do_jump = tj <= tq;
  if (do_jump && top_is_hit && tq - tj <= 1e-10) do_jump = false;

  if (do_jump) {
    const double t = tj;
    now_ = std::max(now_, t);
    const auto& gd = bdry_.gdata;
    const double jump = (gd.values[next_jump_ + 1] - gd.values[next_jump_]).norm();
    ++next_jump_;
    rec.time = t;
    rec.kind = EventKind::BoundaryDataJump;
    rec.location = bdry_.gamma.at(t);
    rec.u_left = trace_;
    rec.u_right = trace_;
    State tr;
    auto out = resolve_boundary(trace_, t, 1, trace_, tr);
    auto [a, b] = replace(fronts_.begin(), fronts_.begin(), out, t, rec.location, rec);
    trace_ = tr;
    Vg_ -= jump;
    rec.dVg = -jump;
    check_local(a, b);
    schedule_around(a, b);
    schedule_boundary();
    finish_record(rec);
    return rec;
  }

  const QEvent e = queue_.top();
  queue_.pop();
  const double t = e.t;
  now_ = std::max(now_, t);
  rec.time = t;
  if (e.b == 0) {
    It f = index_.at(e.a);
    rec.kind = EventKind::BoundaryHit;
    rec.location = bdry_.gamma.at(t);
    rec.u_left = trace_;
    rec.u_right = f->right_state;
    rec.physical_pair = true;
    const double tg = (tj >= t && tj - t <= 1e-10) ? tj : t;
    State tr;
    auto out = resolve_boundary(f->right_state, tg, f->generation, trace_, tr);
    auto [a, b] = replace(f, std::next(f), out, t, rec.location, rec);
    trace_ = tr;
    check_local(a, b);
    schedule_around(a, b);
    schedule_boundary();
    finish_record(rec);
    return rec;
  }
  It l = index_.at(e.a);
  It r = index_.at(e.b);
  rec.kind = EventKind::FrontCollision;
  const double x = 0.5 * (l->x(t) + r->x(t));
  rec.location = x;
  rec.u_left = l->left_state;
  rec.u_right = r->right_state;
  rec.physical_pair = physical(l->family) && physical(r->family);
  rec.product = std::abs(l->strength * r->strength);
  bool accurate = false;
  auto out = resolve_collision(*l, *r, accurate);
  rec.accurate = accurate;
  const bool was_first = l == fronts_.begin();
  auto [a, b] = replace(l, std::next(r), out, t, x, rec);
  check_local(a, b);
  schedule_around(a, b);
  if (was_first) schedule_boundary();
  finish_record(rec);
  return rec;
}

std::size_t FrontTracker::advance_to(double t) {
  std::size_t k = 0;
  while (step(t)) ++k;
  now_ = std::max(now_, t);
  return k;
}

Configuration FrontTracker::configuration_at(double t) const {
  Configuration c;
  c.time = t;
  c.boundary_position = bdry_.gamma.at(t);
  c.trace = trace_;
  c.left_of_boundary = sys_.base();
  c.fronts.reserve(fronts_.size());
  for (const auto& f : fronts_) {
    WaveFront g = f;
    g.position = f.x(t);
    g.anchor_time = t;
    c.fronts.push_back(std::move(g));
  }
  return c;
}

FunctionalSample FrontTracker::sample(bool with_l1) const {
  FunctionalSample s;
  s.time = now_;
  s.V = V_;
  s.Vg = Vg_;
  s.Q = Q_;
  s.Upsilon = Upsilon();
  s.np_total = np_total_;
  s.fronts = fronts_.size();
  s.l1 = with_l1 ? l1_norm(configuration().to_function(), sys_.base()) : std::nan("");
  return s;
}

EventRecord FrontTracker::apply_increment(const PiecewiseConstant& inc_raw) {
  const double t = now_;
  const double g0 = bdry_.gamma.at(t);
  const State zero = State::Zero(sys_.n());
  const PiecewiseConstant inc = restrict_right(inc_raw, g0, zero);
  EventRecord rec;
  rec.time = t;
  rec.kind = EventKind::SplitStep;
  rec.location = g0;
  rec.u_left = trace_;
  rec.u_right = trace_;
  const double V0 = V_, Q0 = Q_;

  std::vector<WaveFront> old(fronts_.begin(), fronts_.end());
  std::vector<WaveFront> result;
  std::vector<WaveFront> removed;
  std::vector<WaveFront> born;
  const double tol = 1e-12;
  auto near = [&](double a, double b) { return std::abs(a - b) <= tol * (1.0 + std::abs(a)); };

  auto emit = [&](const std::vector<Outgoing>& out, double x) {
    for (const auto& o : out) {
      WaveFront f = make_front(o, x, t);
      born.push_back(f);
      result.push_back(std::move(f));
    }
  };
  auto solve_jump = [&](const State& wl, const State& wr, double x) {
    if ((wr - wl).norm() == 0.0) return;
    Strengths s = riemann_strengths(sys_, wl, wr, p_.newton);
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (std::abs(s(i)) <= p_.zero_strength) s(i) = 0.0;
    const auto fan = build_fan(sys_, wl, s, 1, wr);
    std::vector<Outgoing> out;
    fan_to_outgoing(fan, 1, [](int) { return 1; }, [](int) { return true; }, out);
    if (fan.empty()) add_np(wl, wr, 1, out);
    emit(out, x);
  };

  std::size_t k = 0;
  while (k < old.size() && old[k].x(t) <= g0 + tol * (1.0 + std::abs(g0))) ++k;
  const State u_after_bgroup = k ? old[k - 1].right_state : trace_;
  const State incg = inc.at(g0);
  if (incg.norm() != 0.0) {
    for (std::size_t i = 0; i < k; ++i) removed.push_back(old[i]);
    State tr;
    auto out = resolve_boundary(u_after_bgroup + incg, t, 1, trace_, tr);
    trace_ = tr;
    emit(out, g0);
  } else {
    for (std::size_t i = 0; i < k; ++i) result.push_back(old[i]);
  }

  // interior positions: front groups and increment breaks, in order
  std::size_t ib = 0;
  while (ib < inc.breaks.size() && inc.breaks[ib] <= g0 + tol * (1.0 + std::abs(g0))) ++ib;
  State cur = u_after_bgroup;
  while (k < old.size() || ib < inc.breaks.size()) {
    const double xf = k < old.size() ? old[k].x(t) : kInf;
    const double xb = ib < inc.breaks.size() ? inc.breaks[ib] : kInf;
    const double y = std::min(xf, xb);
    std::vector<WaveFront> group;
    while (k < old.size() && near(old[k].x(t), y)) group.push_back(old[k++]);
    while (ib < inc.breaks.size() && near(inc.breaks[ib], y)) ++ib;
    const State il = inc.left_limit(y);
    const State ir = inc.at(y);
    const State u_minus = cur;
    const State u_plus = group.empty() ? cur : group.back().right_state;
    if (!group.empty() && il.norm() == 0.0 && ir.norm() == 0.0) {
      for (auto& f : group) result.push_back(f);
    } else {
      for (auto& f : group) removed.push_back(f);
      solve_jump(u_minus + il, u_plus + ir, group.empty() ? y : group.front().x(t));
    }
    cur = u_plus;
  }

  for (const auto& f : removed) {
    record_death(f, t);
    rec.incoming_ids.push_back(f.id);
    rec.incoming_families.push_back(f.family);
    rec.incoming_strengths.push_back(f.strength);
  }
  for (const auto& f : born) {
    record_birth(f);
    rec.outgoing_ids.push_back(f.id);
    rec.outgoing_families.push_back(f.family);
    rec.outgoing_strengths.push_back(f.strength);
  }
  fronts_.clear();
  index_.clear();
  for (auto& f : result) {
    It it = fronts_.insert(fronts_.end(), std::move(f));
    index_[it->id] = it;
  }
  auto [V, Q] = recompute_VQ();
  V_ = V;
  Q_ = Q;
  np_total_ = 0.0;
  for (const auto& f : fronts_)
    if (!physical(f.family)) np_total_ += std::abs(f.strength);
  rec.dV = V_ - V0;
  rec.dQ = Q_ - Q0;
  if (p_.check_invariants) configuration().check(1e-8);
  rebuild_queue();
  finish_record(rec);
  return rec;
}

// ---------------------------------------------------------------- runs

void drive(FrontTracker& ft, const RunOptions& opt, Trajectory& traj) {
  std::vector<double> snaps;
  for (double s : opt.snapshot_times)
    if (s >= ft.time() && s <= opt.T) snaps.push_back(s);
  std::sort(snaps.begin(), snaps.end());
  std::size_t si = 0;
  while (si < snaps.size() && snaps[si] == ft.time() && !traj.snapshots.empty() &&
         traj.snapshots.back().cfg.time == ft.time())
    ++si;
  while (true) {
    const double tn = ft.next_event_time();
    while (si < snaps.size() && snaps[si] < tn) {
      traj.snapshots.push_back({ft.configuration_at(snaps[si]), false});
      ++si;
    }
    if (tn > opt.T) break;
    auto rec = ft.step(opt.T);
    if (!rec) break;
    traj.functionals.push_back(ft.sample(false));
    if (opt.snapshot_every_event) traj.snapshots.push_back({ft.configuration(), false});
  }
  for (; si < snaps.size(); ++si) traj.snapshots.push_back({ft.configuration_at(snaps[si]), false});
  ft.advance_to(opt.T);
}

Trajectory run(const HyperbolicSystem& sys, const Boundary& bdry, const SolverParams& params,
               const FunctionalWeights& w, const PiecewiseConstant& u0, const RunOptions& opt) {
  FrontTracker ft(sys, bdry, params, w);
  ft.set_recording(opt.record_history, opt.record_events);
  ft.init(u0, 0.0);
  Trajectory traj;
  traj.system = &sys;
  traj.boundary = bdry;
  traj.params = params;
  traj.weights = w;
  traj.T = opt.T;
  traj.initial = ft.configuration();
  traj.functionals.push_back(ft.sample());
  for (double s : opt.snapshot_times)
    if (s == 0.0) traj.snapshots.push_back({traj.initial, false});
  drive(ft, opt, traj);
  traj.final = ft.configuration();
  traj.history = ft.take_history();
  traj.events = ft.take_events();
  return traj;
}

}  // namespace wft
