#include "wft/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "wft/errors.hpp"
#include "wft/riemann.hpp"

namespace wft {

WaveList wave_list(const HyperbolicSystem& sys, const Boundary& bdry, const Configuration& cfg,
                   UpsilonVariant variant) {
  WaveList out;
  const int n = sys.n();
  int group = 0;
  if (variant == UpsilonVariant::Approximate) {
    for (const auto& f : cfg.fronts) out.push_back({f.x(cfg.time), f.family, f.strength, group++});
    return out;
  }
  const auto gb = solve_boundary_riemann(sys, bdry, cfg.trace, bdry.g(cfg.time));
  for (int k = 0; k < gb.strengths.size(); ++k)
    if (gb.strengths(k) != 0.0) out.push_back({cfg.boundary_position, bdry.ell + 1 + k, gb.strengths(k), group});
  ++group;
  // jumps at one point (fronts just born together) are merged before decomposing
  std::size_t k = 0;
  while (k < cfg.fronts.size()) {
    const double x = cfg.fronts[k].x(cfg.time);
    std::size_t e = k;
    while (e + 1 < cfg.fronts.size() && cfg.fronts[e + 1].x(cfg.time) == x) ++e;
    const Strengths s = riemann_strengths(sys, cfg.fronts[k].left_state, cfg.fronts[e].right_state);
    for (int i = 0; i < n; ++i)
      if (s(i) != 0.0) out.push_back({x, i + 1, s(i), group});
    ++group;
    k = e + 1;
  }
  return out;
}

bool approaching(const HyperbolicSystem& sys, const Wave& a, const Wave& b) {
  if (a.group == b.group) return false;
  const int n = sys.n();
  const bool pa = a.family <= n, pb = b.family <= n;
  if (!pa) return pb;
  if (!pb) return false;
  if (a.family > b.family) return true;
  if (a.family == b.family && sys.gnl(a.family)) return a.strength < 0 || b.strength < 0;
  return false;
}

FunctionalReport compute_upsilon(const HyperbolicSystem& sys, const Boundary& bdry, const Configuration& cfg,
                                 const FunctionalWeights& w, UpsilonVariant variant) {
  const int n = sys.n();
  const WaveList waves = wave_list(sys, bdry, cfg, variant);
  FunctionalReport r;
  r.V_family.assign(n + 2, 0.0);
  for (const auto& a : waves) {
    const double s = std::abs(a.strength);
    r.V_family[a.family] += s;
    r.V += (a.family <= bdry.ell ? w.K : 1.0) * s;
  }
  // waves are sorted by position; pair count is quadratic but configurations stay small
  for (std::size_t i = 0; i < waves.size(); ++i)
    for (std::size_t j = i + 1; j < waves.size(); ++j)
      if (approaching(sys, waves[i], waves[j])) {
        r.Q += std::abs(waves[i].strength * waves[j].strength);
        ++r.approaching_pairs;
      }
  r.Vg = total_variation(bdry.gdata, cfg.time, kInf);
  r.Upsilon = r.V + w.H1 * r.Vg + w.H2 * r.Q;
  return r;
}

namespace {

std::vector<double> refinement(const Configuration& u, const Configuration& w) {
  std::vector<double> br{u.boundary_position};
  for (const auto* c : {&u, &w})
    for (const auto& f : c->fronts) {
      const double x = f.x(c->time);
      if (x > u.boundary_position) br.push_back(x);
    }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

}  // namespace

QCoordinates compute_q_coordinates(const HyperbolicSystem& sys, const Configuration& u, const Configuration& w,
                                   const NewtonOptions& opt) {
  if (u.time != w.time) fail(ErrorKind::ValidationError, "q-coordinates need configurations at one time");
  const PiecewiseConstant fu = u.to_function(), fw = w.to_function();
  const auto br = refinement(u, w);
  QCoordinates out;
  for (std::size_t k = 0; k < br.size(); ++k) {
    const double a = br[k], b = k + 1 < br.size() ? br[k + 1] : kInf;
    const State& uu = fu.at(a);
    const State& ww = fw.at(a);
    out.a.push_back(a);
    out.b.push_back(b);
    out.q.push_back(shock_strengths(sys, uu, ww, opt));
  }
  return out;
}

double compute_phi(const HyperbolicSystem& sys, const Boundary& bdry, const PhiInput& in, const FunctionalWeights& wt) {
  const Configuration& u = *in.u;
  const Configuration& v = *in.v;
  const Configuration& w = in.w ? *in.w : v;
  const int n = sys.n();
  const QCoordinates qc = compute_q_coordinates(sys, u, w);

  struct Jump {
    double x;
    int family;
    double s;
    bool in_u;
  };
  std::vector<Jump> jumps;
  for (const auto* c : {&u, &v})
    for (const auto& f : c->fronts)
      if (f.family <= n) jumps.push_back({f.x(c->time), f.family, std::abs(f.strength), c == &u});

  const double ups = in.upsilon_u + in.upsilon_v;
  double phi = 0.0;
  for (std::size_t k = 0; k < qc.q.size(); ++k) {
    const double len = qc.b[k] - qc.a[k];
    if (!std::isfinite(len)) {
      if (qc.q[k].norm() > 1e-10) fail(ErrorKind::ValidationError, "u and w differ at infinity");
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      const double qi = qc.q[k](i - 1);
      if (qi == 0.0) continue;
      double A = 0.0;
      for (const auto& j : jumps) {
        const bool left = j.x <= qc.a[k];  // y < x for every x in the interval
        if ((left && j.family > i) || (!left && j.family < i)) A += j.s;
        if (j.family == i && sys.gnl(i)) {
          // u-waves on the left or v-waves on the right when q_i < 0, the opposite otherwise
          const bool counts = qi < 0 ? (j.in_u == left) : (j.in_u != left);
          if (counts) A += j.s;
        }
      }
      const double W = 1.0 + wt.kappa1 * A + wt.kappa2 * ups;
      phi += (i <= bdry.ell ? wt.Kbar : 1.0) * std::abs(qi) * W * len;
    }
  }
  return phi;
}

}  // namespace wft
