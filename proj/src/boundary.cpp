#include "wft/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wft/errors.hpp"

namespace wft {

PiecewiseLinearCurve::PiecewiseLinearCurve(double x0, double slope) : times_{0.0}, positions_{x0}, slopes_{slope} {}

PiecewiseLinearCurve::PiecewiseLinearCurve(std::vector<double> times, std::vector<double> positions,
                                           double tail_slope)
    : times_(std::move(times)), positions_(std::move(positions)) {
  if (times_.empty() || times_.size() != positions_.size())
    fail(ErrorKind::ValidationError, "curve needs matching, non-empty knot lists");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) fail(ErrorKind::ValidationError, "curve knot times must increase");
    slopes_.push_back((positions_[k] - positions_[k - 1]) / (times_[k] - times_[k - 1]));
  }
  slopes_.push_back(tail_slope);
}

std::size_t PiecewiseLinearCurve::piece_of(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
}

double PiecewiseLinearCurve::piece_end(std::size_t k) const {
  return k + 1 < times_.size() ? times_[k + 1] : kInf;
}

double PiecewiseLinearCurve::at(double t) const {
  const std::size_t k = piece_of(t);
  return positions_[k] + slopes_[k] * (t - times_[k]);
}

double PiecewiseLinearCurve::slope(double t) const { return slopes_[piece_of(t)]; }

PiecewiseLinearCurve PiecewiseLinearCurve::shifted(double dx) const {
  PiecewiseLinearCurve c = *this;
  for (auto& x : c.positions_) x += dx;
  return c;
}

std::vector<double> PiecewiseLinearCurve::kinks(double a, double b) const {
  std::vector<double> out;
  for (std::size_t k = 1; k < times_.size(); ++k)
    if (times_[k] > a && times_[k] < b) out.push_back(times_[k]);
  return out;
}

Matrix BoundaryMap::jacobian(const State& u) const {
  const int n = static_cast<int>(u.size());
  Matrix J(out_dim(), n);
  for (int k = 0; k < n; ++k) {
    const double h = 1e-7 * std::max(1.0, std::abs(u(k)));
    State up = u, um = u;
    up(k) += h;
    um(k) -= h;
    J.col(k) = (eval(up) - eval(um)) / (2 * h);
  }
  return J;
}

AffineBoundaryMap::AffineBoundaryMap(Matrix B, State ref, std::string label)
    : B_(std::move(B)), ref_(std::move(ref)), label_(std::move(label)) {
  if (B_.cols() != ref_.size()) fail(ErrorKind::ValidationError, "boundary map dimension mismatch");
}

std::shared_ptr<AffineBoundaryMap> AffineBoundaryMap::identity(const State& base) {
  const auto n = base.size();
  return std::make_shared<AffineBoundaryMap>(Matrix::Identity(n, n), base, "identity");
}

std::shared_ptr<AffineBoundaryMap> AffineBoundaryMap::components(const std::vector<int>& idx, const State& base) {
  Matrix B = Matrix::Zero(static_cast<Eigen::Index>(idx.size()), base.size());
  std::ostringstream label;
  label << "components[";
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] < 0 || idx[r] >= base.size()) fail(ErrorKind::ValidationError, "boundary component out of range");
    B(static_cast<Eigen::Index>(r), idx[r]) = 1.0;
    label << (r ? "," : "") << idx[r];
  }
  label << "]";
  return std::make_shared<AffineBoundaryMap>(B, base, label.str());
}

std::shared_ptr<AffineBoundaryMap> AffineBoundaryMap::relative_flux(double frame_speed, const State& base) {
  if (base.size() != 2) fail(ErrorKind::ValidationError, "relative-flux map needs a 2x2 system");
  Matrix B(1, 2);
  B << -frame_speed, 1.0;
  return std::make_shared<AffineBoundaryMap>(B, base, "relative-flux(" + std::to_string(frame_speed) + ")");
}

std::optional<std::string> noncharacteristic_violation(const HyperbolicSystem& sys,
                                                       const PiecewiseLinearCurve& curve, int ell, double c) {
  if (ell < 0 || ell > sys.n()) return "ell must lie in [0, n]";
  if (!(c > 0)) return "margin c must be positive";
  for (std::size_t k = 0; k < curve.pieces(); ++k) {
    const double s = curve.piece_slope(k);
    std::ostringstream os;
    if (ell >= 1) {
      const auto [lo, hi] = sys.speed_bounds(ell);
      if (s < hi + c) {
        os << "piece " << k << " slope " << s << " violates family " << ell << " speed interval [" << lo << ", "
           << hi << "] with margin " << c;
        return os.str();
      }
    }
    if (ell < sys.n()) {
      const auto [lo, hi] = sys.speed_bounds(ell + 1);
      if (s > lo - c) {
        os << "piece " << k << " slope " << s << " violates family " << ell + 1 << " speed interval [" << lo
           << ", " << hi << "] with margin " << c;
        return os.str();
      }
    }
  }
  return std::nullopt;
}

double boundary_determinant(const HyperbolicSystem& sys, const Boundary& bdry) {
  const State& u = sys.base();
  const Matrix Db = bdry.bmap->jacobian(u);
  const Eigensystem e = sys.eigen(u);
  const int m = sys.n() - bdry.ell;
  if (m == 0) return 1.0;
  Matrix M(Db.rows(), m);
  for (int j = 0; j < m; ++j) M.col(j) = Db * e.right.col(bdry.ell + j);
  return M.determinant();
}

void Boundary::validate(const HyperbolicSystem& sys) const {
  if (!bmap) fail(ErrorKind::ValidationError, "boundary.bmap missing");
  if (ell < 0 || ell > sys.n() - 1)
    fail(ErrorKind::ValidationError, "boundary.ell must lie in [0, n-1], got " + std::to_string(ell));
  if (bmap->out_dim() != sys.n() - ell)
    fail(ErrorKind::ValidationError, "boundary map must have n - ell components");
  if (gdata.values.empty() || gdata.dim() != sys.n() - ell)
    fail(ErrorKind::ValidationError, "boundary data must have n - ell components");
  if (auto msg = noncharacteristic_violation(sys, gamma, ell, margin_c))
    fail(ErrorKind::ValidationError, "boundary.gamma " + *msg);
  if (bmap->eval(sys.base()).norm() > 1e-12) fail(ErrorKind::ValidationError, "boundary map must vanish at the base state");
  if (std::abs(boundary_determinant(sys, *this)) < 1e-8)
    fail(ErrorKind::DegenerateBoundary, "boundary map determinant below 1e-8");
}

}  // namespace wft
