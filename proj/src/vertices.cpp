#include "zsm/vertices.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "zsm/hull.hpp"
#include "zsm/linprog.hpp"
#include "zsm/log.hpp"

namespace zsm {

namespace {

/// Normalise each row of [A | b] by the largest |A_ij|; all-zero rows are
/// returned via `zero_rhs` for the caller to check.
void normalise_rows(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::MatrixXd& an, Eigen::VectorXd& bn,
                    double& zero_rhs) {
  std::vector<Eigen::Index> keep;
  zero_rhs = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (a.row(i).cwiseAbs().maxCoeff() == 0.0) {
      zero_rhs = std::max(zero_rhs, std::abs(b(i)));
    } else {
      keep.push_back(i);
    }
  }
  an.resize(static_cast<Eigen::Index>(keep.size()), a.cols());
  bn.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const auto i = keep[r];
    const double s = a.row(i).cwiseAbs().maxCoeff();
    an.row(static_cast<Eigen::Index>(r)) = a.row(i) / s;
    bn(static_cast<Eigen::Index>(r)) = b(i) / s;
  }
}

/// Clip p + t (q - p), t in [t0, t1], to the box [lo, hi].
bool clip_to_box(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const Eigen::VectorXd& lo,
                 const Eigen::VectorXd& hi, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double d = q(i) - p(i);
    if (d == 0.0) {
      if (p(i) < lo(i) || p(i) > hi(i)) return false;
      continue;
    }
    double ta = (lo(i) - p(i)) / d, tb = (hi(i) - p(i)) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

class SupportOracle {
 public:
  SupportOracle(const ConZono& z, lp::Simplex& lp) : z_(z), lp_(lp) {}

  Eigen::VectorXd operator()(const Eigen::VectorXd& direction) {
    lp_.maximize(z_.generators().transpose() * direction);
    return z_.center() + z_.generators() * lp_.solution();
  }

 private:
  const ConZono& z_;
  lp::Simplex& lp_;
};

class PointPool {
 public:
  explicit PointPool(double dedup_tol) : tol_(dedup_tol) {}

  /// Returns the index of x, adding it when no stored point is within tolerance.
  int add(const Eigen::VectorXd& x, bool* added = nullptr) {
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if ((pts_[i] - x).norm() <= tol_) {
        if (added) *added = false;
        return static_cast<int>(i);
      }
    }
    pts_.push_back(x);
    if (added) *added = true;
    return static_cast<int>(pts_.size() - 1);
  }

  std::size_t size() const { return pts_.size(); }
  const Eigen::VectorXd& operator[](std::size_t i) const { return pts_[i]; }
  void set_tolerance(double tol) { tol_ = tol; }

  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd m(pts_.empty() ? 0 : pts_.front().size(), static_cast<Eigen::Index>(pts_.size()));
    for (std::size_t i = 0; i < pts_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = pts_[i];
    return m;
  }

 private:
  double tol_;
  std::vector<Eigen::VectorXd> pts_;
};

struct AffineFrame {
  Eigen::VectorXd origin;
  Eigen::MatrixXd basis;       // n x r, orthonormal
  Eigen::MatrixXd complement;  // n x (n - r)
};

AffineFrame affine_frame(const PointPool& pool, double flat_tol) {
  const Eigen::MatrixXd pts = pool.matrix();
  const auto n = pts.rows();
  AffineFrame frame;
  frame.origin = pts.rowwise().mean();
  const Eigen::MatrixXd centered = pts.colwise() - frame.origin;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullU);
  std::vector<Eigen::Index> spanned, flat;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::RowVectorXd proj = svd.matrixU().col(k).transpose() * centered;
    (proj.maxCoeff() - proj.minCoeff() > flat_tol ? spanned : flat).push_back(k);
  }
  frame.basis.resize(n, static_cast<Eigen::Index>(spanned.size()));
  frame.complement.resize(n, static_cast<Eigen::Index>(flat.size()));
  for (std::size_t i = 0; i < spanned.size(); ++i)
    frame.basis.col(static_cast<Eigen::Index>(i)) = svd.matrixU().col(spanned[i]);
  for (std::size_t i = 0; i < flat.size(); ++i)
    frame.complement.col(static_cast<Eigen::Index>(i)) = svd.matrixU().col(flat[i]);
  if (frame.basis.cols() == n) {
    frame.basis = Eigen::MatrixXd::Identity(n, n);
    frame.origin.setZero();
  }
  return frame;
}

std::vector<int> polygon_by_support(SupportOracle& support, PointPool& pool, const AffineFrame& frame,
                                    double flat_tol) {
  std::set<std::pair<int, int>> confirmed;
  for (int guard = 0; guard < 10000; ++guard) {
    Eigen::Matrix2Xd local(2, static_cast<Eigen::Index>(pool.size()));
    for (std::size_t i = 0; i < pool.size(); ++i)
      local.col(static_cast<Eigen::Index>(i)) = frame.basis.transpose() * (pool[i] - frame.origin);
    const auto ring = hull::convex_hull_2d(local, flat_tol);
    if (ring.size() < 3) return ring;
    bool grew = false;
    for (std::size_t e = 0; e < ring.size(); ++e) {
      const int i = ring[e], j = ring[(e + 1) % ring.size()];
      if (confirmed.count({i, j})) continue;
      const Eigen::Vector2d edge = local.col(j) - local.col(i);
      const Eigen::Vector2d normal = Eigen::Vector2d(edge.y(), -edge.x()).normalized();
      const Eigen::VectorXd s = support(frame.basis * normal);
      const Eigen::Vector2d ls = frame.basis.transpose() * (s - frame.origin);
      bool added = false;
      if (normal.dot(ls - local.col(i)) > flat_tol) pool.add(s, &added);
      if (added) {
        grew = true;
      } else {
        confirmed.insert({i, j});
      }
    }
    if (!grew) return ring;
  }
  throw std::runtime_error("vertices: polygon support iteration did not converge");
}

std::vector<int> polytope_by_support(SupportOracle& support, PointPool& pool, const AffineFrame& frame,
                                     double flat_tol) {
  std::set<std::array<int, 3>> confirmed;
  for (int guard = 0; guard < 10000; ++guard) {
    Eigen::Matrix3Xd local(3, static_cast<Eigen::Index>(pool.size()));
    for (std::size_t i = 0; i < pool.size(); ++i)
      local.col(static_cast<Eigen::Index>(i)) = frame.basis.transpose() * (pool[i] - frame.origin);
    const auto h = hull::convex_hull_3d(local, flat_tol);
    bool grew = false;
    for (const auto& f : h.facets) {
      auto key = f.corners;
      std::sort(key.begin(), key.end());
      if (confirmed.count(key)) continue;
      const Eigen::VectorXd s = support(frame.basis * f.normal);
      const Eigen::Vector3d ls = frame.basis.transpose() * (s - frame.origin);
      bool added = false;
      if (f.normal.dot(ls) - f.offset > flat_tol) pool.add(s, &added);
      if (added) {
        grew = true;
      } else {
        confirmed.insert(key);
      }
    }
    if (!grew) return h.vertices;
  }
  throw std::runtime_error("vertices: polytope support iteration did not converge");
}

}  // namespace

ReducedConstraints reduce_constraints(const Eigen::MatrixXd& con_matrix, const Eigen::VectorXd& con_vector,
                                      double tol) {
  ReducedConstraints out;
  Eigen::MatrixXd an;
  Eigen::VectorXd bn;
  double zero_rhs = 0.0;
  normalise_rows(con_matrix, con_vector, an, bn, zero_rhs);
  out.dropped = con_matrix.rows() - an.rows();
  if (zero_rhs > tol) {
    out.consistent = false;
    return out;
  }
  const auto m = con_matrix.cols();
  if (an.rows() == 0) {
    out.con_matrix.resize(0, m);
    out.con_vector.resize(0);
    return out;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(an.transpose());
  qr.setThreshold(tol);
  const auto rank = qr.rank();
  const auto& perm = qr.colsPermutation().indices();
  const Eigen::MatrixXd r = qr.matrixR().template triangularView<Eigen::Upper>();
  const double r00 = std::abs(r(0, 0));
  for (Eigen::Index k = 0; k < rank; ++k) {
    if (std::abs(r(k, k)) < 1e-6 * r00) {
      std::ostringstream msg;
      msg << "constraint matrix is nearly rank deficient (pivot ratio " << std::abs(r(k, k)) / r00 << ")";
      log::warn(msg.str());
      break;
    }
  }

  out.con_matrix.resize(rank, m);
  out.con_vector.resize(rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    out.con_matrix.row(k) = an.row(perm(k));
    out.con_vector(k) = bn(perm(k));
  }
  out.dropped += an.rows() - rank;

  // Dependent rows must agree with the independent ones.
  if (rank < an.rows()) {
    const Eigen::MatrixXd& ai = out.con_matrix;
    const Eigen::VectorXd x = ai.transpose() * (ai * ai.transpose()).ldlt().solve(out.con_vector);
    const double residual = (an * x - bn).cwiseAbs().maxCoeff();
    if (residual > 1e3 * tol * std::max(1.0, bn.cwiseAbs().maxCoeff())) out.consistent = false;
  }
  return out;
}

ConZono reduce(const ConZono& z, double tol) {
  auto red = reduce_constraints(z.con_matrix(), z.con_vector(), tol);
  if (!red.consistent) throw std::domain_error("reduce: inconsistent constraints");
  return ConZono(z.center(), z.generators(), std::move(red.con_matrix), std::move(red.con_vector));
}

VertexList vertices(const ConZono& z, const VertexOptions& options) {
  const auto n = z.dim();
  const auto m = z.num_generators();
  if (m > options.max_generators) {
    throw std::invalid_argument("vertices: " + std::to_string(m) + " generators exceed the cap of " +
                                std::to_string(options.max_generators));
  }
  const auto red = reduce_constraints(z.con_matrix(), z.con_vector(), options.tol);
  if (!red.consistent) return VertexList(n, 0);
  if (m == 0) return z.center();

  lp::Problem problem{red.con_matrix, red.con_vector, -Eigen::VectorXd::Ones(m), Eigen::VectorXd::Ones(m)};
  const double feas_tol =
      options.tol * std::max(1.0, red.con_vector.size() ? red.con_vector.cwiseAbs().maxCoeff() : 0.0) *
      std::max<double>(1.0, static_cast<double>(red.con_vector.size()));
  lp::Simplex simplex(problem, {feas_tol});
  if (!simplex.feasible()) return VertexList(n, 0);
  SupportOracle support(z, simplex);

  // Axis supports give the bounding box and hence the working scale.
  std::vector<Eigen::VectorXd> axis_points;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (double sgn : {1.0, -1.0}) axis_points.push_back(support(sgn * Eigen::VectorXd::Unit(n, i)));
  }
  Eigen::VectorXd lo = axis_points.front(), hi = axis_points.front();
  for (const auto& p : axis_points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double scale = std::max(1.0, (hi - lo).norm());
  const double flat_tol = options.tol * scale;
  PointPool pool(flat_tol);
  for (const auto& p : axis_points) pool.add(p);

  AffineFrame frame = affine_frame(pool, flat_tol);
  while (frame.complement.cols() > 0) {
    bool grew = false;
    for (Eigen::Index k = 0; k < frame.complement.cols() && !grew; ++k) {
      const Eigen::VectorXd d = frame.complement.col(k);
      const Eigen::VectorXd a = support(d), b = support(-d);
      if (d.dot(a) - d.dot(b) > flat_tol) {
        pool.add(a);
        pool.add(b);
        grew = true;
      }
    }
    if (!grew) break;
    frame = affine_frame(pool, flat_tol);
  }

  std::vector<int> keep;
  switch (frame.basis.cols()) {
    case 0:
      keep = {0};
      break;
    case 1: {
      const Eigen::VectorXd u = frame.basis.col(0);
      keep = {pool.add(support(u)), pool.add(support(-u))};
      break;
    }
    case 2:
      keep = polygon_by_support(support, pool, frame, flat_tol);
      break;
    case 3:
      keep = polytope_by_support(support, pool, frame, flat_tol);
      break;
    default:
      throw std::invalid_argument("vertices: sets of affine dimension above 3 are not supported");
  }

  VertexList out(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = pool[static_cast<std::size_t>(keep[i])];
  return out;
}

bool is_empty(const ConZono& z, double tol) {
  const auto red = reduce_constraints(z.con_matrix(), z.con_vector(), tol);
  if (!red.consistent) return true;
  const auto m = z.num_generators();
  if (m == 0 || red.con_matrix.rows() == 0) return false;
  lp::Problem problem{red.con_matrix, red.con_vector, -Eigen::VectorXd::Ones(m), Eigen::VectorXd::Ones(m)};
  const double feas_tol = tol * std::max(1.0, red.con_vector.cwiseAbs().maxCoeff()) *
                          std::max<double>(1.0, static_cast<double>(red.con_vector.size()));
  return !lp::is_feasible(problem, {feas_tol});
}

bool contains_point(const ConZono& z, const Eigen::VectorXd& x, double tol) {
  if (x.size() != z.dim()) throw std::invalid_argument("contains_point: dimension mismatch");
  Eigen::MatrixXd an;
  Eigen::VectorXd bn;
  double zero_rhs = 0.0;
  normalise_rows(z.con_matrix(), z.con_vector(), an, bn, zero_rhs);
  if (zero_rhs > tol) return false;
  const auto n = z.dim(), m = z.num_generators();
  if (m == 0) return (x - z.center()).cwiseAbs().sum() <= tol;

  lp::Problem problem;
  problem.eq.resize(n + an.rows(), m);
  problem.eq << z.generators(), an;
  problem.rhs.resize(n + an.rows());
  problem.rhs << x - z.center(), bn;
  problem.lower = -Eigen::VectorXd::Ones(m);
  problem.upper = Eigen::VectorXd::Ones(m);
  return lp::is_feasible(problem, {tol});
}

bool segment_hits(const ConZono& z, const Eigen::VectorXd& p, const Eigen::VectorXd& q, double tol) {
  const auto n = z.dim(), m = z.num_generators();
  if (p.size() != n || q.size() != n) throw std::invalid_argument("segment_hits: dimension mismatch");

  auto [lo, hi] = z.interval_hull();
  lo.array() -= tol;
  hi.array() += tol;
  double t0, t1;
  if (!clip_to_box(p, q, lo, hi, t0, t1)) return false;
  const Eigen::VectorXd a = p + t0 * (q - p);
  const Eigen::VectorXd d = (t1 - t0) * (q - p);

  // Parallelepiped: slab test in generator coordinates.
  if (z.num_constraints() == 0 && m == n && m > 0) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(z.generators());
    if (lu.rcond() > 1e-10) {
      const Eigen::MatrixXd inv = lu.inverse();
      const double slack = 1.0 + tol * inv.cwiseAbs().rowwise().sum().maxCoeff();
      const Eigen::VectorXd ba = inv * (a - z.center());
      const Eigen::VectorXd bd = inv * d;
      Eigen::VectorXd blo = Eigen::VectorXd::Constant(n, -slack), bhi = Eigen::VectorXd::Constant(n, slack);
      double s0, s1;
      return clip_to_box(ba, ba + bd, blo, bhi, s0, s1);
    }
  }

  Eigen::MatrixXd an;
  Eigen::VectorXd bn;
  double zero_rhs = 0.0;
  normalise_rows(z.con_matrix(), z.con_vector(), an, bn, zero_rhs);
  if (zero_rhs > tol) return false;

  // Unknowns: beta (m) and s in [0, 1] along the clipped segment a + s d.
  lp::Problem problem;
  problem.eq = Eigen::MatrixXd::Zero(n + an.rows(), m + 1);
  problem.eq.topLeftCorner(n, m) = z.generators();
  problem.eq.topRightCorner(n, 1) = -d;
  problem.eq.bottomLeftCorner(an.rows(), m) = an;
  problem.rhs.resize(n + an.rows());
  problem.rhs << a - z.center(), bn;
  problem.lower = -Eigen::VectorXd::Ones(m + 1);
  problem.upper = Eigen::VectorXd::Ones(m + 1);
  problem.lower(m) = 0.0;
  return lp::is_feasible(problem, {tol});
}

}  // namespace zsm
