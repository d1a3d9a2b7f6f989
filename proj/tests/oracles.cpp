#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace oracle {

namespace {

double diameter(const Eigen::MatrixXd& pts) {
  if (pts.cols() == 0) return 0.0;
  return (pts.rowwise().maxCoeff() - pts.rowwise().minCoeff()).norm();
}

Eigen::MatrixXd dedup(const Eigen::MatrixXd& pts, double tol) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    bool dup = false;
    for (auto k : keep) {
      if ((pts.col(i) - pts.col(k)).norm() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  Eigen::MatrixXd out(pts.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = pts.col(keep[i]);
  return out;
}

/// Orthonormal basis of the affine hull (columns), origin = mean.
Eigen::MatrixXd affine_basis(const Eigen::MatrixXd& pts, double tol, Eigen::VectorXd& origin) {
  origin = pts.rowwise().mean();
  const Eigen::MatrixXd centered = pts.colwise() - origin;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullU);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < pts.rows(); ++k) {
    const Eigen::RowVectorXd proj = svd.matrixU().col(k).transpose() * centered;
    if (proj.maxCoeff() - proj.minCoeff() > tol) cols.push_back(k);
  }
  Eigen::MatrixXd basis(pts.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = svd.matrixU().col(cols[i]);
  return basis;
}

Eigen::MatrixXd select(const Eigen::MatrixXd& pts, const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(pts.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = pts.col(idx[i]);
  return out;
}

/// Facets of a full-dimensional point set in its own coordinates (d = 2 or 3).
std::vector<Halfspace> facets_full(const Eigen::MatrixXd& pts, double tol) {
  const auto d = pts.rows();
  const auto n = pts.cols();
  std::vector<Halfspace> out;
  // `normal` is oriented so that every point satisfies normal . x <= offset.
  auto consider = [&](Eigen::VectorXd normal, double offset) {
    Halfspace h{std::move(normal), offset};
    for (const auto& e : out) {
      if ((e.normal - h.normal).norm() <= 1e-9 && std::abs(e.offset - h.offset) <= tol) return;
    }
    out.push_back(std::move(h));
  };
  if (d == 2) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const Eigen::Vector2d e = pts.col(j) - pts.col(i);
        if (e.norm() <= 1e-12) continue;
        const Eigen::Vector2d nrm = Eigen::Vector2d(e.y(), -e.x()).normalized();
        const double a = nrm.dot(pts.col(i));
        const Eigen::RowVectorXd proj = nrm.transpose() * pts;
        if (proj.maxCoeff() <= a + tol) consider(nrm, a);
        else if (proj.minCoeff() >= a - tol) consider(-nrm, -a);
      }
    }
  } else if (d == 3) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        for (Eigen::Index k = j + 1; k < n; ++k) {
          const Eigen::Vector3d a = pts.col(i), b = pts.col(j), c = pts.col(k);
          Eigen::Vector3d nrm = (b - a).cross(c - a);
          if (nrm.norm() <= 1e-12 * std::max(1.0, (b - a).norm() * (c - a).norm())) continue;
          nrm.normalize();
          const double off = nrm.dot(a);
          const Eigen::RowVectorXd proj = nrm.transpose() * pts;
          if (proj.maxCoeff() <= off + tol) consider(nrm, off);
          else if (proj.minCoeff() >= off - tol) consider(-nrm, -off);
        }
      }
    }
  }
  return out;
}

/// Points lying on facets whose normals span the full dimension.
std::vector<Eigen::Index> vertices_on(const Eigen::MatrixXd& pts, const std::vector<Halfspace>& hs, double tol) {
  const auto d = pts.rows();
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    std::vector<Eigen::VectorXd> normals;
    for (const auto& h : hs) {
      if (std::abs(h.normal.dot(pts.col(i)) - h.offset) <= tol) normals.push_back(h.normal);
    }
    if (static_cast<Eigen::Index>(normals.size()) < d) continue;
    Eigen::MatrixXd stack(static_cast<Eigen::Index>(normals.size()), d);
    for (std::size_t r = 0; r < normals.size(); ++r) stack.row(static_cast<Eigen::Index>(r)) = normals[r].transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(stack);
    lu.setThreshold(1e-7);
    if (lu.rank() == d) out.push_back(i);
  }
  return out;
}

/// Jarvis march over full-dimensional 2-D points; collinear boundary points are skipped.
std::vector<Eigen::Index> gift_wrap(const Eigen::MatrixXd& pts, double tol) {
  const auto n = pts.cols();
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (pts(1, i) < pts(1, start) || (pts(1, i) == pts(1, start) && pts(0, i) < pts(0, start))) start = i;
  }
  auto cross = [&](Eigen::Index o, Eigen::Index a, Eigen::Index b) {
    const Eigen::Vector2d u = pts.col(a) - pts.col(o), v = pts.col(b) - pts.col(o);
    return (u.x() * v.y() - u.y() * v.x()) / std::max(u.norm(), 1e-300);
  };
  std::vector<Eigen::Index> out;
  Eigen::Index cur = start;
  do {
    out.push_back(cur);
    Eigen::Index next = cur == 0 ? 1 : 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == cur) continue;
      const double c = cross(cur, next, i);
      // i is clockwise of next, or collinear and farther
      if (c < -tol || (std::abs(c) <= tol && (pts.col(i) - pts.col(cur)).norm() > (pts.col(next) - pts.col(cur)).norm())) next = i;
    }
    cur = next;
    if (out.size() > static_cast<std::size_t>(n)) throw std::logic_error("gift_wrap: no closure");
  } while (cur != start);
  return out;
}

}  // namespace

Eigen::MatrixXd points_on_facets(const Eigen::MatrixXd& pts, const std::vector<Halfspace>& hs, double tol) {
  return select(pts, vertices_on(pts, hs, tol));
}

Eigen::MatrixXd lifted_vertices(const zsm::ConZono& z, double tol) {
  const auto m = z.num_generators();
  const auto p = z.num_constraints();
  if (m == 0) return Eigen::MatrixXd(0, 1);
  if (m > 24) throw std::invalid_argument("lifted_vertices: too many generators for brute force");
  const Eigen::MatrixXd& a = z.con_matrix();
  const Eigen::VectorXd& b = z.con_vector();
  Eigen::Index rank = 0;
  if (p > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-10);
    rank = lu.rank();
    const Eigen::VectorXd x = lu.solve(b);
    if ((a * x - b).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, b.cwiseAbs().maxCoeff())) return Eigen::MatrixXd(m, 0);
  }
  const Eigen::Index fixed = m - rank;
  std::vector<Eigen::VectorXd> found;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) != fixed) continue;
    std::vector<Eigen::Index> fix, fre;
    for (Eigen::Index i = 0; i < m; ++i) ((mask >> i) & 1u ? fix : fre).push_back(i);
    Eigen::MatrixXd af(p, static_cast<Eigen::Index>(fre.size()));
    for (std::size_t k = 0; k < fre.size(); ++k) af.col(static_cast<Eigen::Index>(k)) = a.col(fre[k]);
    if (!fre.empty()) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(af);
      lu.setThreshold(1e-10);
      if (lu.rank() != static_cast<Eigen::Index>(fre.size())) continue;
    }
    for (unsigned signs = 0; signs < (1u << fixed); ++signs) {
      Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
      Eigen::VectorXd rhs = b;
      for (std::size_t k = 0; k < fix.size(); ++k) {
        beta(fix[k]) = (signs >> k) & 1u ? 1.0 : -1.0;
        if (p > 0) rhs -= a.col(fix[k]) * beta(fix[k]);
      }
      if (!fre.empty()) {
        const Eigen::VectorXd x = af.colPivHouseholderQr().solve(rhs);
        if ((af * x - rhs).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, rhs.cwiseAbs().maxCoeff())) continue;
        if (x.cwiseAbs().maxCoeff() > 1.0 + tol) continue;
        for (std::size_t k = 0; k < fre.size(); ++k) beta(fre[k]) = x(static_cast<Eigen::Index>(k));
      }
      found.push_back(beta);
    }
  }
  Eigen::MatrixXd out(m, static_cast<Eigen::Index>(found.size()));
  for (std::size_t i = 0; i < found.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = found[i];
  return out;
}

Eigen::MatrixXd candidate_points(const zsm::ConZono& z, double tol) {
  const Eigen::MatrixXd beta = lifted_vertices(z, tol);
  if (z.num_generators() == 0) return z.center();
  Eigen::MatrixXd pts = z.generators() * beta;
  return pts.colwise() + z.center();
}

Eigen::MatrixXd extreme_points(const Eigen::MatrixXd& pts_in, double tol) {
  if (pts_in.cols() == 0) return pts_in;
  const double scale = std::max(1.0, diameter(pts_in));
  const Eigen::MatrixXd pts = dedup(pts_in, tol * scale);
  Eigen::VectorXd origin;
  const Eigen::MatrixXd basis = affine_basis(pts, tol * scale, origin);
  const auto d = basis.cols();
  if (d == 0) return pts.col(0);
  const Eigen::MatrixXd local = basis.transpose() * (pts.colwise() - origin);
  if (d == 1) {
    Eigen::Index lo, hi;
    local.row(0).minCoeff(&lo);
    local.row(0).maxCoeff(&hi);
    return select(pts, {lo, hi});
  }
  if (d > 3) throw std::invalid_argument("extreme_points: dimension above 3");
  if (d == 2) return select(pts, gift_wrap(local, tol * scale));
  const auto hs = facets_full(local, tol * scale);
  return select(pts, vertices_on(local, hs, 10 * tol * scale));
}

Eigen::MatrixXd vertex_set(const zsm::ConZono& z) { return extreme_points(candidate_points(z)); }

std::vector<Halfspace> facets(const Eigen::MatrixXd& pts, double tol) {
  const double scale = std::max(1.0, diameter(pts));
  return facets_full(dedup(pts, tol * scale), tol * scale);
}

Eigen::MatrixXd halfspace_vertices(const std::vector<Halfspace>& hs, int dim, double tol) {
  std::vector<Eigen::VectorXd> found;
  const std::size_t n = hs.size();
  auto feasible = [&](const Eigen::VectorXd& x) {
    for (const auto& h : hs) {
      if (h.normal.dot(x) > h.offset + tol * std::max(1.0, std::abs(h.offset))) return false;
    }
    return true;
  };
  auto solve = [&](const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd a(dim, dim);
    Eigen::VectorXd b(dim);
    for (int r = 0; r < dim; ++r) {
      a.row(r) = hs[idx[static_cast<std::size_t>(r)]].normal.transpose();
      b(r) = hs[idx[static_cast<std::size_t>(r)]].offset;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < dim || std::abs(lu.determinant()) < 1e-10) return;
    const Eigen::VectorXd x = lu.solve(b);
    if (feasible(x)) found.push_back(x);
  };
  if (dim == 2) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) solve({i, j});
  } else if (dim == 3) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) solve({i, j, k});
  } else {
    throw std::invalid_argument("halfspace_vertices: dimension must be 2 or 3");
  }
  Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(found.size()));
  for (std::size_t i = 0; i < found.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = found[i];
  if (out.cols() == 0) return out;
  return extreme_points(out);
}

Eigen::MatrixXd pairwise_sums(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) out.col(i * b.cols() + j) = a.col(i) + b.col(j);
  return out;
}

double normalized_hausdorff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() == 0 || b.cols() == 0) return a.cols() == b.cols() ? 0.0 : std::numeric_limits<double>::infinity();
  auto directed = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.cols(); ++i) worst = std::max(worst, (y.colwise() - x.col(i)).colwise().norm().minCoeff());
    return worst;
  };
  Eigen::MatrixXd both(a.rows(), a.cols() + b.cols());
  both << a, b;
  return std::max(directed(a, b), directed(b, a)) / std::max(1.0, diameter(both));
}

bool same_points(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
  if (a.cols() == 0 || b.cols() == 0) return a.cols() == b.cols();
  return normalized_hausdorff(a, b) <= tol;
}

Eigen::MatrixXd sample_points(const zsm::ConZono& z, int count, std::mt19937_64& rng) {
  const Eigen::MatrixXd beta = lifted_vertices(z);
  if (beta.cols() == 0) return Eigen::MatrixXd(z.dim(), 0);
  std::exponential_distribution<double> expo(1.0);
  Eigen::MatrixXd out(z.dim(), count);
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd w(beta.cols());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::pow(expo(rng), 3.0);  // skewed toward corners
    w /= w.sum();
    const Eigen::VectorXd b = beta * w;
    out.col(s) = z.num_generators() ? Eigen::VectorXd(z.center() + z.generators() * b) : z.center();
  }
  return out;
}

bool in_hull(const Eigen::MatrixXd& vertices, const Eigen::VectorXd& x, double tol) {
  for (const auto& h : facets(vertices)) {
    if (h.normal.dot(x) > h.offset + tol) return false;
  }
  return true;
}

zsm::ConZono random_conzono(std::mt19937_64& rng, int n, int m, int p, double spread) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g;
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c(i) = 0.5 * spread * u(rng);
  Eigen::MatrixXd gen(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) gen(i, j) = spread * u(rng);
  Eigen::MatrixXd a(p, m);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = g(rng);
  Eigen::VectorXd beta0(m);
  for (int j = 0; j < m; ++j) beta0(j) = 0.6 * u(rng);
  const Eigen::VectorXd b = a * beta0;
  return zsm::ConZono(c, gen, a, b);
}

bool segment_hits_box(const Eigen::Vector3d& p, const Eigen::Vector3d& q, const Eigen::Vector3d& lo,
                      const Eigen::Vector3d& hi) {
  double t0 = 0.0, t1 = 1.0;
  const Eigen::Vector3d d = q - p;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d(i)) < 1e-300) {
      if (p(i) < lo(i) || p(i) > hi(i)) return false;
      continue;
    }
    double a = (lo(i) - p(i)) / d(i), b = (hi(i) - p(i)) / d(i);
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    if (t0 > t1) return false;
  }
  return true;
}

bool occluded(const std::vector<zsm::BoxSpec>& boxes, const Eigen::Vector2d& x, const Eigen::Vector3d& sat) {
  const Eigen::Vector3d from(x.x(), x.y(), 0.0);
  for (const auto& b : boxes) {
    if (segment_hits_box(from, sat, {b.x0, b.y0, 0.0}, {b.x1, b.y1, b.height})) return true;
  }
  return false;
}

int lattice_count(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi, double spacing,
                  const std::vector<zsm::BoxSpec>& excluded) {
  const int nx = static_cast<int>(std::floor((hi.x() - lo.x()) / spacing + 1e-9));
  const int ny = static_cast<int>(std::floor((hi.y() - lo.y()) / spacing + 1e-9));
  const double x0 = (lo.x() + hi.x()) / 2 - spacing * (nx - 1) / 2;
  const double y0 = (lo.y() + hi.y()) / 2 - spacing * (ny - 1) / 2;
  int count = 0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double x = x0 + i * spacing, y = y0 + j * spacing;
      bool inside = false;
      for (const auto& b : excluded) inside = inside || (x > b.x0 && x < b.x1 && y > b.y0 && y < b.y1);
      count += !inside;
    }
  }
  return count;
}

}  // namespace oracle
