#ifndef ZSM_CONZONO_HPP
#define ZSM_CONZONO_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace zsm {

/**
 * Constrained zonotope
 *
 *   { center + generators * beta : beta in [-1,1]^m, con_matrix * beta = con_vector }
 *
 * Empty generator (m = 0) and constraint (p = 0) blocks are first-class.
 * A plain zonotope is the p = 0 case, a point is m = 0.
 *
 * Values are immutable after construction; all algebra below is free
 * functions returning new values.
 */
template <typename Scalar>
class ConstrainedZonotope {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  ConstrainedZonotope() = default;

  /// Validates dimensions and finiteness. Does not check non-emptiness.
  ConstrainedZonotope(Vector center, Matrix generators, Matrix con_matrix, Vector con_vector)
      : center_(std::move(center)),
        generators_(std::move(generators)),
        con_matrix_(std::move(con_matrix)),
        con_vector_(std::move(con_vector)) {
    const Eigen::Index n = center_.size();
    // An empty generator block may arrive as 0x0; normalise to n x 0.
    if (generators_.cols() == 0) generators_.resize(n, 0);
    const Eigen::Index m = generators_.cols();
    if (generators_.rows() != n) {
      throw std::invalid_argument("conzono: generator matrix has " + std::to_string(generators_.rows()) +
                                  " rows, center has length " + std::to_string(n));
    }
    if (con_vector_.size() == 0 && con_matrix_.rows() == 0) con_matrix_.resize(0, m);
    if (con_matrix_.rows() != con_vector_.size()) {
      throw std::invalid_argument("conzono: constraint matrix rows do not match constraint vector length");
    }
    if (con_matrix_.rows() > 0 && con_matrix_.cols() != m) {
      throw std::invalid_argument("conzono: constraint matrix has " + std::to_string(con_matrix_.cols()) +
                                  " columns, expected " + std::to_string(m));
    }
    if (!center_.allFinite() || !generators_.allFinite() || !con_matrix_.allFinite() ||
        !con_vector_.allFinite()) {
      throw std::invalid_argument("conzono: non-finite entry");
    }
  }

  /// Point (no generators, no constraints).
  static ConstrainedZonotope point(Vector c) {
    const auto n = c.size();
    return ConstrainedZonotope(std::move(c), Matrix(n, 0), Matrix(0, 0), Vector(0));
  }

  /// Zonotope (no constraints).
  static ConstrainedZonotope zonotope(Vector c, Matrix g) {
    const auto m = g.cols();
    return ConstrainedZonotope(std::move(c), std::move(g), Matrix(0, m), Vector(0));
  }

  /// Axis-aligned box [lo, hi].
  static ConstrainedZonotope box(const Vector& lo, const Vector& hi) {
    if (lo.size() != hi.size()) throw std::invalid_argument("conzono: box bound size mismatch");
    if ((hi.array() < lo.array()).any()) throw std::invalid_argument("conzono: box with hi < lo");
    Vector half = (hi - lo) / Scalar(2);
    return zonotope((lo + hi) / Scalar(2), half.asDiagonal().toDenseMatrix());
  }

  Eigen::Index dim() const { return center_.size(); }
  Eigen::Index num_generators() const { return generators_.cols(); }
  Eigen::Index num_constraints() const { return con_matrix_.rows(); }

  const Vector& center() const { return center_; }
  const Matrix& generators() const { return generators_; }
  const Matrix& con_matrix() const { return con_matrix_; }
  const Vector& con_vector() const { return con_vector_; }

  /// Box enclosing the set obtained by ignoring the constraints.
  std::pair<Vector, Vector> interval_hull() const {
    Vector radius = generators_.cwiseAbs().rowwise().sum();
    if (generators_.cols() == 0) radius = Vector::Zero(dim());
    return {center_ - radius, center_ + radius};
  }

 private:
  Vector center_;
  Matrix generators_;
  Matrix con_matrix_;
  Vector con_vector_;
};

using ConZono = ConstrainedZonotope<double>;

template <typename Scalar>
ConstrainedZonotope<Scalar> make_conzono(typename ConstrainedZonotope<Scalar>::Vector center,
                                         typename ConstrainedZonotope<Scalar>::Matrix generators,
                                         typename ConstrainedZonotope<Scalar>::Matrix con_matrix,
                                         typename ConstrainedZonotope<Scalar>::Vector con_vector) {
  return ConstrainedZonotope<Scalar>(std::move(center), std::move(generators), std::move(con_matrix),
                                     std::move(con_vector));
}

inline ConZono make_conzono(Eigen::VectorXd center, Eigen::MatrixXd generators, Eigen::MatrixXd con_matrix,
                            Eigen::VectorXd con_vector) {
  return ConZono(std::move(center), std::move(generators), std::move(con_matrix), std::move(con_vector));
}

namespace detail {

template <typename Scalar>
void require_same_dim(const ConstrainedZonotope<Scalar>& a, const ConstrainedZonotope<Scalar>& b,
                      const char* op) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace detail

/// Z1 (+) Z2: centers add, generators concatenate, constraints block-diagonal.
template <typename Scalar>
ConstrainedZonotope<Scalar> minkowski_sum(const ConstrainedZonotope<Scalar>& z1,
                                          const ConstrainedZonotope<Scalar>& z2) {
  using CZ = ConstrainedZonotope<Scalar>;
  detail::require_same_dim(z1, z2, "minkowski_sum");
  const auto n = z1.dim();
  const auto m1 = z1.num_generators(), m2 = z2.num_generators();
  const auto p1 = z1.num_constraints(), p2 = z2.num_constraints();

  typename CZ::Matrix g(n, m1 + m2);
  g << z1.generators(), z2.generators();

  typename CZ::Matrix a = CZ::Matrix::Zero(p1 + p2, m1 + m2);
  a.topLeftCorner(p1, m1) = z1.con_matrix();
  a.bottomRightCorner(p2, m2) = z2.con_matrix();
  typename CZ::Vector b(p1 + p2);
  b << z1.con_vector(), z2.con_vector();

  return CZ(z1.center() + z2.center(), std::move(g), std::move(a), std::move(b));
}

/// Z1 n Z2 with generators [G1, 0] and the coupling constraint G1 b1 - G2 b2 = c2 - c1.
template <typename Scalar>
ConstrainedZonotope<Scalar> intersect(const ConstrainedZonotope<Scalar>& z1, const ConstrainedZonotope<Scalar>& z2) {
  using CZ = ConstrainedZonotope<Scalar>;
  detail::require_same_dim(z1, z2, "intersect");
  const auto n = z1.dim();
  const auto m1 = z1.num_generators(), m2 = z2.num_generators();
  const auto p1 = z1.num_constraints(), p2 = z2.num_constraints();

  typename CZ::Matrix g = CZ::Matrix::Zero(n, m1 + m2);
  g.leftCols(m1) = z1.generators();

  typename CZ::Matrix a = CZ::Matrix::Zero(p1 + p2 + n, m1 + m2);
  a.topLeftCorner(p1, m1) = z1.con_matrix();
  a.block(p1, m1, p2, m2) = z2.con_matrix();
  a.block(p1 + p2, 0, n, m1) = z1.generators();
  a.block(p1 + p2, m1, n, m2) = -z2.generators();

  typename CZ::Vector b(p1 + p2 + n);
  b << z1.con_vector(), z2.con_vector(), z2.center() - z1.center();

  return CZ(z1.center(), std::move(g), std::move(a), std::move(b));
}

/**
 * conv(Z1 u Z2) via the lifted construction with one interpolation
 * generator 1/2 (c1 - c2) and 2(m1 + m2) slack generators:
 *
 *   G  = [G1, G2, (c1 - c2)/2, 0]
 *   A  = [ A1  0   -b1/2  0 ]      b = [ b1/2 ]
 *        [ 0   A2   b2/2  0 ]          [ b2/2 ]
 *        [ A31 A32  A30   I ]          [ -1/2 ]
 *
 * with A31 = [I; -I; 0], A32 = [0; I; -I], A30 = [-1/2 1; +1/2 1].
 */
template <typename Scalar>
ConstrainedZonotope<Scalar> convex_hull_pair(const ConstrainedZonotope<Scalar>& z1,
                                             const ConstrainedZonotope<Scalar>& z2) {
  using CZ = ConstrainedZonotope<Scalar>;
  using Matrix = typename CZ::Matrix;
  detail::require_same_dim(z1, z2, "convex_hull_pair");
  const auto n = z1.dim();
  const auto m1 = z1.num_generators(), m2 = z2.num_generators();
  const auto k1 = z1.num_constraints(), k2 = z2.num_constraints();
  const auto slack = 2 * (m1 + m2);
  const auto m = m1 + m2 + 1 + slack;
  const Scalar half(0.5);

  Matrix g = Matrix::Zero(n, m);
  g.leftCols(m1) = z1.generators();
  g.middleCols(m1, m2) = z2.generators();
  g.col(m1 + m2) = half * (z1.center() - z2.center());

  const auto rows = k1 + k2 + slack;
  Matrix a = Matrix::Zero(rows, m);
  typename CZ::Vector b(rows);
  const auto lam = m1 + m2;

  a.topLeftCorner(k1, m1) = z1.con_matrix();
  a.block(0, lam, k1, 1) = -half * z1.con_vector();
  b.head(k1) = half * z1.con_vector();

  a.block(k1, m1, k2, m2) = z2.con_matrix();
  a.block(k1, lam, k2, 1) = half * z2.con_vector();
  b.segment(k1, k2) = half * z2.con_vector();

  const auto r0 = k1 + k2;
  // A31
  a.block(r0, 0, m1, m1).setIdentity();
  a.block(r0 + m1, 0, m1, m1) = -Matrix::Identity(m1, m1);
  // A32
  a.block(r0 + 2 * m1, m1, m2, m2).setIdentity();
  a.block(r0 + 2 * m1 + m2, m1, m2, m2) = -Matrix::Identity(m2, m2);
  // A30
  a.block(r0, lam, 2 * m1, 1).setConstant(-half);
  a.block(r0 + 2 * m1, lam, 2 * m2, 1).setConstant(half);
  // slack identity
  a.block(r0, lam + 1, slack, slack).setIdentity();
  b.tail(slack).setConstant(-half);

  return CZ(half * (z1.center() + z2.center()), std::move(g), std::move(a), std::move(b));
}

/// { scale * x + offset : x in z }. Constraints are untouched.
template <typename Scalar, typename ScaleDerived, typename OffsetDerived>
ConstrainedZonotope<Scalar> affine_map(const Eigen::MatrixBase<ScaleDerived>& scale,
                                       const Eigen::MatrixBase<OffsetDerived>& offset,
                                       const ConstrainedZonotope<Scalar>& z) {
  using CZ = ConstrainedZonotope<Scalar>;
  if (scale.cols() != z.dim()) {
    throw std::invalid_argument("affine_map: scale has " + std::to_string(scale.cols()) + " columns, set has dim " +
                                std::to_string(z.dim()));
  }
  if (offset.size() != scale.rows()) {
    throw std::invalid_argument("affine_map: offset length does not match scale rows");
  }
  typename CZ::Matrix g = scale * z.generators();
  if (z.num_generators() == 0) g.resize(scale.rows(), 0);
  return CZ(scale * z.center() + offset, std::move(g), z.con_matrix(), z.con_vector());
}

/**
 * Exact conzono for conv{points} (columns of `points`), using one
 * generator per point: x = sum_i lambda_i v_i with lambda_i = (1 + beta_i)/2
 * and the single constraint sum_i beta_i = 2 - k.
 */
template <typename Scalar>
ConstrainedZonotope<Scalar> hull_of_points(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& points) {
  using CZ = ConstrainedZonotope<Scalar>;
  const auto k = points.cols();
  if (k == 0) throw std::invalid_argument("hull_of_points: no points");
  if (k == 1) return CZ::point(points.col(0));
  typename CZ::Matrix g = points / Scalar(2);
  typename CZ::Vector c = g.rowwise().sum();
  typename CZ::Matrix a = CZ::Matrix::Ones(1, k);
  typename CZ::Vector b(1);
  b(0) = Scalar(2 - k);
  return CZ(std::move(c), std::move(g), std::move(a), std::move(b));
}

}  // namespace zsm

#endif  // ZSM_CONZONO_HPP
