#ifndef ZSM_VERTICES_HPP
#define ZSM_VERTICES_HPP

#include <Eigen/Dense>

#include "zsm/conzono.hpp"

namespace zsm {

/// Vertex representation: one point per column, rows = dimension.
/// Zero columns is the empty set.
using VertexList = Eigen::MatrixXd;

struct VertexOptions {
  Eigen::Index max_generators = 20;
  /// Relative tolerance (scaled by the set's diameter) for flatness, hull
  /// and duplicate decisions.
  double tol = 1e-9;
};

/// Constraint rows after row normalisation and removal of dependent rows.
struct ReducedConstraints {
  Eigen::MatrixXd con_matrix;
  Eigen::VectorXd con_vector;
  bool consistent = true;
  Eigen::Index dropped = 0;
};

ReducedConstraints reduce_constraints(const Eigen::MatrixXd& con_matrix, const Eigen::VectorXd& con_vector,
                                      double tol = 1e-9);

/// Same set with normalised, linearly independent constraint rows.
/// Throws std::domain_error when the constraints are inconsistent (empty set).
ConZono reduce(const ConZono& z, double tol = 1e-9);

/**
 * Vertices of z.
 *
 * The set is the image c + G P of the lifted polytope
 * P = { beta : |beta|_inf <= 1, A beta = b }. Its hull is recovered in the
 * image space from support points of P: one LP per query direction, warm
 * started from the previous basis. The affine hull is detected first so
 * flat sets (segments, planar pieces in 3-D) come out exactly.
 *
 * Throws std::invalid_argument when z has more than max_generators
 * generators.
 */
VertexList vertices(const ConZono& z, const VertexOptions& options = {});

bool is_empty(const ConZono& z, double tol = 1e-9);

/// True iff x is within `tol` (summed equality residual, in the units of
/// the set) of a point of z.
bool contains_point(const ConZono& z, const Eigen::VectorXd& x, double tol = 1e-9);

/// True iff the closed segment pq meets z (within `tol`).
bool segment_hits(const ConZono& z, const Eigen::VectorXd& p, const Eigen::VectorXd& q, double tol = 1e-9);

}  // namespace zsm

#endif  // ZSM_VERTICES_HPP
