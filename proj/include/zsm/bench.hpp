#ifndef ZSM_BENCH_HPP
#define ZSM_BENCH_HPP

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace zsm::bench {

/// Points sampled uniformly on the unit sphere (every sample is a hull
/// vertex); the count is uniform in [4, max_vertices].
Eigen::Matrix3Xd random_polytope(std::mt19937_64& rng, int max_vertices = 100);

enum class Method { conzono, vertex_rep };

struct Record {
  int trial = 0;
  int vertex_count_in = 0;
  Method method = Method::conzono;
  double seconds = 0.0;
  int output_size = 0;  // generators (conzono) or hull vertices (vertex-rep)
  int input_size = 0;   // generators before the sum (conzono) or input vertices
};

struct MethodSummary {
  double median = 0.0, q1 = 0.0, q3 = 0.0;
};

struct Summary {
  MethodSummary conzono, vertex_rep;
  double median_ratio = 0.0;  // vertex-rep / conzono
  int trials = 0;
  int generator_growth_ok = 0;  // trials where the sum added exactly one generator
};

struct Result {
  std::vector<Record> records;
  Summary summary;
};

/**
 * Minkowski sum of each random polytope with a unit segment, timed as
 * (a) the constrained-zonotope sum and (b) translating the vertex set by
 * both segment ends and recomputing the hull. The polytope-to-conzono
 * conversion is not timed; the hull recomputation is.
 * Ten untimed warm-up trials run first.
 */
Result bench_minkowski(int trials, std::uint64_t seed, int max_vertices = 100);

Summary summarize(const std::vector<Record>& records);

void write_csv(std::ostream& out, const std::vector<Record>& records);
void write_summary_json(std::ostream& out, const Summary& s, std::uint64_t seed);

const char* method_name(Method m);

}  // namespace zsm::bench

#endif  // ZSM_BENCH_HPP
