#ifndef GCLUST_ANALYSIS_HPP
#define GCLUST_ANALYSIS_HPP

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gclust/clustering.hpp"
#include "gclust/graph.hpp"
#include "gclust/solvers.hpp"

namespace gclust {

using BigInt = boost::multiprecision::cpp_int;

/// Largest vertex count for which exact factorials are formed.
inline constexpr int kExactFactorialCap = 5000;

BigInt factorial(int n);

/// Number of tours visiting each block consecutively, where `block_sizes`
/// partitions all `total_vertices` (missing vertices are singleton blocks).
/// Linear sequences: m! * prod |V_i|!. Fixed-start cycles: (m-1)! * prod |V_i|!
/// for m >= 2 blocks, (|V|-1)! for a single block.
BigInt clustered_count(int total_vertices, const std::vector<int>& block_sizes,
                       CountConvention convention);

struct SearchSpaceReport {
  int total_vertices = 0;
  /// Blocks including leftover singletons.
  int blocks = 0;
  double n0_log10 = 0.0;
  double n1_log10 = 0.0;
  /// log10 of N0 / N1.
  double ratio_log10 = 0.0;
  std::optional<BigInt> n0;
  std::optional<BigInt> n1;
};

/// N0 = |V|! and N1 = m! * prod |V_i|! counted as linear sequences, with
/// leftover vertices as singleton blocks.
SearchSpaceReport search_space_ratio(int total_vertices, const std::vector<int>& cluster_sizes);

/// Mantissa/exponent rendering such as "1.39e+102".
std::string scientific(const BigInt& value, int digits = 3);
std::string scientific_log10(double log10_value, int digits = 3);

struct GapReport {
  double gamma = 0.0;
  std::size_t clusters = 0;
  double c_star = 0.0;
  double c_prime_star = 0.0;
  double ratio = 1.0;
  double bound = 2.0;
  bool within_bound = true;
  SolveReport tsp;
  SolveReport ctsp;
};

double gap_bound(double gamma);

/// Raised when a solve in measure_gap times out; carries what was computed.
class GapTimeout : public Error {
 public:
  GapTimeout(const std::string& msg, GapReport partial) : Error(msg), partial_(std::move(partial)) {}
  const GapReport& partial() const { return partial_; }

 private:
  GapReport partial_;
};

GapReport measure_gap(const MetricGraph& graph, double gamma,
                      std::chrono::duration<double> budget = std::chrono::duration<double>(900));

/// Same measurement against a given clustering.
GapReport measure_gap(const MetricGraph& graph, const ClusterTree& clustering,
                      std::chrono::duration<double> budget = std::chrono::duration<double>(900));

struct TightnessPoint {
  int n = 0;
  double c_star = 0.0;
  double c_prime_star = 0.0;
  double ratio = 0.0;
  double expected_c_star = 0.0;
  double expected_c_prime_star = 0.0;
  double expected_ratio = 0.0;
};

struct TightnessCurve {
  double gamma = 0.0;
  double limit = 0.0;
  std::vector<TightnessPoint> points;
  std::vector<std::string> warnings;
};

/// Exact costs on the lower-bound family with alpha = gamma, beta = 1 for
/// n = 0..n_max; sizes beyond the exact cap, or whose solve exceeds the
/// budget, end the curve with a warning.
TightnessCurve tightness_curve(double gamma, int n_max,
                               std::chrono::duration<double> budget = std::chrono::duration<double>(900));

}  // namespace gclust

#endif  // GCLUST_ANALYSIS_HPP
