#include "gclust/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "gclust/instances.hpp"

namespace gclust {

namespace {

double log10_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0) / std::log(10.0); }

std::vector<int> blocks_of(int total, const std::vector<int>& sizes) {
  if (total < 0) throw Error("vertex count must be non-negative");
  long long used = 0;
  for (int s : sizes) {
    if (s < 1) throw Error("cluster sizes must be positive");
    used += s;
  }
  if (used > total) {
    throw Error("cluster sizes sum to " + std::to_string(used) + ", exceeding " +
                std::to_string(total) + " vertices");
  }
  std::vector<int> blocks = sizes;
  blocks.insert(blocks.end(), static_cast<std::size_t>(total - used), 1);
  return blocks;
}

}  // namespace

BigInt factorial(int n) {
  if (n < 0) throw Error("factorial of a negative number");
  BigInt out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

BigInt clustered_count(int total_vertices, const std::vector<int>& block_sizes,
                       CountConvention convention) {
  const auto blocks = blocks_of(total_vertices, block_sizes);
  if (blocks.empty()) return 0;
  const int m = static_cast<int>(blocks.size());
  if (convention == CountConvention::kFixedStartCycle && m == 1) {
    return factorial(total_vertices - 1);
  }
  BigInt out = factorial(convention == CountConvention::kLinearSequence ? m : m - 1);
  for (int s : blocks) out *= factorial(s);
  return out;
}

SearchSpaceReport search_space_ratio(int total_vertices, const std::vector<int>& cluster_sizes) {
  const auto blocks = blocks_of(total_vertices, cluster_sizes);
  SearchSpaceReport r;
  r.total_vertices = total_vertices;
  r.blocks = static_cast<int>(blocks.size());
  r.n0_log10 = log10_factorial(total_vertices);
  r.n1_log10 = log10_factorial(r.blocks);
  for (int s : blocks) r.n1_log10 += log10_factorial(s);
  r.ratio_log10 = r.n0_log10 - r.n1_log10;
  if (total_vertices <= kExactFactorialCap) {
    r.n0 = factorial(total_vertices);
    r.n1 = clustered_count(total_vertices, cluster_sizes, CountConvention::kLinearSequence);
  }
  return r;
}

std::string scientific(const BigInt& value, int digits) {
  if (value == 0) return "0";
  std::string s = value.str();
  bool negative = false;
  if (s.front() == '-') {
    negative = true;
    s.erase(0, 1);
  }
  int exponent = static_cast<int>(s.size()) - 1;
  const auto keep = static_cast<std::size_t>(std::max(1, digits));
  std::string mant = s.substr(0, std::min(keep, s.size()));
  if (s.size() > keep && s[keep] >= '5') {
    int i = static_cast<int>(mant.size()) - 1;
    while (i >= 0 && mant[static_cast<std::size_t>(i)] == '9') mant[static_cast<std::size_t>(i--)] = '0';
    if (i < 0) {
      mant.insert(mant.begin(), '1');
      mant.pop_back();
      ++exponent;
    } else {
      ++mant[static_cast<std::size_t>(i)];
    }
  }
  std::string out = negative ? "-" : "";
  out += mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  char exp[16];
  std::snprintf(exp, sizeof exp, "e%+03d", exponent);
  return out + exp;
}

std::string scientific_log10(double log10_value, int digits) {
  double exponent = std::floor(log10_value);
  double mant = std::pow(10.0, log10_value - exponent);
  const double scale = std::pow(10.0, std::max(0, digits - 1));
  mant = std::round(mant * scale) / scale;
  if (mant >= 10.0) {
    mant /= 10.0;
    exponent += 1.0;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*fe%+03d", std::max(0, digits - 1), mant,
                static_cast<int>(exponent));
  return buf;
}

double gap_bound(double gamma) { return std::min(2.0, 1.0 + 3.0 / (2.0 * gamma)); }

GapReport measure_gap(const MetricGraph& graph, const ClusterTree& clustering,
                      std::chrono::duration<double> budget) {
  GapReport r;
  r.gamma = clustering.gamma_threshold();
  r.clusters = clustering.size();
  r.bound = gap_bound(r.gamma);
  SolveOptions options;
  options.budget = budget;
  r.tsp = solve_exact_tsp(graph, options);
  r.c_star = r.tsp.cost;
  if (r.tsp.status != SolveStatus::kOptimal) {
    throw GapTimeout("unclustered solve did not finish within the budget", r);
  }
  r.ctsp = solve_exact_ctsp(graph, clustering, options);
  r.c_prime_star = r.ctsp.cost;
  if (r.ctsp.status != SolveStatus::kOptimal) {
    throw GapTimeout("clustered solve did not finish within the budget", r);
  }
  r.ratio = r.c_star > 0.0 ? r.c_prime_star / r.c_star : 1.0;
  r.within_bound = r.ratio <= r.bound + 1e-9;
  return r;
}

GapReport measure_gap(const MetricGraph& graph, double gamma, std::chrono::duration<double> budget) {
  return measure_gap(graph, gamma_clustering(graph, gamma), budget);
}

TightnessCurve tightness_curve(double gamma, int n_max, std::chrono::duration<double> budget) {
  if (!(gamma > 1.0)) throw Error("tightness family needs gamma > 1");
  TightnessCurve curve;
  curve.gamma = gamma;
  curve.limit = 1.0 + 2.0 / (2.0 * gamma + 1.0);
  const double alpha = gamma;
  const double beta = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    if (static_cast<std::size_t>(3 * (n + 1)) > kExactCap) {
      curve.warnings.push_back("stopped at n = " + std::to_string(n - 1) + ": " +
                               std::to_string(3 * (n + 1)) +
                               " vertices exceed the exact solver cap");
      break;
    }
    const auto inst = gen_lower_bound(n, alpha, beta);
    const auto tree = ClusterTree::FromSets(inst.graph, gamma, {inst.cluster});
    GapReport gap;
    try {
      gap = measure_gap(inst.graph, tree, budget);
    } catch (const GapTimeout&) {
      curve.warnings.push_back("stopped at n = " + std::to_string(n - 1) +
                               ": exact solve at n = " + std::to_string(n) +
                               " exceeded the budget");
      break;
    }
    TightnessPoint p;
    p.n = n;
    p.c_star = gap.c_star;
    p.c_prime_star = gap.c_prime_star;
    p.ratio = gap.ratio;
    p.expected_c_star = (n + 1) * (2 * alpha + beta);
    p.expected_c_prime_star = (n + 1) * (2 * alpha + 3 * beta) - 2 * beta;
    p.expected_ratio = p.expected_c_prime_star / p.expected_c_star;
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace gclust
