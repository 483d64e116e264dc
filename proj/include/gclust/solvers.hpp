#ifndef GCLUST_SOLVERS_HPP
#define GCLUST_SOLVERS_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>

#include "gclust/clustering.hpp"
#include "gclust/graph.hpp"
#include "gclust/tours.hpp"

namespace gclust {

/// kFeasible marks a heuristic run that finished within its budget.
enum class SolveStatus { kOptimal, kFeasible, kFeasibleTimeout, kInfeasible };

std::string_view to_string(SolveStatus status);

struct SolveReport {
  Tour tour;
  double cost = 0.0;
  SolveStatus status = SolveStatus::kInfeasible;
  std::uint64_t nodes_expanded = 0;
  std::chrono::duration<double> elapsed{0};
  std::string solver_name;
};

struct SolveOptions {
  std::chrono::duration<double> budget{900.0};
  /// Called with (elapsed seconds, cost) on every incumbent improvement.
  std::function<void(double, double)> on_improvement;
};

inline constexpr std::size_t kHeldKarpCap = 20;
inline constexpr std::size_t kExactCap = 28;
inline constexpr std::size_t kBruteForceSolveCap = 11;
inline constexpr std::size_t kEnumerateCap = 10;
/// Largest child count solved by the subset DP inside the hierarchical solver.
inline constexpr std::size_t kHierarchyWidthCap = 18;

/// Held-Karp up to kHeldKarpCap vertices, branch-and-bound up to kExactCap.
/// Among optimal tours the lexicographically smallest one starting at 0 is
/// reported.
SolveReport solve_exact_tsp(const MetricGraph& graph, const SolveOptions& options = {});

/// Optimal cycle visiting every cluster consecutively, by hierarchical
/// decomposition over the cluster tree; falls back to constrained
/// branch-and-bound when a level has more than kHierarchyWidthCap children.
SolveReport solve_exact_ctsp(const MetricGraph& graph, const ClusterTree& clustering,
                             const SolveOptions& options = {});

SolveReport solve_held_karp(const MetricGraph& graph);

/// Depth-first branch-and-bound from vertex 0 with an MST completion bound.
/// With a clustering, partial tours that break a consecutiveness constraint
/// are cut. The incumbent is seeded by solve_heuristic.
SolveReport solve_branch_and_bound(const MetricGraph& graph, const ClusterTree* clustering,
                                   const SolveOptions& options = {});

/// Hierarchical decomposition only; throws when a level exceeds the width cap.
SolveReport solve_hierarchical(const MetricGraph& graph, const ClusterTree& clustering,
                               const SolveOptions& options = {});

/// Enumerates every cycle starting at 0; capped at kBruteForceSolveCap.
SolveReport solve_brute_force(const MetricGraph& graph, const ClusterTree* clustering = nullptr);

enum class CountConvention {
  /// Cycles written from vertex 0, both directions counted.
  kFixedStartCycle,
  /// Vertex sequences with consecutiveness checked linearly.
  kLinearSequence,
};

/// Counts tours satisfying every consecutiveness constraint. Takes bare sets
/// so that the full vertex set may appear. Capped at kEnumerateCap vertices.
std::uint64_t enumerate_feasible(std::size_t vertex_count, const std::vector<VertexSet>& sets,
                                 CountConvention convention = CountConvention::kFixedStartCycle);
std::uint64_t enumerate_feasible(const MetricGraph& graph, const ClusterTree& clustering,
                                 CountConvention convention = CountConvention::kFixedStartCycle);

/// Nearest neighbour from vertex 0 plus 2-opt, followed by a fixed number of
/// seeded random restarts. With a clustering the start tours are repaired by
/// deform_all and only moves keeping every cluster consecutive are taken;
/// the unconstrained 2-opt optimum is also tried as a start.
SolveReport solve_heuristic(const MetricGraph& graph, const ClusterTree* clustering,
                            const SolveOptions& options = {}, std::uint64_t seed = 0);

/// True iff the tour visits every cluster consecutively.
bool is_feasible(const Tour& tour, const ClusterTree& clustering);

}  // namespace gclust

#endif  // GCLUST_SOLVERS_HPP
