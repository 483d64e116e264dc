#ifndef GCLUST_SERIALIZE_HPP
#define GCLUST_SERIALIZE_HPP

#include <string>

#include "json.hpp"

#include "gclust/analysis.hpp"
#include "gclust/clustering.hpp"
#include "gclust/solvers.hpp"
#include "gclust/tours.hpp"

namespace gclust {

using Json = nlohmann::ordered_json;

/// {gamma_threshold, clusters: [{vertices, alpha, beta, gamma, parent_index}]}
Json to_json(const ClusterTree& tree);
/// Rebuilds a tree; parents are recomputed and checked against parent_index.
ClusterTree cluster_tree_from_json(const Json& j);

/// {kind, order, cost}
Json to_json(const Tour& tour, double cost);
Tour tour_from_json(const Json& j);

/// TSPLIB TOUR file with 1-based vertex ids.
std::string tour_section(const Tour& tour, const std::string& name);

/// Wall-clock fields are collected under "timing" so the rest is reproducible.
Json to_json(const SolveReport& report);
Json to_json(const GapReport& report);
Json to_json(const SearchSpaceReport& report);
Json to_json(const TightnessCurve& curve);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::string gap_csv_header();
std::string gap_csv_row(const std::string& name, const GapReport& report);
std::string tightness_csv(const TightnessCurve& curve);

}  // namespace gclust

#endif  // GCLUST_SERIALIZE_HPP
