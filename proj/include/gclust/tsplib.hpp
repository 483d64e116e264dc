#ifndef GCLUST_TSPLIB_HPP
#define GCLUST_TSPLIB_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gclust/graph.hpp"

namespace gclust {

/// Parse failure carrying the 1-based line number it was detected on.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class EdgeWeightType { kEuc2D, kCeil2D, kGeo, kAtt, kExplicit };

enum class EdgeWeightFormat {
  kNone,
  kFullMatrix,
  kUpperRow,
  kLowerRow,
  kUpperDiagRow,
  kLowerDiagRow,
};

struct Coordinate {
  double x = 0.0;
  double y = 0.0;
};

struct TspLibInstance {
  std::string name;
  std::string type = "TSP";
  std::string comment;
  std::size_t dimension = 0;
  EdgeWeightType edge_weight_type = EdgeWeightType::kEuc2D;
  EdgeWeightFormat edge_weight_format = EdgeWeightFormat::kNone;
  std::vector<Coordinate> coordinates;
  /// Raw EDGE_WEIGHT_SECTION numbers in file order.
  std::vector<double> explicit_weights;
  /// Unknown keywords and ignored sections, one message per occurrence.
  std::vector<std::string> warnings;
};

std::string_view to_string(EdgeWeightType type);
std::string_view to_string(EdgeWeightFormat format);

TspLibInstance parse_tsplib(std::string_view text);
TspLibInstance read_tsplib_file(const std::string& path);

/// TSPLIB canonical distance functions.
double euc_2d_distance(Coordinate a, Coordinate b);
double ceil_2d_distance(Coordinate a, Coordinate b);
double att_distance(Coordinate a, Coordinate b);
double geo_distance(Coordinate a, Coordinate b);

MetricGraph instance_to_graph(const TspLibInstance& inst);

/// Serializes a graph as an EXPLICIT / FULL_MATRIX instance. Weights are
/// written with enough digits to re-parse to the identical double.
std::string write_tsplib_explicit(const MetricGraph& graph, const std::string& name,
                                  const std::string& comment = {});

}  // namespace gclust

#endif  // GCLUST_TSPLIB_HPP
