#include "gclust/tsplib.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace gclust {

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string_view to_string(EdgeWeightType type) {
  switch (type) {
    case EdgeWeightType::kEuc2D: return "EUC_2D";
    case EdgeWeightType::kCeil2D: return "CEIL_2D";
    case EdgeWeightType::kGeo: return "GEO";
    case EdgeWeightType::kAtt: return "ATT";
    case EdgeWeightType::kExplicit: return "EXPLICIT";
  }
  return "UNKNOWN";
}

std::string_view to_string(EdgeWeightFormat format) {
  switch (format) {
    case EdgeWeightFormat::kNone: return "NONE";
    case EdgeWeightFormat::kFullMatrix: return "FULL_MATRIX";
    case EdgeWeightFormat::kUpperRow: return "UPPER_ROW";
    case EdgeWeightFormat::kLowerRow: return "LOWER_ROW";
    case EdgeWeightFormat::kUpperDiagRow: return "UPPER_DIAG_ROW";
    case EdgeWeightFormat::kLowerDiagRow: return "LOWER_DIAG_ROW";
  }
  return "UNKNOWN";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<double> parse_number(std::string_view token) {
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::size_t explicit_count(EdgeWeightFormat format, std::size_t n) {
  switch (format) {
    case EdgeWeightFormat::kFullMatrix: return n * n;
    case EdgeWeightFormat::kUpperRow:
    case EdgeWeightFormat::kLowerRow: return n * (n - 1) / 2;
    case EdgeWeightFormat::kUpperDiagRow:
    case EdgeWeightFormat::kLowerDiagRow: return n * (n + 1) / 2;
    case EdgeWeightFormat::kNone: return 0;
  }
  return 0;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto stop = end == std::string_view::npos ? text.size() : end;
    lines.push_back({number++, text.substr(start, stop - start)});
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

}  // namespace

TspLibInstance parse_tsplib(std::string_view text) {
  TspLibInstance inst;
  bool have_dimension = false;
  bool have_type = false;
  const auto lines = split_lines(text);

  auto require_dimension = [&](std::size_t line) {
    if (!have_dimension) throw ParseError(line, "missing DIMENSION before data section");
  };

  std::size_t i = 0;
  while (i < lines.size()) {
    const auto [number, raw] = lines[i];
    const auto line = trim(raw);
    ++i;
    if (line.empty()) continue;

    std::string_view key = line;
    std::string_view value;
    if (const auto colon = line.find(':'); colon != std::string_view::npos) {
      key = trim(line.substr(0, colon));
      value = trim(line.substr(colon + 1));
    } else if (const auto space = line.find_first_of(" \t"); space != std::string_view::npos) {
      key = trim(line.substr(0, space));
      value = trim(line.substr(space + 1));
    }

    if (key == "EOF") break;
    if (key == "NAME") {
      inst.name = std::string(value);
    } else if (key == "TYPE") {
      inst.type = std::string(value);
    } else if (key == "COMMENT") {
      if (!inst.comment.empty()) inst.comment += '\n';
      inst.comment += std::string(value);
    } else if (key == "DIMENSION") {
      const auto dim = parse_number(value);
      if (!dim || *dim < 1 || *dim != std::floor(*dim)) {
        throw ParseError(number, "invalid DIMENSION '" + std::string(value) + "'");
      }
      inst.dimension = static_cast<std::size_t>(*dim);
      have_dimension = true;
    } else if (key == "EDGE_WEIGHT_TYPE") {
      if (value == "EUC_2D") {
        inst.edge_weight_type = EdgeWeightType::kEuc2D;
      } else if (value == "CEIL_2D") {
        inst.edge_weight_type = EdgeWeightType::kCeil2D;
      } else if (value == "GEO") {
        inst.edge_weight_type = EdgeWeightType::kGeo;
      } else if (value == "ATT") {
        inst.edge_weight_type = EdgeWeightType::kAtt;
      } else if (value == "EXPLICIT") {
        inst.edge_weight_type = EdgeWeightType::kExplicit;
      } else {
        throw ParseError(number, "unsupported EDGE_WEIGHT_TYPE '" + std::string(value) + "'");
      }
      have_type = true;
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      if (value == "FULL_MATRIX") {
        inst.edge_weight_format = EdgeWeightFormat::kFullMatrix;
      } else if (value == "UPPER_ROW") {
        inst.edge_weight_format = EdgeWeightFormat::kUpperRow;
      } else if (value == "LOWER_ROW") {
        inst.edge_weight_format = EdgeWeightFormat::kLowerRow;
      } else if (value == "UPPER_DIAG_ROW") {
        inst.edge_weight_format = EdgeWeightFormat::kUpperDiagRow;
      } else if (value == "LOWER_DIAG_ROW") {
        inst.edge_weight_format = EdgeWeightFormat::kLowerDiagRow;
      } else if (value == "FUNCTION") {
        inst.edge_weight_format = EdgeWeightFormat::kNone;
      } else {
        throw ParseError(number, "unsupported EDGE_WEIGHT_FORMAT '" + std::string(value) + "'");
      }
    } else if (key == "NODE_COORD_SECTION") {
      require_dimension(number);
      inst.coordinates.assign(inst.dimension, Coordinate{});
      std::vector<bool> seen(inst.dimension, false);
      for (std::size_t read = 0; read < inst.dimension; ++read) {
        while (i < lines.size() && trim(lines[i].text).empty()) ++i;
        if (i >= lines.size() || trim(lines[i].text) == "EOF") {
          throw ParseError(number, "NODE_COORD_SECTION has " + std::to_string(read) +
                                       " coordinates, DIMENSION is " +
                                       std::to_string(inst.dimension));
        }
        const auto [coord_line, coord_text] = lines[i++];
        const auto tokens = split_ws(coord_text);
        if (tokens.size() != 3) {
          // A keyword here means the section ended early.
          if (!tokens.empty() && !parse_number(tokens[0])) {
            throw ParseError(number, "NODE_COORD_SECTION has " + std::to_string(read) +
                                         " coordinates, DIMENSION is " +
                                         std::to_string(inst.dimension));
          }
          throw ParseError(coord_line, "malformed coordinate line");
        }
        const auto id = parse_number(tokens[0]);
        const auto x = parse_number(tokens[1]);
        const auto y = parse_number(tokens[2]);
        if (!id || !x || !y || *id < 1 || *id > static_cast<double>(inst.dimension) ||
            *id != std::floor(*id)) {
          throw ParseError(coord_line, "malformed coordinate line");
        }
        const auto index = static_cast<std::size_t>(*id) - 1;
        if (seen[index]) throw ParseError(coord_line, "duplicate node id");
        seen[index] = true;
        inst.coordinates[index] = {*x, *y};
      }
    } else if (key == "EDGE_WEIGHT_SECTION") {
      require_dimension(number);
      const std::size_t expected = explicit_count(inst.edge_weight_format, inst.dimension);
      if (expected == 0) throw ParseError(number, "EDGE_WEIGHT_SECTION without EDGE_WEIGHT_FORMAT");
      inst.explicit_weights.clear();
      inst.explicit_weights.reserve(expected);
      while (inst.explicit_weights.size() < expected) {
        if (i >= lines.size()) {
          throw ParseError(number, "EDGE_WEIGHT_SECTION ended after " +
                                       std::to_string(inst.explicit_weights.size()) +
                                       " of " + std::to_string(expected) + " weights");
        }
        const auto [w_line, w_text] = lines[i];
        const auto tokens = split_ws(w_text);
        if (!tokens.empty() && !parse_number(tokens[0])) {
          throw ParseError(number, "EDGE_WEIGHT_SECTION ended after " +
                                       std::to_string(inst.explicit_weights.size()) +
                                       " of " + std::to_string(expected) + " weights");
        }
        ++i;
        for (const auto token : tokens) {
          const auto w = parse_number(token);
          if (!w) throw ParseError(w_line, "malformed edge weight '" + std::string(token) + "'");
          if (inst.explicit_weights.size() == expected) {
            throw ParseError(w_line, "too many edge weights");
          }
          inst.explicit_weights.push_back(*w);
        }
      }
    } else if (key == "DISPLAY_DATA_SECTION") {
      inst.warnings.push_back("line " + std::to_string(number) +
                              ": DISPLAY_DATA_SECTION ignored");
      while (i < lines.size()) {
        const auto tokens = split_ws(lines[i].text);
        if (!tokens.empty() && !parse_number(tokens[0])) break;
        ++i;
      }
    } else if (key == "DISPLAY_DATA_TYPE" || key == "NODE_COORD_TYPE") {
      // informational only
    } else {
      inst.warnings.push_back("line " + std::to_string(number) + ": unknown keyword '" +
                              std::string(key) + "'");
    }
  }

  if (!have_dimension) throw ParseError(lines.empty() ? 1 : lines.back().number, "missing DIMENSION");
  if (!have_type) {
    throw ParseError(lines.empty() ? 1 : lines.back().number, "missing EDGE_WEIGHT_TYPE");
  }
  if (inst.edge_weight_type == EdgeWeightType::kExplicit) {
    if (inst.explicit_weights.empty()) {
      throw ParseError(lines.back().number, "missing EDGE_WEIGHT_SECTION");
    }
  } else if (inst.coordinates.size() != inst.dimension) {
    throw ParseError(lines.back().number, "missing NODE_COORD_SECTION");
  }
  return inst;
}

TspLibInstance read_tsplib_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_tsplib(buffer.str());
}

double euc_2d_distance(Coordinate a, Coordinate b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return static_cast<double>(static_cast<long long>(std::sqrt(dx * dx + dy * dy) + 0.5));
}

double ceil_2d_distance(Coordinate a, Coordinate b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::ceil(std::sqrt(dx * dx + dy * dy));
}

double att_distance(Coordinate a, Coordinate b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double r = std::sqrt((dx * dx + dy * dy) / 10.0);
  const auto t = static_cast<long long>(r + 0.5);
  return static_cast<double>(static_cast<double>(t) < r ? t + 1 : t);
}

namespace {

// DDD.MM to radians with the TSPLIB constant for pi; degrees are truncated.
double geo_radians(double value) {
  constexpr double kPi = 3.141592;
  const auto degrees = static_cast<double>(static_cast<long long>(value));
  const double minutes = value - degrees;
  return kPi * (degrees + 5.0 * minutes / 3.0) / 180.0;
}

}  // namespace

double geo_distance(Coordinate a, Coordinate b) {
  constexpr double kRadius = 6378.388;
  const double lat_a = geo_radians(a.x);
  const double lon_a = geo_radians(a.y);
  const double lat_b = geo_radians(b.x);
  const double lon_b = geo_radians(b.y);
  const double q1 = std::cos(lon_a - lon_b);
  const double q2 = std::cos(lat_a - lat_b);
  const double q3 = std::cos(lat_a + lat_b);
  return static_cast<double>(static_cast<long long>(
      kRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0));
}

MetricGraph instance_to_graph(const TspLibInstance& inst) {
  const std::size_t n = inst.dimension;
  if (inst.edge_weight_type == EdgeWeightType::kExplicit) {
    std::vector<double> w(n * n, 0.0);
    const auto& data = inst.explicit_weights;
    std::size_t k = 0;
    auto set = [&](std::size_t a, std::size_t b, double value) {
      w[a * n + b] = value;
      w[b * n + a] = value;
    };
    switch (inst.edge_weight_format) {
      case EdgeWeightFormat::kFullMatrix:
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            if (a != b) w[a * n + b] = data[a * n + b];
          }
        }
        break;
      case EdgeWeightFormat::kUpperRow:
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = a + 1; b < n; ++b) set(a, b, data[k++]);
        break;
      case EdgeWeightFormat::kLowerRow:
        for (std::size_t a = 1; a < n; ++a)
          for (std::size_t b = 0; b < a; ++b) set(a, b, data[k++]);
        break;
      case EdgeWeightFormat::kUpperDiagRow:
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = a; b < n; ++b) {
            if (a != b) set(a, b, data[k]);
            ++k;
          }
        break;
      case EdgeWeightFormat::kLowerDiagRow:
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b <= a; ++b) {
            if (a != b) set(a, b, data[k]);
            ++k;
          }
        break;
      case EdgeWeightFormat::kNone:
        throw Error("EXPLICIT instance without EDGE_WEIGHT_FORMAT");
    }
    return MetricGraph(n, std::move(w));
  }

  double (*distance)(Coordinate, Coordinate) = nullptr;
  switch (inst.edge_weight_type) {
    case EdgeWeightType::kEuc2D: distance = &euc_2d_distance; break;
    case EdgeWeightType::kCeil2D: distance = &ceil_2d_distance; break;
    case EdgeWeightType::kGeo: distance = &geo_distance; break;
    case EdgeWeightType::kAtt: distance = &att_distance; break;
    case EdgeWeightType::kExplicit: break;
  }
  const auto& c = inst.coordinates;
  return MetricGraph::FromFunction(n, [&](Vertex a, Vertex b) {
    return distance(c[static_cast<std::size_t>(a)], c[static_cast<std::size_t>(b)]);
  });
}

std::string write_tsplib_explicit(const MetricGraph& graph, const std::string& name,
                                  const std::string& comment) {
  std::ostringstream out;
  out << "NAME : " << name << '\n';
  if (!comment.empty()) out << "COMMENT : " << comment << '\n';
  out << "TYPE : TSP\n";
  out << "DIMENSION : " << graph.size() << '\n';
  out << "EDGE_WEIGHT_TYPE : EXPLICIT\n";
  out << "EDGE_WEIGHT_FORMAT : FULL_MATRIX\n";
  out << "EDGE_WEIGHT_SECTION\n";
  char buffer[64];
  const auto n = static_cast<Vertex>(graph.size());
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = 0; b < n; ++b) {
      const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, graph.weight(a, b));
      if (b > 0) out << ' ';
      out.write(buffer, ptr - buffer);
    }
    out << '\n';
  }
  out << "EOF\n";
  return out.str();
}

}  // namespace gclust
