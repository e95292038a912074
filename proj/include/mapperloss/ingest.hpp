#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mapperloss/cosheaf.hpp"
#include "mapperloss/grid.hpp"

namespace mapperloss {

struct GeometricVertex {
  std::string id;
  std::vector<double> f;
};

// A piecewise-linear map from a graph to R^d: values at vertices, linear along edges.
struct GeometricGraph {
  int d = 1;
  std::vector<GeometricVertex> vertices;
  std::vector<std::pair<std::string, std::string>> edges;

  // Throws std::invalid_argument on bad dimension, non-finite values,
  // duplicate or unknown ids and self-loops.
  void validate() const;
};

// Smallest L with every value strictly inside (-L*delta, L*delta)^d.
GridSpec fit_grid(std::span<const GeometricGraph> graphs, double delta);

// Which input vertices and edges (by position in g.edges) meet each node's component.
struct IngestTrace {
  std::vector<std::vector<std::string>> vertices;
  std::vector<std::vector<std::size_t>> edges;
};

// Elements of F(S_sigma) are path components of f^{-1}(U_sigma). Values must lie
// in the closed box; otherwise throws std::invalid_argument naming the vertex.
CosheafGraph build_cosheaf(const GeometricGraph& g, const GridSpec& grid, IngestTrace* trace = nullptr);

}  // namespace mapperloss
