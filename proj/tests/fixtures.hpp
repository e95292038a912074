#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mapperloss/assignment.hpp"
#include "mapperloss/cosheaf.hpp"
#include "mapperloss/grid.hpp"
#include "mapperloss/ingest.hpp"

namespace fixtures {

using namespace mapperloss;

inline Cell sig(int i) { return Cell::vertex({i}); }
inline Cell tau(int i) { return Cell({Interval::nondeg(i)}); }

// A geometric graph together with its ingested cosheaf and provenance.
struct Traced {
  GeometricGraph g;
  CosheafGraph F;
  IngestTrace trace;

  // The node over `c` whose component contains input vertex `v`.
  NodeIndex at_vertex(const Cell& c, const std::string& v) const;
  // The node over `c` whose component meets the interior of edge u-v.
  NodeIndex at_edge(const Cell& c, const std::string& u, const std::string& v) const;
};

Traced trace_ingest(GeometricGraph g, const GridSpec& grid);

GeometricGraph path_graph(int d, const std::vector<std::pair<std::string, std::vector<double>>>& pts,
                          const std::vector<std::pair<std::string, std::string>>& edges);

// Adjacency list of the 14-vertex mapper graph (vertex, neighbours, height).
struct ListedVertex {
  int v;
  std::vector<int> nbrs;
  int height;
};
const std::vector<ListedVertex>& listed_rows();
// The listing as a cosheaf graph: vertex nodes "v<i>", edge nodes "v<i>-v<j>".
CosheafGraph listed_cosheaf();
// A Reeb graph realizing the listing: vertex v<i> at its height, straight edges.
GeometricGraph listed_reeb();

// A d=2 path whose two pieces near band_center_S join one ring out, and whose
// two pieces near band_center_T join two rings out.
GeometricGraph band_graph();
inline Cell band_center_S() { return Cell::vertex({0, 0}); }
inline Cell band_center_T() { return Cell::vertex({-2, 2}); }

// Two Reeb graphs at delta = 1, L = 4, studied around sigma_0.
GeometricGraph strands_X();
GeometricGraph strands_Y();
GridSpec strands_grid();
// The stated maps at sigma_0, extended to a full pointer 1-assignment.
Assignment strands_assignment(const Traced& X, const Traced& Y);

// F has two components, G one.
GeometricGraph split_F();
GeometricGraph split_G();
GridSpec split_grid();

// F: a path; G: two strands that only merge above the slice of interest.
GeometricGraph late_merge_F();
GeometricGraph late_merge_G();
GridSpec late_merge_grid();
Assignment late_merge_assignment(const Traced& F, const Traced& G);

// Fills every kNoNode entry with a target inside the radius-n box, preferring
// the same cell, then the smallest node index.
void complete_assignment(const CosheafGraph& F, const CosheafGraph& G, Assignment& a);

// Uniformly random valid n-assignment, or nullopt if some node has no target.
std::optional<Assignment> random_assignment(const CosheafGraph& F, const CosheafGraph& G, std::size_t n,
                                            std::mt19937_64& rng);
// Smallest n admitting any valid assignment.
std::size_t min_feasible_n(const CosheafGraph& F, const CosheafGraph& G);

Assignment identity_assignment(const CosheafGraph& F);

// Random PL graph with values in the open box, coordinates on a 1/4 lattice
// so that vertices and crossings land on cell boundaries often.
GeometricGraph random_graph(std::mt19937_64& rng, int d, int L, std::size_t vertices, std::size_t edges);

// A random graph whose ingested cosheaf has at most max_nodes nodes.
Traced random_tiny(std::mt19937_64& rng, const GridSpec& grid, std::size_t max_nodes);

// Pointers follow shared input edges: x goes to a node of G within radius n
// that meets the same edge index, preferring the same cell. Meant for G
// ingested from a perturbed copy of x's graph. Falls back to complete_assignment.
Assignment traced_assignment(const Traced& F, const Traced& G, std::size_t n);

// Same ids and edges, each value moved by at most `eps`, kept inside (-L, L).
GeometricGraph jitter(const GeometricGraph& g, double eps, int L, std::mt19937_64& rng);

// Large d=1 instance with short edges, |V| + |E| close to `size`.
GeometricGraph random_chain_graph(std::mt19937_64& rng, int L, std::size_t size);

}  // namespace fixtures
