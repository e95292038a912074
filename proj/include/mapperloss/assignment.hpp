#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapperloss/cosheaf.hpp"
#include "mapperloss/extended_nat.hpp"

namespace mapperloss {

// An n-assignment stored as pointers: phi(x) is a node of G standing for the
// component of G(S^n_cell(x)) that x is sent to, and symmetrically for psi.
struct Assignment {
  std::size_t n = 0;
  std::vector<NodeIndex> phi;  // indexed by nodes of F, kNoNode when missing
  std::vector<NodeIndex> psi;  // indexed by nodes of G
};

// Totality and radius violations, one per offending node. Throws
// std::invalid_argument when F and G live on different grids.
std::vector<std::string> validate_assignment(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a);

enum class DiagramKind { ParallelogramLeft, ParallelogramRight, TriangleDown, TriangleUp };
std::string_view to_string(DiagramKind kind);

// A failing diagram. For parallelograms sigma < tau and `element` lives over tau;
// for triangles tau is empty and `element` lives over sigma. `lhs` and `rhs`
// are the two nodes that should share a component but do not. Elements of the
// left and down diagrams are nodes of F, the others nodes of G.
struct Witness {
  DiagramKind kind;
  Cell sigma;
  std::optional<Cell> tau;
  NodeIndex element = kNoNode;
  NodeIndex lhs = kNoNode;
  NodeIndex rhs = kNoNode;
  std::string element_id;
  std::string lhs_id;
  std::string rhs_id;

  bool operator==(const Witness&) const = default;
};

// (kind, sigma, tau, element index).
bool witness_less(const Witness& a, const Witness& b);

struct CheckOutcome {
  bool passed = true;
  std::vector<Witness> witnesses;  // sorted by (kind, sigma, tau, element)
};

CheckOutcome check_parallelogram_left(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a,
                                      const Cell& sigma, const Cell& tau, std::size_t k);
CheckOutcome check_parallelogram_right(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a,
                                       const Cell& sigma, const Cell& tau, std::size_t k);
CheckOutcome check_triangle_down(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a,
                                 const Cell& sigma, std::size_t k);
CheckOutcome check_triangle_up(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a,
                               const Cell& sigma, std::size_t k);

struct LossOptions {
  unsigned jobs = 1;
  std::size_t max_witnesses = 10;  // 0 keeps every witness
  bool stop_at_first = false;      // only the verdict matters
};

// All basis diagrams at once: parallelograms for every proper face pair, triangles for every cell.
CheckOutcome loss_at(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a, std::size_t k,
                     const LossOptions& opts = {});

// Smallest k for which every slice around every occupied cell is the whole graph.
std::size_t loss_saturation(const CosheafGraph& F, const CosheafGraph& G);

struct LossResult {
  std::size_t n = 0;
  ExtendedNat L_B;
  ExtendedNat bound;
  std::vector<Witness> witnesses;  // failing diagrams at L_B - 1, or at saturation when infinite
  std::optional<double> reeb;      // d = 1 only; +inf when L_B is infinite
};

// Throws std::invalid_argument listing the violations when the assignment is invalid.
LossResult basis_loss(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a,
                      const LossOptions& opts = {});

Assignment promote(const Assignment& a, std::size_t k);

// delta * (n + L_B + 1), +inf when L_B is infinite. Rejects d != 1.
double reeb_bound(const LossResult& r, const GridSpec& grid);

}  // namespace mapperloss
