#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mapperloss/assignment.hpp"
#include "mapperloss/cosheaf.hpp"
#include "mapperloss/extended_nat.hpp"
#include "mapperloss/grid.hpp"
#include "mapperloss/ingest.hpp"

// Slow reference computations for small instances. None of these share code
// with the production paths they are used to check, beyond the grid itself.
namespace mapperloss {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleCaps {
  std::size_t max_nodes = 12;          // per cosheaf
  int max_L = 4;
  std::size_t max_opens = 5000;
  std::size_t max_candidates = 2'000'000;  // (phi, psi) pairs tried per level
};

// Throws CapExceeded when either cosheaf is larger than the caps allow.
void require_tiny(const CosheafGraph& F, const CosheafGraph& G, const OracleCaps& caps);

struct Pi0Result {
  std::size_t count = 0;
  // One point per component: a vertex id, or "u-v@t" for a point inside edge u-v.
  std::vector<std::string> representatives;
};

// Path components of f^{-1}(|S|), straight from segment arithmetic.
Pi0Result geometric_pi0(const GeometricGraph& g, const GridSpec& grid, const OpenCellSet& S);

// Every coface-closed cell set, each once, the empty set included.
std::vector<OpenCellSet> enumerate_opens(const GridSpec& grid, std::size_t cap = 5000);

struct FullLossResult {
  ExtendedNat loss;                   // max diagram loss over all opens S ⊆ T, in units of level n
  std::size_t promoted_by = 0;        // k added to n so basis parallelograms commute
  std::size_t level = 0;              // n + promoted_by, the level evaluated
  bool extension_consistent = false;  // the colimit extension was well defined
};

// Extends the basis assignment to every open set through component
// representatives, then evaluates every diagram over every pair of opens.
// When basis parallelograms do not commute at level n the assignment is
// first promoted by the smallest k that makes them commute.
FullLossResult full_loss(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a,
                         const OracleCaps& caps = {});

// Smallest n <= n_max admitting a basis n-assignment with zero loss, i.e. an
// n-interleaving; infinite when there is none up to n_max.
ExtendedNat exhaustive_interleaving(const CosheafGraph& F, const CosheafGraph& G, std::size_t n_max,
                                    const OracleCaps& caps = {});

}  // namespace mapperloss
