#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmlab/functab.hpp"
#include "rmlab/rational.hpp"
#include "rmlab/rm.hpp"
#include "rmlab/rng.hpp"

namespace rmlab::agreement {

using functab::FunctionTable;
using gf::Elem;
using gf::FieldPtr;
using space::Point;
using space::Subspace;

// M distinct linear hyperplanes of F_q^n given by canonical normals, with
// optional local functions f_i living on F_q^{n-1} in each hyperplane's chart
// coordinates.
struct HyperplaneCollection {
  FieldPtr field;
  unsigned n = 0;
  std::vector<std::vector<Elem>> normals;   // canonical: leading coefficient 1
  std::vector<FunctionTable> locals;        // empty, or one table per hyperplane

  std::size_t size() const { return normals.size(); }
  Subspace hyperplane(std::size_t i) const;
  // value of f_i at an ambient point of W_i (pivot-coordinate chart)
  Elem local_value(std::size_t i, Point ambient) const;
};

// Random collection of M distinct hyperplanes (no local functions).
HyperplaneCollection random_collection(const FieldPtr& field, unsigned n, std::size_t m,
                                       RandomStream& rng);

// Collection files: a header "q=<int> n=<int> m=<int>", then one line per
// hyperplane with comma-separated functional coefficients, optionally
// followed by a local-table file path (relative to the collection file).
void write_collection(const HyperplaneCollection& coll, const std::string& path);
HyperplaneCollection read_collection(const std::string& path);

// N(x): number of collection members containing x.
std::uint64_t count_containing(const HyperplaneCollection& coll, Point x);
// N(x) for every point, one digit-DP pass per hyperplane.
std::vector<std::uint32_t> containment_counts(const HyperplaneCollection& coll);

// nu(S) = sum_{x in S} N(x) / (M q^{n-1}): the mass of S under the two-step
// sampling procedure (uniform hyperplane, then uniform point inside it).
Rat nu_measure(const HyperplaneCollection& coll, const std::vector<Point>& s);

struct SamplingBoundReport {
  Rat mu, nu;
  Rat lower, upper;   // (mu(S) - 4q/M)/2 and 2 mu(S) + 8q/M
  Rat slack_lower, slack_upper;
  bool holds = false;
};
// Checks (mu(S) - 4q/M)/2 <= nu(S) <= 2 mu(S) + 8q/M with exact rationals;
// a failure is an implementation bug and throws.
SamplingBoundReport check_sampling_bounds(const HyperplaneCollection& coll,
                                          const std::vector<Point>& s);

struct ChebyshevReport {
  Rat tail;    // Pr_x[|N(x) - M/q| >= c M/q]
  Rat bound;   // q / (c^2 M)
  bool vacuous = false;
  bool holds = false;
};
ChebyshevReport check_chebyshev(const HyperplaneCollection& coll, const Rat& c);

// Consistency graph on the collection: (i, j) is an edge iff the local
// functions agree pointwise on W_i cap W_j.
class ConsistencyGraph {
 public:
  explicit ConsistencyGraph(std::size_t m) : m_(m), adj_(m * m, 0) {}
  static ConsistencyGraph from_adjacency(std::size_t m,
                                         const std::vector<std::pair<unsigned, unsigned>>& edges);

  std::size_t size() const { return m_; }
  bool edge(std::size_t i, std::size_t j) const { return adj_[i * m_ + j] != 0; }
  void set_edge(std::size_t i, std::size_t j, bool present);
  std::size_t edge_count() const;
  std::size_t degree(std::size_t v) const;
  std::size_t common_neighbors(std::size_t i, std::size_t j) const;

 private:
  std::size_t m_;
  std::vector<std::uint8_t> adj_;
};

ConsistencyGraph build_consistency_graph(const HyperplaneCollection& coll);

// Non-transitivity measure: max over non-edges (i,j) of the fraction of
// vertices adjacent to both. Zero iff the graph is an edge-disjoint union of
// cliques.
Rat beta(const ConsistencyGraph& g);

// Fraction of ordered vertex pairs (i, j), diagonal included, that are
// consistent: (2E + M)/M^2. Report-only diagnostic for the dense-graph
// regime, whose premise M >= 10^5 q^4 / eps is unmeetable at desk scale.
Rat pair_agreement_fraction(const ConsistencyGraph& g);

struct CliqueCover {
  std::vector<std::vector<unsigned>> cliques;              // vertex-disjoint
  std::vector<std::pair<unsigned, unsigned>> removed_edges;
  Rat beta_value;
  bool removal_within_analytic_bound = false;  // removed <= 3 sqrt(beta) M^2, report-only
};

// Greedy transitivization: repeatedly take the highest-degree vertex v, grow
// K = {v} + {neighbors sharing >= (1 - 2 sqrt(beta)) M common neighbors with
// v}, prune K to a clique by discarding lowest-degree violators, emit, delete.
// The retained graph (union of emitted cliques) is transitive by construction
// and re-verified exactly.
CliqueCover make_transitive(const ConsistencyGraph& g);

// Global extrapolation from a pairwise-consistent clique of hyperplanes:
// F(x) = f_j(x) for the smallest-index member containing x, 0 elsewhere.
FunctionTable extrapolate(const HyperplaneCollection& coll, const std::vector<unsigned>& clique);

// Planted ground truth: clique_a carries restrictions of g, clique_b of a
// different codeword; f = g + noise of the given weight.
struct PlantedCollection {
  HyperplaneCollection coll;
  std::vector<unsigned> clique_a, clique_b;
  FunctionTable g;
  FunctionTable f;
  Rat eps;
};
PlantedCollection plant_two_codeword_collection(const rm::CodeFamily& family, unsigned n,
                                                std::size_t half, std::uint64_t noise_weight,
                                                RandomStream& rng);

struct DecompositionReport {
  std::uint64_t trials_direct = 0, rejects_direct = 0;
  std::uint64_t trials_two_stage = 0, rejects_two_stage = 0;
  double sigma = 0;         // pooled z-statistic of the difference
  bool consistent = false;  // |z| <= limit
};

// Checks Pr[reject] = E_W Pr[reject on f|_W] by comparing the direct
// estimator with hyperplane-then-subspace sampling (stratified over all
// hyperplanes when exact_hyperplanes is set).
DecompositionReport hyperplane_decomposition_check(const FunctionTable& f,
                                                   const rm::CodeFamily& family, unsigned k,
                                                   std::uint64_t queries, std::uint64_t trials,
                                                   RandomStream& rng, double sigma_limit = 3.0,
                                                   bool exact_hyperplanes = false);

}  // namespace rmlab::agreement
