#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sym_matrix.hpp"

namespace corrgen {

/// Unordered vertex pair, stored with u < v.
struct Edge {
  std::size_t u;
  std::size_t v;
  auto operator<=>(const Edge&) const = default;
};

/// Undirected simple graph on vertices 0..p-1.
class Graph {
 public:
  explicit Graph(std::size_t p);
  Graph(std::size_t p, std::span<const Edge> edges);

  std::size_t vertex_count() const noexcept { return p_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool has_edge(std::size_t i, std::size_t j) const {
    return i != j && adj_[i * p_ + j] != 0;
  }
  /// Returns false when the edge already exists. Throws on self-loops and
  /// out-of-range labels.
  bool add_edge(std::size_t i, std::size_t j);
  bool remove_edge(std::size_t i, std::size_t j);

  std::size_t degree(std::size_t v) const;
  std::vector<std::size_t> neighbors(std::size_t v) const;
  /// All edges in lexicographic (u, v) order.
  std::vector<Edge> edges() const;

  bool operator==(const Graph& other) const = default;

 private:
  void check_pair(std::size_t i, std::size_t j) const;

  std::size_t p_;
  std::size_t edge_count_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// 2|E| / (p(p-1)). Throws InvalidInput when p < 2.
double density(const Graph& g);

/// Permutation of 0..p-1; position 0 is eliminated first.
class EliminationOrdering {
 public:
  explicit EliminationOrdering(std::vector<std::size_t> order);
  std::span<const std::size_t> order() const noexcept { return order_; }
  /// position()[v] is the index of v in order().
  std::vector<std::size_t> positions() const;

 private:
  std::vector<std::size_t> order_;
};

/// True when every vertex's later neighbours form a clique.
bool is_perfect_elimination_ordering(const Graph& g, const EliminationOrdering& order);

struct ChordalityResult {
  EliminationOrdering ordering;
  bool is_chordal;
};

/// Maximum cardinality search. The returned ordering is the reverse of the
/// visit order, which is a PEO exactly when the graph is chordal.
ChordalityResult maximum_cardinality_search(const Graph& g);

/// Chordal supergraph by the min-degree elimination game. Ties between
/// vertices of equal current degree are broken by a seeded random priority.
/// Chordal inputs are returned unchanged.
Graph triangulate(const Graph& g, std::uint64_t seed);

Graph erdos_renyi(std::size_t p, double edge_prob, std::uint64_t seed);
/// Growth from an m-vertex clique; each new vertex attaches to m distinct
/// existing vertices chosen proportionally to degree.
Graph barabasi_albert(std::size_t p, std::size_t m, std::uint64_t seed);
/// Ring lattice with k nearest neighbours, each lattice edge rewired with
/// probability beta (self-loops and duplicates are never created).
Graph watts_strogatz(std::size_t p, std::size_t k, double beta, std::uint64_t seed);
/// Contiguous blocks; pair (i, j) is an edge with probability
/// prob[block(i)][block(j)].
Graph stochastic_block_model(std::span<const std::size_t> block_sizes,
                             const std::vector<std::vector<double>>& prob,
                             std::uint64_t seed);

/// The ceil(d * p(p-1)/2) pairs with largest |c_ij|; ties go to the
/// lexicographically smaller pair.
Graph threshold_to_density(const SymMatrix& c, double d);

enum class GraphModel { ErdosRenyi, BarabasiAlbert, WattsStrogatz, StochasticBlock, Chordal };

std::string_view to_string(GraphModel model) noexcept;
GraphModel parse_graph_model(std::string_view name);
std::span<const GraphModel> all_graph_models() noexcept;

/// Draws a graph from `model` with parameters chosen to target density d:
///   ER:      edge probability d
///   BA:      m = ceil(d(p-1)/2)
///   WS:      k = nearest even integer to d(p-1), beta = 0.3
///   SBM:     two blocks of sizes floor(p/2), ceil(p/2); within = min(1, 1.4d);
///            between set so the expected density is d
///   Chordal: triangulated BA graph, with m chosen so the triangulated
///            density is closest to d
Graph generate_graph(GraphModel model, std::size_t p, double d, std::uint64_t seed);

/// Human-readable parameters generate_graph() uses, for result metadata.
std::string describe_model_parameters(GraphModel model, std::size_t p, double d);

/// Edge-list text: a header line "p=<n>", then one "i j" pair per line.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph_file(const std::string& path, const Graph& g);

}  // namespace corrgen
