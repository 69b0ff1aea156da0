#include "graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "rng.hpp"

namespace corrgen {

Graph::Graph(std::size_t p) : p_(p), adj_(p * p, 0) {}

Graph::Graph(std::size_t p, std::span<const Edge> edges) : Graph(p) {
  for (const Edge& e : edges)
    if (!add_edge(e.u, e.v))
      fail(ErrorCode::InvalidInput, "duplicate edge " + std::to_string(e.u) + " " +
                                        std::to_string(e.v));
}

void Graph::check_pair(std::size_t i, std::size_t j) const {
  if (i >= p_ || j >= p_)
    fail(ErrorCode::InvalidInput, "vertex label out of range (p=" + std::to_string(p_) + ")");
  if (i == j) fail(ErrorCode::InvalidInput, "self-loop on vertex " + std::to_string(i));
}

bool Graph::add_edge(std::size_t i, std::size_t j) {
  check_pair(i, j);
  if (adj_[i * p_ + j]) return false;
  adj_[i * p_ + j] = adj_[j * p_ + i] = 1;
  ++edge_count_;
  return true;
}

bool Graph::remove_edge(std::size_t i, std::size_t j) {
  check_pair(i, j);
  if (!adj_[i * p_ + j]) return false;
  adj_[i * p_ + j] = adj_[j * p_ + i] = 0;
  --edge_count_;
  return true;
}

std::size_t Graph::degree(std::size_t v) const {
  return static_cast<std::size_t>(
      std::count(adj_.begin() + v * p_, adj_.begin() + (v + 1) * p_, std::uint8_t{1}));
}

std::vector<std::size_t> Graph::neighbors(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < p_; ++u)
    if (adj_[v * p_ + u]) out.push_back(u);
  return out;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < p_; ++i)
    for (std::size_t j = i + 1; j < p_; ++j)
      if (adj_[i * p_ + j]) out.push_back({i, j});
  return out;
}

double density(const Graph& g) {
  const std::size_t p = g.vertex_count();
  if (p < 2) fail(ErrorCode::InvalidInput, "density needs at least two vertices");
  return 2.0 * static_cast<double>(g.edge_count()) / (static_cast<double>(p) * (p - 1));
}

EliminationOrdering::EliminationOrdering(std::vector<std::size_t> order)
    : order_(std::move(order)) {
  std::vector<std::uint8_t> seen(order_.size(), 0);
  for (std::size_t v : order_) {
    if (v >= order_.size() || seen[v])
      fail(ErrorCode::InvalidInput, "elimination ordering is not a permutation");
    seen[v] = 1;
  }
}

std::vector<std::size_t> EliminationOrdering::positions() const {
  std::vector<std::size_t> pos(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) pos[order_[i]] = i;
  return pos;
}

bool is_perfect_elimination_ordering(const Graph& g, const EliminationOrdering& ordering) {
  const auto order = ordering.order();
  if (order.size() != g.vertex_count())
    fail(ErrorCode::InvalidInput, "ordering size does not match graph");
  const auto pos = ordering.positions();
  std::vector<std::size_t> later;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t v = order[i];
    later.clear();
    for (std::size_t u : g.neighbors(v))
      if (pos[u] > i) later.push_back(u);
    for (std::size_t a = 0; a < later.size(); ++a)
      for (std::size_t b = a + 1; b < later.size(); ++b)
        if (!g.has_edge(later[a], later[b])) return false;
  }
  return true;
}

ChordalityResult maximum_cardinality_search(const Graph& g) {
  const std::size_t p = g.vertex_count();
  std::vector<std::size_t> weight(p, 0);
  std::vector<std::uint8_t> numbered(p, 0);
  std::vector<std::size_t> order(p);
  for (std::size_t step = 0; step < p; ++step) {
    std::size_t best = p;
    for (std::size_t v = 0; v < p; ++v)
      if (!numbered[v] && (best == p || weight[v] > weight[best])) best = v;
    numbered[best] = 1;
    order[p - 1 - step] = best;
    for (std::size_t u = 0; u < p; ++u)
      if (!numbered[u] && g.has_edge(best, u)) ++weight[u];
  }
  EliminationOrdering ordering(std::move(order));
  const bool chordal = is_perfect_elimination_ordering(g, ordering);
  return {std::move(ordering), chordal};
}

Graph triangulate(const Graph& g, std::uint64_t seed) {
  if (maximum_cardinality_search(g).is_chordal) return g;
  const std::size_t p = g.vertex_count();
  Rng rng(seed, Stream::TieBreak);
  std::vector<std::size_t> priority(p);
  std::iota(priority.begin(), priority.end(), 0);
  for (std::size_t i = p; i > 1; --i) std::swap(priority[i - 1], priority[rng.below(i)]);

  Graph out = g;
  Graph work = g;
  std::vector<std::uint8_t> alive(p, 1);
  std::vector<std::size_t> degree(p);
  for (std::size_t v = 0; v < p; ++v) degree[v] = g.degree(v);

  for (std::size_t step = 0; step < p; ++step) {
    std::size_t pick = p;
    for (std::size_t v = 0; v < p; ++v) {
      if (!alive[v]) continue;
      if (pick == p || degree[v] < degree[pick] ||
          (degree[v] == degree[pick] && priority[v] < priority[pick]))
        pick = v;
    }
    std::vector<std::size_t> nbrs;
    for (std::size_t u = 0; u < p; ++u)
      if (alive[u] && work.has_edge(pick, u)) nbrs.push_back(u);
    for (std::size_t a = 0; a < nbrs.size(); ++a)
      for (std::size_t b = a + 1; b < nbrs.size(); ++b)
        if (work.add_edge(nbrs[a], nbrs[b])) {
          out.add_edge(nbrs[a], nbrs[b]);
          ++degree[nbrs[a]];
          ++degree[nbrs[b]];
        }
    alive[pick] = 0;
    for (std::size_t u : nbrs) --degree[u];
  }
  return out;
}

namespace {

void check_probability(double prob, const char* what) {
  if (!(prob >= 0.0 && prob <= 1.0))
    fail(ErrorCode::InvalidInput, std::string(what) + " must lie in [0, 1]");
}

}  // namespace

Graph erdos_renyi(std::size_t p, double edge_prob, std::uint64_t seed) {
  check_probability(edge_prob, "edge probability");
  Rng rng(seed, Stream::Graph);
  Graph g(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (rng.uniform() < edge_prob) g.add_edge(i, j);
  return g;
}

Graph barabasi_albert(std::size_t p, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= p)
    fail(ErrorCode::InvalidInput, "Barabasi-Albert needs 1 <= m < p");
  Rng rng(seed, Stream::Graph);
  Graph g(p);
  // Every edge contributes both endpoints, so sampling uniformly from this
  // list is sampling proportionally to degree.
  std::vector<std::size_t> endpoints;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      g.add_edge(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  std::vector<std::size_t> targets;
  for (std::size_t v = m; v < p; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const std::size_t t = endpoints.empty() ? rng.below(v)
                                              : endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (std::size_t t : targets) {
      g.add_edge(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return g;
}

Graph watts_strogatz(std::size_t p, std::size_t k, double beta, std::uint64_t seed) {
  if (k % 2 != 0 || k >= p)
    fail(ErrorCode::InvalidInput, "Watts-Strogatz needs even k < p");
  check_probability(beta, "rewiring probability");
  Rng rng(seed, Stream::Graph);
  Graph g(p);
  for (std::size_t j = 1; j <= k / 2; ++j)
    for (std::size_t u = 0; u < p; ++u) g.add_edge(u, (u + j) % p);
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t u = 0; u < p; ++u) {
      const std::size_t v = (u + j) % p;
      if (!(rng.uniform() < beta)) continue;
      std::size_t w = rng.below(p);
      bool skip = false;
      while (w == u || g.has_edge(u, w)) {
        if (g.degree(u) >= p - 1) {
          skip = true;
          break;
        }
        w = rng.below(p);
      }
      if (skip) continue;
      g.remove_edge(u, v);
      g.add_edge(u, w);
    }
  }
  return g;
}

Graph stochastic_block_model(std::span<const std::size_t> block_sizes,
                             const std::vector<std::vector<double>>& prob,
                             std::uint64_t seed) {
  const std::size_t blocks = block_sizes.size();
  if (blocks == 0) fail(ErrorCode::InvalidInput, "SBM needs at least one block");
  if (prob.size() != blocks)
    fail(ErrorCode::InvalidInput, "SBM probability matrix has the wrong dimension");
  for (std::size_t a = 0; a < blocks; ++a) {
    if (prob[a].size() != blocks)
      fail(ErrorCode::InvalidInput, "SBM probability matrix has the wrong dimension");
    for (std::size_t b = 0; b < blocks; ++b) check_probability(prob[a][b], "SBM probability");
  }
  for (std::size_t a = 0; a < blocks; ++a)
    for (std::size_t b = a + 1; b < blocks; ++b)
      if (prob[a][b] != prob[b][a])
        fail(ErrorCode::InvalidInput, "SBM probability matrix must be symmetric");

  std::vector<std::size_t> block_of;
  for (std::size_t a = 0; a < blocks; ++a) block_of.insert(block_of.end(), block_sizes[a], a);
  const std::size_t p = block_of.size();
  Rng rng(seed, Stream::Graph);
  Graph g(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (rng.uniform() < prob[block_of[i]][block_of[j]]) g.add_edge(i, j);
  return g;
}

Graph threshold_to_density(const SymMatrix& c, double d) {
  if (!(d > 0.0 && d <= 1.0)) fail(ErrorCode::InvalidInput, "density must lie in (0, 1]");
  const std::size_t p = c.dim();
  std::vector<Edge> pairs;
  pairs.reserve(p * (p - 1) / 2);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) pairs.push_back({i, j});
  std::stable_sort(pairs.begin(), pairs.end(), [&](const Edge& x, const Edge& y) {
    return std::abs(c(x.u, x.v)) > std::abs(c(y.u, y.v));
  });
  const double target = d * static_cast<double>(pairs.size());
  const auto keep = std::min(pairs.size(), static_cast<std::size_t>(std::ceil(target - 1e-9)));
  return Graph(p, std::span<const Edge>(pairs.data(), keep));
}

namespace {

constexpr std::array<GraphModel, 5> kModels = {
    GraphModel::ErdosRenyi, GraphModel::BarabasiAlbert, GraphModel::WattsStrogatz,
    GraphModel::StochasticBlock, GraphModel::Chordal};

constexpr double kWattsStrogatzBeta = 0.3;

std::size_t ba_m_for_density(std::size_t p, double d) {
  const auto m = static_cast<std::size_t>(std::ceil(d * static_cast<double>(p - 1) / 2.0));
  return std::clamp<std::size_t>(m, 1, p - 1);
}

std::size_t ws_k_for_density(std::size_t p, double d) {
  auto k = static_cast<std::size_t>(2.0 * std::round(d * static_cast<double>(p - 1) / 2.0));
  const std::size_t max_even = (p - 1) % 2 == 0 ? p - 1 : p - 2;
  return std::clamp<std::size_t>(k, 2, max_even);
}

struct SbmParameters {
  std::array<std::size_t, 2> sizes;
  double within;
  double between;
};

SbmParameters sbm_for_density(std::size_t p, double d) {
  const std::size_t n1 = p / 2;
  const std::size_t n2 = p - n1;
  const double within = std::min(1.0, 1.4 * d);
  const double pairs = static_cast<double>(p) * (p - 1) / 2.0;
  const double within_pairs = (n1 * (n1 - 1) + n2 * (n2 - 1)) / 2.0;
  const double cross_pairs = static_cast<double>(n1) * n2;
  const double between = std::clamp((d * pairs - within * within_pairs) / cross_pairs, 0.0, 1.0);
  return {{n1, n2}, within, between};
}

}  // namespace

std::string_view to_string(GraphModel model) noexcept {
  switch (model) {
    case GraphModel::ErdosRenyi: return "er";
    case GraphModel::BarabasiAlbert: return "ba";
    case GraphModel::WattsStrogatz: return "ws";
    case GraphModel::StochasticBlock: return "sbm";
    case GraphModel::Chordal: return "chordal";
  }
  return "unknown";
}

GraphModel parse_graph_model(std::string_view name) {
  for (GraphModel m : kModels)
    if (to_string(m) == name) return m;
  fail(ErrorCode::InvalidInput, "unknown graph model '" + std::string(name) +
                                    "' (expected er, ba, ws, sbm or chordal)");
}

std::span<const GraphModel> all_graph_models() noexcept { return kModels; }

Graph generate_graph(GraphModel model, std::size_t p, double d, std::uint64_t seed) {
  if (p < 3) fail(ErrorCode::InvalidInput, "graph models need p >= 3");
  if (!(d > 0.0 && d <= 1.0)) fail(ErrorCode::InvalidInput, "density must lie in (0, 1]");
  switch (model) {
    case GraphModel::ErdosRenyi:
      return erdos_renyi(p, d, seed);
    case GraphModel::BarabasiAlbert:
      return barabasi_albert(p, ba_m_for_density(p, d), seed);
    case GraphModel::WattsStrogatz:
      return watts_strogatz(p, ws_k_for_density(p, d), kWattsStrogatzBeta, seed);
    case GraphModel::StochasticBlock: {
      const auto s = sbm_for_density(p, d);
      const std::vector<std::vector<double>> prob = {{s.within, s.between},
                                                     {s.between, s.within}};
      return stochastic_block_model(s.sizes, prob, seed);
    }
    case GraphModel::Chordal: {
      // Triangulated density grows with m; stop at the first m that reaches d.
      Graph best(p);
      double best_gap = 2.0;
      for (std::size_t m = 1; m < p; ++m) {
        Graph g = triangulate(barabasi_albert(p, m, seed), seed);
        const double gap = std::abs(density(g) - d);
        const bool reached = density(g) >= d;
        if (gap < best_gap) {
          best_gap = gap;
          best = std::move(g);
        }
        if (reached) break;
      }
      return best;
    }
  }
  fail(ErrorCode::InvalidInput, "unknown graph model");
}

std::string describe_model_parameters(GraphModel model, std::size_t p, double d) {
  std::ostringstream os;
  switch (model) {
    case GraphModel::ErdosRenyi:
      os << "edge_prob=" << format_double(d);
      break;
    case GraphModel::BarabasiAlbert:
      os << "m=" << ba_m_for_density(p, d);
      break;
    case GraphModel::WattsStrogatz:
      os << "k=" << ws_k_for_density(p, d) << " beta=" << format_double(kWattsStrogatzBeta);
      break;
    case GraphModel::StochasticBlock: {
      const auto s = sbm_for_density(p, d);
      os << "blocks=" << s.sizes[0] << "+" << s.sizes[1] << " within=" << format_double(s.within)
         << " between=" << format_double(s.between);
      break;
    }
    case GraphModel::Chordal:
      os << "triangulated BA, m chosen per seed so the filled density is closest to "
         << format_double(d);
      break;
  }
  return os.str();
}

Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<Graph> g;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line.substr(first));
    if (!g) {
      std::size_t p = 0;
      if (line.compare(first, 2, "p=") != 0 || !(std::istringstream(line.substr(first + 2)) >> p))
        fail(ErrorCode::InvalidInput, "graph file must start with a 'p=<n>' header");
      g.emplace(p);
      continue;
    }
    long long i = -1, j = -1;
    std::string extra;
    if (!(fields >> i >> j) || (fields >> extra) || i < 0 || j < 0)
      fail(ErrorCode::InvalidInput, "line " + std::to_string(line_no) + ": expected 'i j'");
    if (!g->add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j)))
      fail(ErrorCode::InvalidInput, "line " + std::to_string(line_no) + ": duplicate edge");
  }
  if (!g) fail(ErrorCode::InvalidInput, "graph file is empty");
  return std::move(*g);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "p=" << g.vertex_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  write_graph(out, g);
  if (!out) fail(ErrorCode::Io, "write failed for " + path);
}

}  // namespace corrgen
