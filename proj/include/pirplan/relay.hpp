#ifndef PIRPLAN_RELAY_HPP
#define PIRPLAN_RELAY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pirplan/errors.hpp"
#include "pirplan/geometry.hpp"

namespace pirplan {

/// Rayleigh block-fading channel with log-distance path loss and
/// interference-as-noise. Powers in dBm, losses in dB.
struct ChannelParams {
  double tx_power_dbm = 0.0;
  double noise_power_dbm = -96.0;
  double path_loss_exponent = 3.0;  // indoor
  double reference_loss_db = 40.0;  // at 1 m
  double sinr_threshold_db = 10.0;

  struct Interferer {
    Point position;
    double power_dbm = 0.0;
    double activity = 0.0;  // duty factor in [0,1]
  };
  std::vector<Interferer> interference_sources;

  void validate() const {
    if (path_loss_exponent < 2.0)
      throw std::invalid_argument("channel: path_loss_exponent must be >= 2");
    for (const Interferer& i : interference_sources)
      if (i.activity < 0.0 || i.activity > 1.0)
        throw std::invalid_argument("channel: interferer activity must be in [0,1]");
  }
};

namespace detail {
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double path_loss_linear(double distance_m, const ChannelParams& ch) {
  return dbm_to_mw(ch.reference_loss_db) * std::pow(distance_m, ch.path_loss_exponent);
}

/// Expected interference power (mW) at a receiver position.
inline double interference_mw(const Point& rx, const ChannelParams& ch) {
  double total = 0.0;
  for (const ChannelParams::Interferer& i : ch.interference_sources) {
    const double d = distance(i.position, rx);
    if (d <= 0.0)
      throw std::invalid_argument("channel: interferer coincides with receiver");
    total += i.activity * dbm_to_mw(i.power_dbm) / path_loss_linear(d, ch);
  }
  return total;
}
}  // namespace detail

/// P(SINR < threshold) for an exponentially distributed channel power gain:
/// P_out = 1 - exp(-gamma_th * (N + I) * L(d) / P_tx), all in linear units.
/// Monotone increasing in distance and threshold, decreasing in tx power.
inline double outage_probability(const Point& tx, const Point& rx, const ChannelParams& ch) {
  ch.validate();
  const double d = distance(tx, rx);
  if (!(d > 0.0)) throw std::invalid_argument("outage_probability: zero-length link");
  const double gamma = detail::dbm_to_mw(ch.sinr_threshold_db);
  const double noise = detail::dbm_to_mw(ch.noise_power_dbm);
  const double interference = detail::interference_mw(rx, ch);
  const double loss = detail::path_loss_linear(d, ch);
  const double power = detail::dbm_to_mw(ch.tx_power_dbm);
  const double x = gamma * (noise + interference) * loss / power;
  return -std::expm1(-x);
}

enum class NodeKind { sensor, relay_candidate, sink };

/// Outage-weighted communication graph over sensors, candidate relay
/// positions, and the sink. Node order: sensors, candidates, sink last.
struct CommGraph {
  struct Node {
    Point pos;
    NodeKind kind;
  };
  struct Edge {
    int a = 0, b = 0;
    double distance = 0.0;
    double outage = 0.0;
    double weight = 0.0;  // -log(1 - outage)
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  double max_link_distance_m = 0.0;

  int sink_index() const { return static_cast<int>(nodes.size()) - 1; }
  int sensor_count() const {
    int n = 0;
    for (const Node& node : nodes)
      if (node.kind == NodeKind::sensor) ++n;
    return n;
  }
  int candidate_count() const {
    int n = 0;
    for (const Node& node : nodes)
      if (node.kind == NodeKind::relay_candidate) ++n;
    return n;
  }
};

/// Builds the complete graph over all node pairs within max_link_distance.
/// Undirected edge outage is the worse of the two directions (they differ when
/// interference is asymmetric), so symmetric parameters give symmetric weights.
inline CommGraph build_weighted_graph(const std::vector<Point>& sensors,
                                      const std::vector<Point>& candidates,
                                      const Point& sink, const ChannelParams& ch,
                                      double max_link_distance_m,
                                      double edge_outage_cap = 1.0) {
  if (sensors.empty()) throw std::invalid_argument("graph: need at least one sensor");
  if (!(max_link_distance_m > 0.0))
    throw std::invalid_argument("graph: max link distance must be > 0");
  ch.validate();

  CommGraph g;
  g.max_link_distance_m = max_link_distance_m;
  for (const Point& p : sensors) g.nodes.push_back({p, NodeKind::sensor});
  for (const Point& p : candidates) g.nodes.push_back({p, NodeKind::relay_candidate});
  g.nodes.push_back({sink, NodeKind::sink});

  const int n = static_cast<int>(g.nodes.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (distance(g.nodes[i].pos, g.nodes[j].pos) < 1e-9)
        throw std::invalid_argument("graph: duplicate node positions");

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = distance(g.nodes[i].pos, g.nodes[j].pos);
      if (d > max_link_distance_m) continue;
      const double out_ij = outage_probability(g.nodes[i].pos, g.nodes[j].pos, ch);
      const double out_ji = outage_probability(g.nodes[j].pos, g.nodes[i].pos, ch);
      const double outage = std::max(out_ij, out_ji);
      if (outage > edge_outage_cap) continue;
      if (outage >= 1.0 - 1e-15) continue;  // dead link
      g.edges.push_back({i, j, d, outage, -std::log1p(-outage)});
    }
  }
  return g;
}

/// Relay placement result: the chosen candidates, the routing tree over the
/// active nodes, and how good the relay count is known to be.
struct RelaySolution {
  std::vector<int> chosen_candidates;  // indices into the candidate list
  std::vector<CommGraph::Edge> tree_edges;
  double tree_cost = 0.0;
  bool connected = false;
  bool optimal = false;       // relay count proved minimal by enumeration
  int relay_lower_bound = 0;  // valid lower bound on the minimum relay count
};

enum class RelaySearch { automatic, exact, greedy };

namespace detail {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

/// Edges usable for a given active-node subset and outage cap.
inline std::vector<int> usable_edges(const CommGraph& g, const std::vector<char>& active,
                                     double cap) {
  std::vector<int> ids;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const CommGraph::Edge& edge = g.edges[e];
    if (edge.outage > cap + 1e-15) continue;
    if (active[edge.a] && active[edge.b]) ids.push_back(e);
  }
  return ids;
}

/// All active nodes in one component containing the sink?
inline bool all_connected(const CommGraph& g, const std::vector<char>& active, double cap) {
  Dsu dsu(static_cast<int>(g.nodes.size()));
  for (int e : usable_edges(g, active, cap)) dsu.unite(g.edges[e].a, g.edges[e].b);
  const int root = dsu.find(g.sink_index());
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v)
    if (active[v] && dsu.find(v) != root) return false;
  return true;
}

inline int connected_sensor_count(const CommGraph& g, const std::vector<char>& active,
                                  double cap) {
  Dsu dsu(static_cast<int>(g.nodes.size()));
  for (int e : usable_edges(g, active, cap)) dsu.unite(g.edges[e].a, g.edges[e].b);
  const int root = dsu.find(g.sink_index());
  int count = 0;
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v)
    if (active[v] && g.nodes[v].kind == NodeKind::sensor && dsu.find(v) == root) ++count;
  return count;
}

/// Kruskal over the active subgraph. Assumes connectivity was checked.
inline std::pair<std::vector<CommGraph::Edge>, double> spanning_tree(
    const CommGraph& g, const std::vector<char>& active, double cap) {
  std::vector<int> ids = usable_edges(g, active, cap);
  std::sort(ids.begin(), ids.end(), [&](int x, int y) {
    if (g.edges[x].weight != g.edges[y].weight) return g.edges[x].weight < g.edges[y].weight;
    return x < y;
  });
  Dsu dsu(static_cast<int>(g.nodes.size()));
  std::vector<CommGraph::Edge> tree;
  double cost = 0.0;
  for (int e : ids) {
    if (dsu.unite(g.edges[e].a, g.edges[e].b)) {
      tree.push_back(g.edges[e]);
      cost += g.edges[e].weight;
    }
  }
  return {std::move(tree), cost};
}

/// Minimum number of candidate nodes on any sensor-to-sink path (per sensor),
/// maximized over sensors: a valid lower bound on the relay count.
inline int relay_count_lower_bound(const CommGraph& g, double cap) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<int>> adj(n);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (g.edges[e].outage > cap + 1e-15) continue;
    adj[g.edges[e].a].push_back(g.edges[e].b);
    adj[g.edges[e].b].push_back(g.edges[e].a);
  }
  // Node-weighted Dijkstra from the sink: entering a candidate costs 1.
  std::vector<int> dist(n, std::numeric_limits<int>::max());
  using Item = std::pair<int, int>;  // (cost, node)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[g.sink_index()] = 0;
  pq.push({0, g.sink_index()});
  while (!pq.empty()) {
    const auto [c, v] = pq.top();
    pq.pop();
    if (c > dist[v]) continue;
    for (int w : adj[v]) {
      const int step = g.nodes[w].kind == NodeKind::relay_candidate ? 1 : 0;
      if (c + step < dist[w]) {
        dist[w] = c + step;
        pq.push({dist[w], w});
      }
    }
  }
  int bound = 0;
  for (int v = 0; v < n; ++v)
    if (g.nodes[v].kind == NodeKind::sensor && dist[v] != std::numeric_limits<int>::max())
      bound = std::max(bound, dist[v]);
  return bound;
}

/// Best achievable bottleneck outage per sensor over all edges (cap ignored),
/// for the infeasibility report.
inline std::vector<InfeasibleError::WorstLink> worst_links(const CommGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    adj[g.edges[e].a].push_back({g.edges[e].b, e});
    adj[g.edges[e].b].push_back({g.edges[e].a, e});
  }
  // Minimax-outage Dijkstra from the sink.
  std::vector<double> bottleneck(n, 1.0);
  std::vector<int> via_edge(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  bottleneck[g.sink_index()] = 0.0;
  pq.push({0.0, g.sink_index()});
  while (!pq.empty()) {
    const auto [b, v] = pq.top();
    pq.pop();
    if (b > bottleneck[v]) continue;
    for (const auto& [w, e] : adj[v]) {
      const double nb = std::max(b, g.edges[e].outage);
      if (nb < bottleneck[w]) {
        bottleneck[w] = nb;
        via_edge[w] = e;
        pq.push({nb, w});
      }
    }
  }
  std::vector<InfeasibleError::WorstLink> result;
  for (int v = 0; v < n; ++v) {
    if (g.nodes[v].kind != NodeKind::sensor) continue;
    InfeasibleError::WorstLink wl;
    wl.sensor_index = v;
    if (via_edge[v] >= 0) {
      // Walk back to find the bottleneck edge on the best path.
      int cur = v;
      int worst_edge = via_edge[v];
      while (via_edge[cur] >= 0) {
        const int e = via_edge[cur];
        if (g.edges[e].outage > g.edges[worst_edge].outage) worst_edge = e;
        cur = (g.edges[e].a == cur) ? g.edges[e].b : g.edges[e].a;
      }
      wl.from_node = g.edges[worst_edge].a;
      wl.to_node = g.edges[worst_edge].b;
      wl.outage = bottleneck[v];
    } else {
      wl.from_node = v;
      wl.to_node = -1;
      wl.outage = 1.0;
    }
    result.push_back(wl);
  }
  return result;
}

}  // namespace detail

/// Picks the minimum number of relays such that every sensor reaches the sink
/// through links at or under the outage cap; among minimum-count sets, the one
/// with the cheapest routing tree (sum of -log(1-outage)). Exact subset
/// enumeration up to 12 candidates, greedy set-cover style above (with a
/// reported relay-count lower bound).
inline RelaySolution place_relays(const CommGraph& g, double per_link_outage_cap = 0.1,
                                  RelaySearch mode = RelaySearch::automatic) {
  const int n = static_cast<int>(g.nodes.size());
  const int nc = g.candidate_count();
  std::vector<int> candidate_nodes;
  for (int v = 0; v < n; ++v)
    if (g.nodes[v].kind == NodeKind::relay_candidate) candidate_nodes.push_back(v);

  std::vector<char> base_active(n, 0);
  for (int v = 0; v < n; ++v)
    if (g.nodes[v].kind != NodeKind::relay_candidate) base_active[v] = 1;

  // Feasibility with every candidate enabled; otherwise report worst links.
  {
    std::vector<char> all_active(n, 1);
    if (!detail::all_connected(g, all_active, per_link_outage_cap)) {
      // Strict criterion counts stranded candidates too; what matters for
      // feasibility is sensors reaching the sink.
      if (detail::connected_sensor_count(g, all_active, per_link_outage_cap) <
          g.sensor_count())
        throw InfeasibleError("place_relays: sensors unreachable even with all candidates",
                              detail::worst_links(g));
    }
  }

  if (mode == RelaySearch::automatic) mode = nc <= 12 ? RelaySearch::exact : RelaySearch::greedy;

  RelaySolution sol;
  sol.relay_lower_bound = detail::relay_count_lower_bound(g, per_link_outage_cap);

  if (mode == RelaySearch::exact) {
    if (nc > 20)
      throw SizeLimitError("place_relays: exact search limited to 20 candidates, got " +
                           std::to_string(nc));
    for (int size = 0; size <= nc; ++size) {
      bool found = false;
      double best_cost = std::numeric_limits<double>::infinity();
      std::vector<int> best_subset;
      std::vector<CommGraph::Edge> best_tree;

      std::vector<int> subset(size);
      auto enumerate = [&](auto&& self, int pos, int start) -> void {
        if (pos == size) {
          std::vector<char> active = base_active;
          for (int idx : subset) active[candidate_nodes[idx]] = 1;
          if (!detail::all_connected(g, active, per_link_outage_cap)) return;
          auto [tree, cost] = detail::spanning_tree(g, active, per_link_outage_cap);
          if (cost < best_cost - 1e-12) {
            best_cost = cost;
            best_subset = subset;
            best_tree = std::move(tree);
            found = true;
          }
          return;
        }
        for (int i = start; i <= nc - (size - pos); ++i) {
          subset[pos] = i;
          self(self, pos + 1, i + 1);
        }
      };
      enumerate(enumerate, 0, 0);
      if (found) {
        sol.chosen_candidates = best_subset;
        sol.tree_edges = std::move(best_tree);
        sol.tree_cost = best_cost;
        sol.connected = true;
        sol.optimal = true;
        return sol;
      }
    }
    throw InfeasibleError("place_relays: no feasible subset (unexpected)",
                          detail::worst_links(g));
  }

  // Greedy: repeatedly add the candidate connecting the most sensors.
  const int sensor_total = g.sensor_count();
  std::vector<char> active = base_active;
  std::vector<char> used(nc, 0);
  std::vector<int> chosen;
  while (detail::connected_sensor_count(g, active, per_link_outage_cap) < sensor_total) {
    const int before = detail::connected_sensor_count(g, active, per_link_outage_cap);
    int best_idx = -1;
    int best_gain = -1;
    for (int i = 0; i < nc; ++i) {
      if (used[i]) continue;
      active[candidate_nodes[i]] = 1;
      const int after = detail::connected_sensor_count(g, active, per_link_outage_cap);
      active[candidate_nodes[i]] = 0;
      const int gain = after - before;
      if (gain > best_gain) {
        best_gain = gain;
        best_idx = i;
      }
    }
    if (best_idx < 0) break;  // cannot happen after the feasibility check
    if (best_gain == 0) {
      // No single candidate helps directly; grow the sink component with the
      // lowest-index candidate adjacent to an active node so multi-relay
      // bridges can form.
      int fallback = -1;
      for (int i = 0; i < nc && fallback < 0; ++i) {
        if (used[i]) continue;
        for (const CommGraph::Edge& e : g.edges) {
          if (e.outage > per_link_outage_cap + 1e-15) continue;
          const int other = (e.a == candidate_nodes[i])   ? e.b
                            : (e.b == candidate_nodes[i]) ? e.a
                                                          : -1;
          if (other >= 0 && active[other]) {
            fallback = i;
            break;
          }
        }
      }
      if (fallback >= 0) best_idx = fallback;
    }
    used[best_idx] = 1;
    active[candidate_nodes[best_idx]] = 1;
    chosen.push_back(best_idx);
  }

  // Drop chosen relays that turned out unnecessary (reverse removal pass).
  for (int i = static_cast<int>(chosen.size()) - 1; i >= 0; --i) {
    active[candidate_nodes[chosen[i]]] = 0;
    if (detail::connected_sensor_count(g, active, per_link_outage_cap) == sensor_total) {
      chosen.erase(chosen.begin() + i);
    } else {
      active[candidate_nodes[chosen[i]]] = 1;
    }
  }

  std::sort(chosen.begin(), chosen.end());
  auto [tree, cost] = detail::spanning_tree(g, active, per_link_outage_cap);
  sol.chosen_candidates = chosen;
  sol.tree_edges = std::move(tree);
  sol.tree_cost = cost;
  sol.connected = true;
  sol.optimal = static_cast<int>(chosen.size()) == sol.relay_lower_bound;
  return sol;
}

/// Per-sensor quality of a routing tree: end-to-end success probability of a
/// single attempt per hop, and expected transmissions under per-hop ARQ.
struct TreeMetrics {
  struct PerSensor {
    int sensor_node = 0;
    double path_success = 1.0;
    double expected_tx_per_packet = 0.0;
    double expected_tx_per_day = 0.0;
  };
  std::vector<PerSensor> sensors;
};

inline TreeMetrics evaluate_tree(const CommGraph& g, const RelaySolution& sol,
                                 double packets_per_day = 0.0) {
  if (!sol.connected) throw std::invalid_argument("evaluate_tree: solution not connected");
  const int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<std::pair<int, const CommGraph::Edge*>>> adj(n);
  for (const CommGraph::Edge& e : sol.tree_edges) {
    adj[e.a].push_back({e.b, &e});
    adj[e.b].push_back({e.a, &e});
  }
  // BFS from the sink to get parent edges.
  std::vector<const CommGraph::Edge*> parent(n, nullptr);
  std::vector<char> seen(n, 0);
  std::vector<int> queue{g.sink_index()};
  seen[g.sink_index()] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const int v = queue[h];
    for (const auto& [w, e] : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      parent[w] = e;
      queue.push_back(w);
    }
  }

  TreeMetrics metrics;
  for (int v = 0; v < n; ++v) {
    if (g.nodes[v].kind != NodeKind::sensor) continue;
    if (!seen[v]) throw std::invalid_argument("evaluate_tree: sensor not in tree");
    TreeMetrics::PerSensor s;
    s.sensor_node = v;
    int cur = v;
    while (parent[cur] != nullptr) {
      const CommGraph::Edge* e = parent[cur];
      s.path_success *= 1.0 - e->outage;
      s.expected_tx_per_packet += 1.0 / (1.0 - e->outage);
      cur = (e->a == cur) ? e->b : e->a;
    }
    s.expected_tx_per_day = packets_per_day * s.expected_tx_per_packet;
    metrics.sensors.push_back(s);
  }
  return metrics;
}

}  // namespace pirplan

#endif  // PIRPLAN_RELAY_HPP
