#include "ipmkit/lp.hpp"

#include <numeric>
#include <queue>

namespace ipmkit {

TransportSolution solve_transport(std::span<const std::int64_t> supply,
                                  std::span<const std::int64_t> demand,
                                  const Eigen::MatrixXd& cost) {
  const auto S = static_cast<Eigen::Index>(supply.size());
  const auto T = static_cast<Eigen::Index>(demand.size());
  if (cost.rows() != S || cost.cols() != T) {
    throw DataError("transport cost matrix must be " + std::to_string(S) + "x" + std::to_string(T));
  }
  if (!cost.allFinite() || (cost.size() > 0 && cost.minCoeff() < 0.0)) {
    throw DataError("transport costs must be finite and non-negative");
  }
  for (auto v : supply) {
    if (v <= 0) throw DataError("transport supplies must be positive");
  }
  for (auto v : demand) {
    if (v <= 0) throw DataError("transport demands must be positive");
  }
  if (std::accumulate(supply.begin(), supply.end(), std::int64_t{0}) !=
      std::accumulate(demand.begin(), demand.end(), std::int64_t{0})) {
    throw DataError("total supply differs from total demand");
  }

  TransportSolution sol;
  sol.num_sources = S;
  sol.num_sinks = T;
  sol.flow.assign(static_cast<std::size_t>(S * T), 0);

  // Nodes 0..S-1 are sources, S..S+T-1 sinks. Reduced cost of s->t is
  // cost(s,t) + pi[s] - pi[t] and stays non-negative throughout.
  const Eigen::Index V = S + T;
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = cost;
  std::vector<double> pi(static_cast<std::size_t>(V), 0.0);
  for (Eigen::Index t = 0; t < T; ++t) {
    pi[static_cast<std::size_t>(S + t)] = S > 0 ? cost.col(t).minCoeff() : 0.0;
  }
  std::vector<std::int64_t> left(supply.begin(), supply.end());
  std::vector<std::int64_t> need(demand.begin(), demand.end());
  std::vector<std::vector<Eigen::Index>> used_by(static_cast<std::size_t>(T));

  auto flow_at = [&](Eigen::Index s, Eigen::Index t) -> std::int64_t& {
    return sol.flow[static_cast<std::size_t>(s * T + t)];
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(V));
  std::vector<Eigen::Index> pred(static_cast<std::size_t>(V));
  std::vector<char> done(static_cast<std::size_t>(V));
  std::int64_t remaining = std::accumulate(left.begin(), left.end(), std::int64_t{0});
  using Entry = std::pair<double, Eigen::Index>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  Eigen::Index root_hint = 0;

  while (remaining > 0) {
    // Dijkstra from one source with supply left, stopping at the first sink
    // that still needs flow.
    while (left[static_cast<std::size_t>(root_hint)] == 0) ++root_hint;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    heap = {};
    dist[static_cast<std::size_t>(root_hint)] = 0.0;
    heap.emplace(0.0, root_hint);

    Eigen::Index target = -1;
    double reach = 0.0;
    while (!heap.empty()) {
      const auto [best, u] = heap.top();
      heap.pop();
      if (done[static_cast<std::size_t>(u)] || best > dist[static_cast<std::size_t>(u)]) continue;
      done[static_cast<std::size_t>(u)] = 1;
      if (u >= S && need[static_cast<std::size_t>(u - S)] > 0) {
        target = u;
        reach = best;
        break;
      }
      if (u < S) {
        const double base = best + pi[static_cast<std::size_t>(u)];
        for (Eigen::Index t = 0; t < T; ++t) {
          const auto v = static_cast<std::size_t>(S + t);
          if (done[v]) continue;
          const double cand = base + rows(u, t) - pi[v];
          if (cand < dist[v]) {
            dist[v] = cand;
            pred[v] = u;
            heap.emplace(cand, static_cast<Eigen::Index>(v));
          }
        }
      } else {
        const Eigen::Index t = u - S;
        auto& list = used_by[static_cast<std::size_t>(t)];
        std::erase_if(list, [&](Eigen::Index s) { return flow_at(s, t) == 0; });
        for (Eigen::Index s : list) {
          const auto v = static_cast<std::size_t>(s);
          if (done[v]) continue;
          const double cand = best - rows(s, t) - pi[v] + pi[static_cast<std::size_t>(u)];
          if (cand < dist[v]) {
            dist[v] = cand;
            pred[v] = u;
            heap.emplace(cand, s);
          }
        }
      }
    }
    if (target < 0) throw SolverError("transport: no augmenting path although supply remains");

    for (Eigen::Index v = 0; v < V; ++v) {
      pi[static_cast<std::size_t>(v)] += std::min(dist[static_cast<std::size_t>(v)], reach);
    }

    std::int64_t amount = need[static_cast<std::size_t>(target - S)];
    Eigen::Index v = target;
    while (pred[static_cast<std::size_t>(v)] >= 0) {
      const Eigen::Index u = pred[static_cast<std::size_t>(v)];
      if (u >= S) amount = std::min(amount, flow_at(v, u - S));
      v = u;
    }
    const Eigen::Index root = v;
    amount = std::min(amount, left[static_cast<std::size_t>(root)]);

    v = target;
    while (pred[static_cast<std::size_t>(v)] >= 0) {
      const Eigen::Index u = pred[static_cast<std::size_t>(v)];
      if (u < S) {
        auto& f = flow_at(u, v - S);
        if (f == 0) used_by[static_cast<std::size_t>(v - S)].push_back(u);
        f += amount;
      } else {
        flow_at(v, u - S) -= amount;
      }
      v = u;
    }
    left[static_cast<std::size_t>(root)] -= amount;
    need[static_cast<std::size_t>(target - S)] -= amount;
    remaining -= amount;
    ++sol.augmentations;
  }

  sol.source_potential.resize(S);
  sol.sink_potential.resize(T);
  for (Eigen::Index s = 0; s < S; ++s) sol.source_potential(s) = -pi[static_cast<std::size_t>(s)];
  for (Eigen::Index t = 0; t < T; ++t) sol.sink_potential(t) = -pi[static_cast<std::size_t>(S + t)];
  for (Eigen::Index s = 0; s < S; ++s) {
    for (Eigen::Index t = 0; t < T; ++t) {
      const std::int64_t f = flow_at(s, t);
      if (f != 0) sol.cost += static_cast<double>(f) * cost(s, t);
    }
  }
  return sol;
}

}  // namespace ipmkit
