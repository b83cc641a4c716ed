#pragma once

#include <cstdint>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "tfc/opt/mst.hpp"

namespace tfc::opt {

struct ScheduleOp {
  int target = 0; // vector positions
  int source = 0;
  RelationPayload payload;
};

/// Straight-line evaluation schedule for one term: the root entry is a full
/// inner product, every other retained entry is derived from its parent in
/// the spanning tree (breadth-first order), and the write-back map fills
/// the mirrored entries. The certified MAP count is |A| + tree weight.
struct EvaluationSchedule {
  ContractionVectors vectors;
  int root = 0;
  std::vector<ScheduleOp> ops;
  std::int64_t map_raw = 0;        // |A| + sum of edge weights
  std::int64_t map_discounted = 0; // not counting multiplications by 0 and +-1

  /// Evaluate the full (unreduced) element-tensor slice for one term from a
  /// raw flattened geometry vector.
  std::vector<double> evaluate(const std::vector<double>& g_raw) const {
    const std::vector<double> g = vectors.reduce_geometry(g_raw);
    std::vector<double> val(vectors.vecs.size(), 0.0);
    const auto& rootv = vectors.vecs[static_cast<std::size_t>(root)];
    double sum = 0.0;
    for (std::size_t k = 0; k < rootv.size(); ++k) sum += rootv[k] * g[k];
    val[static_cast<std::size_t>(root)] = sum;
    for (const auto& op : ops) {
      const double src = val[static_cast<std::size_t>(op.source)];
      double x = 0.0;
      switch (op.payload.kind) {
        case RelationPayload::Kind::equal: x = op.payload.sign * src; break;
        case RelationPayload::Kind::collinear: x = op.payload.alpha * src; break;
        case RelationPayload::Kind::hamming: {
          x = op.payload.sign * src;
          for (std::size_t k = 0; k < op.payload.positions.size(); ++k)
            x += op.payload.deltas[k] * g[static_cast<std::size_t>(op.payload.positions[k])];
          break;
        }
      }
      val[static_cast<std::size_t>(op.target)] = x;
    }
    std::size_t rows = 1;
    for (int d : vectors.primary_dims) rows *= static_cast<std::size_t>(d);
    std::vector<double> out(rows, 0.0);
    for (std::size_t p = 0; p < vectors.retained.size(); ++p) out[vectors.retained[p]] = val[p];
    for (const auto& [pos, flat] : vectors.mirror) out[flat] = val[pos];
    return out;
  }

  /// Assignment-list rendering of the schedule.
  std::string dump() const {
    std::string s = "A[" + std::to_string(vectors.retained[static_cast<std::size_t>(root)]) +
                    "] = a0 . g  (" + std::to_string(vectors.veclen) + " MAPs)\n";
    for (const auto& op : ops)
      s += "A[" + std::to_string(vectors.retained[static_cast<std::size_t>(op.target)]) +
           "] from A[" + std::to_string(vectors.retained[static_cast<std::size_t>(op.source)]) +
           "]: " + op.payload.str() + "\n";
    for (const auto& [pos, flat] : vectors.mirror)
      s += "A[" + std::to_string(flat) + "] = A[" + std::to_string(vectors.retained[pos]) +
           "]  (symmetry)\n";
    return s;
  }
};

namespace detail {

inline bool is_unit(double x) { return x == 0.0 || x == 1.0 || x == -1.0; }

} // namespace detail

/// Emit the straight-line schedule by breadth-first traversal of the tree.
/// The root is the vertex whose inner product costs the fewest non-unit
/// multiplications (ties broken by position).
inline EvaluationSchedule emit_schedule(const ContractionVectors& cv, const RelationGraph& tree) {
  EvaluationSchedule sched;
  sched.vectors = cv;

  const int n = cv.num_vectors();
  int best_cost = cv.veclen + 1;
  for (int i = 0; i < n; ++i) {
    int cost = 0;
    for (double x : cv.vecs[static_cast<std::size_t>(i)])
      if (!detail::is_unit(x)) ++cost;
    if (cost < best_cost) {
      best_cost = cost;
      sched.root = i;
    }
  }

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& e : tree.tree_edges) {
    adj[static_cast<std::size_t>(e.a)].push_back(e.b);
    adj[static_cast<std::size_t>(e.b)].push_back(e.a);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<int> frontier;
  frontier.push(sched.root);
  seen[static_cast<std::size_t>(sched.root)] = true;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int w : adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      ScheduleOp op;
      op.source = u;
      op.target = w;
      op.payload = relation(cv, u, w).payload;
      sched.ops.push_back(std::move(op));
      frontier.push(w);
    }
  }

  sched.map_raw = cv.veclen + tree.tree_weight;
  // Discounted certificate: multiplications by 0 and +-1 are free.
  std::int64_t disc = best_cost;
  for (const auto& op : sched.ops) {
    switch (op.payload.kind) {
      case RelationPayload::Kind::equal: break;
      case RelationPayload::Kind::collinear:
        if (!detail::is_unit(op.payload.alpha)) ++disc;
        break;
      case RelationPayload::Kind::hamming:
        for (double dl : op.payload.deltas)
          if (!detail::is_unit(dl)) ++disc;
        break;
    }
  }
  sched.map_discounted = disc;
  return sched;
}

struct VerifyReport {
  bool passed = false;
  double max_deviation = 0.0;
  int trials = 0;
  std::int64_t map_raw = 0;
  std::int64_t map_discounted = 0;
};

/// Randomized equivalence check of a schedule against the direct
/// contraction of its own vectors, in the reduced geometry space and (for
/// folded geometry) against a symmetric unreduced geometry tensor.
inline VerifyReport verify_schedule(const EvaluationSchedule& sched, const rep::Term& term,
                                    int trials, std::uint64_t seed = 20180211) {
  VerifyReport report;
  report.trials = trials;
  report.map_raw = sched.map_raw;
  report.map_discounted = sched.map_discounted;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const auto& cv = sched.vectors;
  const std::size_t na = term.num_secondary();

  double scale = 1.0;
  for (const auto& v : cv.vecs)
    for (double x : v) scale = std::max(scale, std::abs(x));

  for (int t = 0; t < trials; ++t) {
    // Random raw geometry; symmetric in the folded axes when folding is on.
    std::vector<double> g_raw(na);
    for (auto& x : g_raw) x = dist(rng);
    if (cv.geometry_folded) {
      const int d = term.secondary_dims[0];
      for (int r = 0; r < d; ++r)
        for (int s = r + 1; s < d; ++s)
          g_raw[static_cast<std::size_t>(s * d + r)] = g_raw[static_cast<std::size_t>(r * d + s)];
    }
    const std::vector<double> out = sched.evaluate(g_raw);
    // direct contraction of the unreduced term
    const std::size_t rows = term.num_primary();
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < na; ++c) sum += term.values[r * na + c] * g_raw[c];
      report.max_deviation = std::max(report.max_deviation, std::abs(out[r] - sum));
    }
  }
  report.passed = report.max_deviation <= 1e-9 * scale;
  if (!report.passed)
    throw verify_error("schedule verification failed: max deviation " +
                       std::to_string(report.max_deviation));
  return report;
}

} // namespace tfc::opt
