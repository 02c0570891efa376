#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alstl/robustness_vector.hpp"

namespace alstl::graph {

/// Node values closer than this are treated as equal and get no edge.
constexpr double kTieTolerance = 1e-9;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node {
  std::string spec;
  double value = 0.0;
  double raw_weight = 0.0;
  double weight = 0.0;
};

struct Edge {
  std::size_t src = 0;
  std::size_t dst = 0;
  double weight = 0.0;
  bool operator==(const Edge&) const = default;
};

/// Performance DAG over specifications. Edges point from the higher-valued
/// node to the lower-valued node and carry the (positive) value difference.
class PerfDag {
 public:
  PerfDag() = default;
  PerfDag(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  std::vector<double> values() const;
  std::vector<double> weights() const;

  /// Stores raw (n - |ancestors|) and softmax-normalized weights on the nodes.
  void assign_weights(std::span<const double> raw, std::span<const double> normalized);

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

struct WeightMap {
  std::vector<std::string> spec_ids;
  std::vector<double> raw;
  std::vector<double> weights;
};

/// Edge i->j for every pair with value_i > value_j (beyond the tie
/// tolerance). Node weights are filled in.
PerfDag build_local_dag(const RobustnessVector& rho);

/// Aggregates per-trajectory vectors by per-spec mean and rebuilds the DAG
/// from the mean vector.
PerfDag build_global_dag(std::span<const RobustnessVector> rhos);

/// |ancestors(v)| per node via transitive in-reachability; throws on cycles.
std::vector<std::size_t> ancestor_counts(std::size_t n, std::span<const Edge> edges);

/// raw = n - |ancestors|, then softmax.
WeightMap node_weights(const PerfDag& dag, std::size_t n);

std::vector<double> softmax(std::span<const double> xs);

double cumulative_fitness(const RobustnessVector& rho, const WeightMap& weights);
double cumulative_fitness(std::span<const double> rho, std::span<const double> weights);

double node_sum(const PerfDag& dag);
double edge_sum(const PerfDag& dag);

struct PgaRecord {
  double node_sum = 0.0;
  double edge_sum = 0.0;
  double lambda = 0.0;
  double pga = 0.0;
};

PgaRecord pga(const PerfDag& dag, double lambda);
/// Shorthand for pga(build_local_dag(rho), lambda).
PgaRecord pga_of(const RobustnessVector& rho, double lambda);

void validate_lambda(double lambda);

std::string to_dot(const PerfDag& dag, std::string_view name = "perf");

}  // namespace alstl::graph
