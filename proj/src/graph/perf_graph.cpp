#include "alstl/perf_graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alstl/kernels.hpp"

namespace alstl::graph {

PerfDag::PerfDag(std::vector<Node> nodes, std::vector<Edge> edges) : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (const auto& e : edges_) {
    if (e.src >= nodes_.size() || e.dst >= nodes_.size()) throw GraphError("edge endpoint out of range");
    if (e.src == e.dst) throw GraphError("self edge on node " + nodes_[e.src].spec);
  }
}

std::vector<double> PerfDag::values() const {
  std::vector<double> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.value);
  return out;
}

std::vector<double> PerfDag::weights() const {
  std::vector<double> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.weight);
  return out;
}

void PerfDag::assign_weights(std::span<const double> raw, std::span<const double> normalized) {
  if (raw.size() != nodes_.size() || normalized.size() != nodes_.size()) throw GraphError("weight size mismatch");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    nodes_[i].raw_weight = raw[i];
    nodes_[i].weight = normalized[i];
  }
}

namespace {

PerfDag dag_from_values(std::span<const double> values, std::span<const std::string> ids) {
  std::vector<Node> nodes;
  nodes.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) nodes.push_back({ids[i], values[i], 0.0, 0.0});
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double diff = values[i] - values[j];
      if (i != j && diff > kTieTolerance) edges.push_back({i, j, diff});
    }
  }
  PerfDag dag(std::move(nodes), std::move(edges));
  const WeightMap w = node_weights(dag, dag.size());
  dag.assign_weights(w.raw, w.weights);
  return dag;
}

}  // namespace

PerfDag build_local_dag(const RobustnessVector& rho) {
  if (rho.values.empty()) throw GraphError("robustness vector is empty");
  if (rho.values.size() != rho.spec_ids.size()) throw GraphError("robustness vector ids and values differ in length");
  for (double v : rho.values) {
    if (!std::isfinite(v)) throw GraphError("robustness values must be finite; normalize before building a DAG");
  }
  return dag_from_values(rho.values, rho.spec_ids);
}

PerfDag build_global_dag(std::span<const RobustnessVector> rhos) {
  if (rhos.empty()) throw GraphError("cannot aggregate an empty set of robustness vectors");
  const auto& ids = rhos.front().spec_ids;
  std::vector<double> mean(ids.size(), 0.0);
  for (const auto& r : rhos) {
    if (r.spec_ids != ids) throw GraphError("robustness vectors disagree on specification ids");
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += r.values[i];
  }
  for (double& m : mean) m /= static_cast<double>(rhos.size());
  RobustnessVector agg{std::move(mean), ids};
  return build_local_dag(agg);
}

std::vector<std::size_t> ancestor_counts(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::vector<std::size_t>> parents(n);
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (const auto& e : edges) {
    parents[e.dst].push_back(e.src);
    children[e.src].push_back(e.dst);
    ++indeg[e.dst];
  }
  // Kahn order doubles as cycle detection.
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (indeg[v] == 0) order.push_back(v);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t c : children[order[k]]) {
      if (--indeg[c] == 0) order.push_back(c);
    }
  }
  if (order.size() != n) throw GraphError("performance graph contains a cycle");

  std::vector<std::vector<bool>> anc(n, std::vector<bool>(n, false));
  for (std::size_t v : order) {
    for (std::size_t p : parents[v]) {
      anc[v][p] = true;
      for (std::size_t a = 0; a < n; ++a) {
        if (anc[p][a]) anc[v][a] = true;
      }
    }
  }
  std::vector<std::size_t> counts(n);
  for (std::size_t v = 0; v < n; ++v) counts[v] = static_cast<std::size_t>(std::count(anc[v].begin(), anc[v].end(), true));
  return counts;
}

std::vector<double> softmax(std::span<const double> xs) {
  std::vector<double> out(xs.size());
  if (xs.empty()) return out;
  const double hi = *std::max_element(xs.begin(), xs.end());
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i] = std::exp(xs[i] - hi);
    total += out[i];
  }
  for (double& o : out) o /= total;
  return out;
}

WeightMap node_weights(const PerfDag& dag, std::size_t n) {
  if (n != dag.size()) throw GraphError("spec count does not match DAG size");
  const auto counts = ancestor_counts(n, dag.edges());
  WeightMap w;
  w.raw.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.raw[i] = static_cast<double>(n) - static_cast<double>(counts[i]);
    w.spec_ids.push_back(dag.nodes()[i].spec);
  }
  w.weights = softmax(w.raw);
  return w;
}

double cumulative_fitness(std::span<const double> rho, std::span<const double> weights) {
  if (rho.size() != weights.size()) {
    throw GraphError("dimension mismatch: " + std::to_string(rho.size()) + " robustness values, " +
                     std::to_string(weights.size()) + " weights");
  }
  return kernels::dot(rho, weights);
}

double cumulative_fitness(const RobustnessVector& rho, const WeightMap& weights) {
  return cumulative_fitness(std::span<const double>(rho.values), std::span<const double>(weights.weights));
}

double node_sum(const PerfDag& dag) {
  double s = 0.0;
  for (const auto& n : dag.nodes()) s += n.value;
  return s;
}

double edge_sum(const PerfDag& dag) {
  double s = 0.0;
  for (const auto& e : dag.edges()) s += e.weight;
  return s;
}

void validate_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw GraphError("lambda must lie in [0, 1)");
}

PgaRecord pga(const PerfDag& dag, double lambda) {
  validate_lambda(lambda);
  PgaRecord r;
  r.node_sum = node_sum(dag);
  r.edge_sum = edge_sum(dag);
  r.lambda = lambda;
  r.pga = r.node_sum - lambda * r.edge_sum;
  return r;
}

PgaRecord pga_of(const RobustnessVector& rho, double lambda) { return pga(build_local_dag(rho), lambda); }

std::string to_dot(const PerfDag& dag, std::string_view name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const auto& n = dag.nodes()[i];
    os << "  n" << i << " [label=\"" << n.spec << "\\nvalue=" << n.value << "\\nweight=" << n.weight << "\"];\n";
  }
  for (const auto& e : dag.edges()) os << "  n" << e.src << " -> n" << e.dst << " [label=\"" << e.weight << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace alstl::graph
