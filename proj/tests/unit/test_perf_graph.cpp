#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "alstl/perf_graph.hpp"

using namespace alstl;
using namespace alstl::graph;

namespace {

using EdgeSet = std::set<std::tuple<std::size_t, std::size_t, double>>;

EdgeSet edge_set(const PerfDag& dag) {
  EdgeSet out;
  for (const auto& e : dag.edges()) out.insert({e.src, e.dst, e.weight});
  return out;
}

double pairwise_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) s += std::abs(v[i] - v[j]);
  return s;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double delta) {
  std::uniform_int_distribution<int> grid(-8, 8);
  std::vector<double> v(n);
  // Quantized so ties are common.
  for (auto& x : v) x = delta * grid(rng) / 8.0;
  return v;
}

}  // namespace

TEST_SUITE("local dag") {
  TEST_CASE("[3,0,1]") {
    const auto dag = build_local_dag(make_robustness_vector({3, 0, 1}));
    CHECK(edge_set(dag) == EdgeSet{{0, 1, 3.0}, {0, 2, 2.0}, {2, 1, 1.0}});
  }

  TEST_CASE("[1,1,1] has no edges") {
    CHECK(build_local_dag(make_robustness_vector({1, 1, 1})).edges().empty());
  }

  TEST_CASE("[-1,2,-1]") {
    const auto dag = build_local_dag(make_robustness_vector({-1, 2, -1}));
    CHECK(edge_set(dag) == EdgeSet{{1, 0, 3.0}, {1, 2, 3.0}});
  }

  TEST_CASE("values within the tie tolerance get no edge") {
    const auto dag = build_local_dag(make_robustness_vector({1.0, 1.0 + 1e-12}));
    CHECK(dag.edges().empty());
  }

  TEST_CASE("nodes carry the spec ids") {
    RobustnessVector rho{{0.5, -0.5}, {"reach", "safe"}};
    const auto dag = build_local_dag(rho);
    CHECK(dag.nodes()[0].spec == "reach");
    CHECK(dag.nodes()[1].spec == "safe");
    CHECK(dag.values() == std::vector<double>{0.5, -0.5});
  }
}

TEST_SUITE("node weights") {
  TEST_CASE("no edges, n = 3") {
    const auto w = node_weights(build_local_dag(make_robustness_vector({1, 1, 1})), 3);
    CHECK(w.raw == std::vector<double>{3, 3, 3});
    for (double x : w.weights) CHECK(x == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("a->b, a->c") {
    PerfDag dag({{"a"}, {"b"}, {"c"}}, {{0, 1, 1.0}, {0, 2, 1.0}});
    const auto w = node_weights(dag, 3);
    CHECK(w.raw == std::vector<double>{3, 2, 2});
    const double z = std::exp(3.0) + 2.0 * std::exp(2.0);
    CHECK(w.weights[0] == doctest::Approx(std::exp(3.0) / z).epsilon(1e-14));
    CHECK(w.weights[1] == doctest::Approx(std::exp(2.0) / z).epsilon(1e-14));
    CHECK(w.weights[2] == doctest::Approx(std::exp(2.0) / z).epsilon(1e-14));
  }

  TEST_CASE("chain with transitive edge") {
    PerfDag dag({{"a"}, {"b"}, {"c"}}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 2.0}});
    CHECK(node_weights(dag, 3).raw == std::vector<double>{3, 2, 1});
  }

  TEST_CASE("chain without the transitive edge counts indirect ancestors") {
    const std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}};
    CHECK(ancestor_counts(3, edges) == std::vector<std::size_t>{0, 1, 2});
  }

  TEST_CASE("cycles are rejected") {
    const std::vector<Edge> edges{{0, 1, 1.0}, {1, 0, 1.0}};
    CHECK_THROWS_AS(ancestor_counts(2, edges), GraphError);
  }
}

TEST_SUITE("global dag") {
  TEST_CASE("single trajectory equals its local dag") {
    const auto rho = make_robustness_vector({0.3, -0.2, 0.9});
    const std::vector<RobustnessVector> one{rho};
    const auto g = build_global_dag(one);
    const auto l = build_local_dag(rho);
    CHECK(g.values() == l.values());
    CHECK(g.edges() == l.edges());
    CHECK(g.weights() == l.weights());
  }

  TEST_CASE("symmetric pair") {
    const std::vector<RobustnessVector> rhos{make_robustness_vector({1, 0}), make_robustness_vector({0, 1})};
    const auto g = build_global_dag(rhos);
    CHECK(g.edges().empty());
    CHECK(g.weights()[0] == doctest::Approx(0.5));
    CHECK(g.weights()[1] == doctest::Approx(0.5));
  }

  TEST_CASE("mean of [3,0,1] and [2,1,1]") {
    const std::vector<RobustnessVector> rhos{make_robustness_vector({3, 0, 1}), make_robustness_vector({2, 1, 1})};
    const auto g = build_global_dag(rhos);
    CHECK(g.values() == std::vector<double>{2.5, 0.5, 1.0});
    CHECK(edge_set(g) == EdgeSet{{0, 1, 2.0}, {0, 2, 1.5}, {2, 1, 0.5}});
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(build_global_dag(std::vector<RobustnessVector>{}), GraphError);
    const std::vector<RobustnessVector> mixed{make_robustness_vector({1, 0}), make_robustness_vector({1, 0, 2})};
    CHECK_THROWS_AS(build_global_dag(mixed), GraphError);
  }
}

TEST_SUITE("fitness and sums") {
  TEST_CASE("cumulative fitness") {
    const std::vector<double> third(3, 1.0 / 3.0);
    CHECK(cumulative_fitness(std::vector<double>{1, 1, 1}, third) == doctest::Approx(1.0));
    CHECK(cumulative_fitness(std::vector<double>{2, 1, 1}, std::vector<double>{0.5, 0.25, 0.25}) == 1.5);
    CHECK(cumulative_fitness(std::vector<double>{0, 0, 0}, std::vector<double>{0.2, 0.5, 0.3}) == 0.0);
    CHECK_THROWS_AS(cumulative_fitness(std::vector<double>{1, 1}, third), GraphError);
  }

  TEST_CASE("node and edge sums") {
    const auto check = [](std::vector<double> v, double ns, double es) {
      const auto dag = build_local_dag(make_robustness_vector(std::move(v)));
      CHECK(node_sum(dag) == ns);
      CHECK(edge_sum(dag) == es);
    };
    check({3, 0, 1}, 4, 6);
    check({2, 1, 1}, 4, 2);
    check({1, 1, 1}, 3, 0);
    check({-1, -1, -1}, -3, 0);
    check({-1, 2, -1}, 0, 6);
  }

  TEST_CASE("pga") {
    CHECK(pga_of(make_robustness_vector({1, 1, 1}), 0.9).pga == 3.0);
    CHECK(pga_of(make_robustness_vector({3, 0, 1}), 0.9).pga == doctest::Approx(-1.4).epsilon(1e-15));
    CHECK(pga_of(make_robustness_vector({-1, 2, -1}), 0.3).pga == doctest::Approx(-1.8).epsilon(1e-15));
    const auto rec = pga_of(make_robustness_vector({3, 0, 1}), 0.9);
    CHECK(rec.node_sum == 4);
    CHECK(rec.edge_sum == 6);
    CHECK(rec.lambda == 0.9);
  }

  TEST_CASE("lambda outside [0, 1) is rejected") {
    const auto dag = build_local_dag(make_robustness_vector({1, 0}));
    CHECK_THROWS_AS(pga(dag, 1.0), GraphError);
    CHECK_THROWS_AS(pga(dag, -0.1), GraphError);
    CHECK_NOTHROW(pga(dag, 0.0));
  }

  TEST_CASE("dot output") {
    const auto dot = to_dot(build_local_dag(make_robustness_vector({3, 0, 1})));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("->") != std::string::npos);
  }
}

TEST_SUITE("properties") {
  TEST_CASE("acyclic, bounded edge count, pairwise edge sum") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 3000; ++i) {
      const std::size_t n = 1 + i % 7;
      const auto v = random_values(rng, n, 1.0);
      const auto dag = build_local_dag(make_robustness_vector(v));
      CHECK_NOTHROW(ancestor_counts(n, dag.edges()));
      CHECK(dag.edges().size() <= n * (n - 1) / 2);
      CHECK(edge_sum(dag) == doctest::Approx(pairwise_abs(v)).epsilon(1e-12));
      for (const auto& e : dag.edges()) {
        CHECK(e.src != e.dst);
        CHECK(e.weight > 0);
        CHECK(e.weight == v[e.src] - v[e.dst]);
      }
      double total = 0.0;
      for (double w : dag.weights()) {
        CHECK(w > 0);
        total += w;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("node sum extrema force equal weights") {
    for (std::size_t n = 1; n <= 6; ++n) {
      for (double delta : {0.5, 1.0, 3.0}) {
        for (double sign : {-1.0, 1.0}) {
          const auto dag = build_local_dag(make_robustness_vector(std::vector<double>(n, sign * delta)));
          CHECK(node_sum(dag) == sign * delta * static_cast<double>(n));
          CHECK(edge_sum(dag) == 0.0);
          for (double w : dag.weights()) CHECK(w == doctest::Approx(1.0 / static_cast<double>(n)));
        }
      }
    }
    std::mt19937_64 rng(9);
    for (int i = 0; i < 500; ++i) {
      const auto v = random_values(rng, 4, 2.0);
      const double ns = node_sum(build_local_dag(make_robustness_vector(v)));
      CHECK(ns >= -8.0);
      CHECK(ns <= 8.0);
    }
  }

  TEST_CASE("permutation equivariance") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
      const std::size_t n = 2 + i % 5;
      const auto v = random_values(rng, n, 1.0);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<double> pv(n);
      for (std::size_t k = 0; k < n; ++k) pv[k] = v[perm[k]];
      const auto a = build_local_dag(make_robustness_vector(v));
      const auto b = build_local_dag(make_robustness_vector(pv));
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(b.nodes()[k].weight == doctest::Approx(a.nodes()[perm[k]].weight).epsilon(1e-14));
        CHECK(b.nodes()[k].raw_weight == a.nodes()[perm[k]].raw_weight);
      }
      CHECK(b.edges().size() == a.edges().size());
      CHECK(edge_sum(b) == doctest::Approx(edge_sum(a)));
    }
  }

  TEST_CASE("pga monotone in lambda") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> lam(0.0, 0.999);
    for (int i = 0; i < 1000; ++i) {
      const auto dag = build_local_dag(make_robustness_vector(random_values(rng, 3, 1.0)));
      double l1 = lam(rng), l2 = lam(rng);
      if (l1 > l2) std::swap(l1, l2);
      if (edge_sum(dag) > 0 && l1 < l2) {
        CHECK(pga(dag, l1).pga > pga(dag, l2).pga);
      } else if (edge_sum(dag) == 0) {
        CHECK(pga(dag, l1).pga == pga(dag, l2).pga);
      }
    }
  }

  TEST_CASE("fewer ancestors means strictly larger weight") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
      const std::size_t n = 2 + i % 5;
      const auto dag = build_local_dag(make_robustness_vector(random_values(rng, n, 1.0)));
      const auto anc = ancestor_counts(n, dag.edges());
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          if (anc[a] < anc[b]) {
            CHECK(dag.nodes()[a].weight > dag.nodes()[b].weight);
            CHECK(dag.nodes()[a].raw_weight > dag.nodes()[b].raw_weight);
          }
        }
      }
    }
  }
}
