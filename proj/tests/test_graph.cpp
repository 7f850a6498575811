#include "doctest.h"

#include "cdlab/graph.hpp"
#include "cdlab/oracle.hpp"
#include "cdlab/sem.hpp"

#include "oracles.hpp"

#include <random>

using namespace cdlab;

namespace {

Dag make_dag(int p, std::initializer_list<Edge> edges) {
  Dag d(p);
  for (const Edge& e : edges) d.add_edge(e.from, e.to);
  return d;
}

}  // namespace

TEST_CASE("Dag rejects self-loops, duplicates and cycles") {
  Dag d(3);
  d.add_edge(0, 1);
  d.add_edge(1, 2);
  CHECK_THROWS_AS(d.add_edge(1, 1), GraphError);
  CHECK_THROWS_AS(d.add_edge(1, 0), GraphError);
  CHECK_THROWS_AS(d.add_edge(2, 0), GraphError);
  CHECK(d.edge_count() == 2);
  CHECK(d.topological_order() == std::vector<int>{0, 1, 2});
}

TEST_CASE("skeleton") {
  CHECK(skeleton(Dag(4)).empty());
  const Dag collider = make_dag(3, {{0, 1}, {2, 1}});
  CHECK(skeleton(collider) == std::vector<Edge>{{0, 1}, {1, 2}});

  // DAG1 shape: 5 nodes, 3 edges.
  const Dag dag1 = table_fixture("DAG1").dag;
  CHECK(dag1.node_count() == 5);
  CHECK(skeleton(dag1).size() == 3);
  CHECK(skeleton(dag_to_cpdag(dag1)).size() == 3);
}

TEST_CASE("v_structures") {
  CHECK(v_structures(make_dag(3, {{0, 1}, {2, 1}})) == std::vector<VStructure>{{0, 1, 2}});
  CHECK(v_structures(make_dag(3, {{0, 1}, {1, 2}})).empty());
  CHECK(v_structures(make_dag(3, {{0, 1}, {0, 2}, {1, 2}})).empty());
  // Extra parent 4 of sink 3 collides with each clique member.
  CHECK(v_structures(dag3_fixture()) == std::vector<VStructure>{{0, 3, 4}, {1, 3, 4}, {2, 3, 4}});
}

TEST_CASE("dag_to_cpdag on small examples") {
  SUBCASE("chain is fully reversible") {
    const Pdag cp = dag_to_cpdag(make_dag(3, {{0, 1}, {1, 2}}));
    CHECK(cp.directed_edges().empty());
    CHECK(cp.undirected_edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  }
  SUBCASE("collider stays directed") {
    const Dag collider = make_dag(3, {{0, 1}, {2, 1}});
    CHECK(dag_to_cpdag(collider) == Pdag::from_dag(collider));
  }
  SUBCASE("DAG3 matches the enumerated equivalence class") {
    const Pdag cp = dag_to_cpdag(dag3_fixture());
    CHECK(cp == oracle::equivalence_class(dag3_fixture()).representative);
    // Frozen from the enumeration oracle: clique edges into the sink are compelled.
    CHECK(cp.undirected_edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(cp.directed_edges() == std::vector<Edge>{{0, 3}, {1, 3}, {2, 3}, {4, 3}});
  }
}

TEST_CASE("meek_closure rules") {
  SUBCASE("no new v-structure") {
    Pdag g(3);
    g.add_directed(0, 1);
    g.add_undirected(1, 2);
    const Pdag c = meek_closure(g);
    CHECK(c.has_directed(1, 2));
  }
  SUBCASE("acyclicity") {
    Pdag g(3);
    g.add_directed(0, 1);
    g.add_directed(1, 2);
    g.add_undirected(0, 2);
    CHECK(meek_closure(g).has_directed(0, 2));
  }
  SUBCASE("undirected triangle unchanged") {
    Pdag g(3);
    g.add_undirected(0, 1);
    g.add_undirected(1, 2);
    g.add_undirected(0, 2);
    CHECK(meek_closure(g) == g);
  }
  SUBCASE("rule 3") {
    Pdag g(4);
    g.add_undirected(0, 1);
    g.add_undirected(0, 2);
    g.add_undirected(0, 3);
    g.add_directed(2, 1);
    g.add_directed(3, 1);
    CHECK(meek_closure(g).has_directed(0, 1));
  }
  SUBCASE("directed cycle is reported") {
    Pdag g(3);
    g.add_directed(0, 1);
    g.add_directed(1, 2);
    g.add_directed(2, 0);
    CHECK_THROWS_AS(meek_closure(g), GraphError);
  }
  SUBCASE("orientation conflict is reported") {
    // 0 -> 1 forces 1 -> 2 (rule 1), which closes 1 -> 2 -> 3 -> 1.
    Pdag g(4);
    g.add_directed(0, 1);
    g.add_undirected(1, 2);
    g.add_directed(2, 3);
    g.add_directed(3, 1);
    CHECK_THROWS_AS(meek_closure(g), GraphError);
  }
}

TEST_CASE("meek_closure is idempotent, monotone and keeps adjacencies") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Pdag g = testing::random_pdag(5, rng);
    if (has_directed_cycle(g)) continue;
    Pdag c;
    try {
      c = meek_closure(g);
    } catch (const GraphError&) {
      continue;
    }
    ++checked;
    CHECK(meek_closure(c) == c);
    CHECK(skeleton(c) == skeleton(g));
    for (const Edge& e : g.directed_edges()) CHECK(c.has_directed(e.from, e.to));
  }
  CHECK(checked > 50);
}

TEST_CASE("CPDAG equality iff shared skeleton and v-structures, all DAGs up to 4 nodes") {
  for (int p = 1; p <= 4; ++p) {
    const auto dags = oracle::enumerate_dags(p);
    std::vector<Pdag> cps;
    for (const Dag& d : dags) cps.push_back(dag_to_cpdag(d));
    for (std::size_t i = 0; i < dags.size(); ++i) {
      CHECK(is_cpdag(cps[i]));
      CHECK(skeleton(cps[i]) == skeleton(dags[i]));
      for (std::size_t j = i + 1; j < dags.size(); ++j) {
        const bool same_class =
            skeleton(dags[i]) == skeleton(dags[j]) && v_structures(dags[i]) == v_structures(dags[j]);
        if ((cps[i] == cps[j]) != same_class) FAIL("mismatch at p=" << p);
      }
    }
  }
}

TEST_CASE("consistent_extension and is_cpdag") {
  Pdag triangle(3);
  triangle.add_undirected(0, 1);
  triangle.add_undirected(1, 2);
  triangle.add_undirected(0, 2);
  auto ext = consistent_extension(triangle);
  REQUIRE(ext);
  CHECK(ext->edge_count() == 3);
  CHECK(v_structures(*ext).empty());

  // Undirected 4-cycle has no extension without a v-structure.
  Pdag square(4);
  square.add_undirected(0, 1);
  square.add_undirected(1, 2);
  square.add_undirected(2, 3);
  square.add_undirected(3, 0);
  CHECK_FALSE(consistent_extension(square));
  CHECK_FALSE(is_cpdag(square));

  // A DAG that is not its own CPDAG.
  Pdag chain(3);
  chain.add_directed(0, 1);
  chain.add_directed(1, 2);
  CHECK_FALSE(is_cpdag(chain));

  Pdag pdc(3);
  pdc.add_directed(0, 1);
  pdc.add_undirected(1, 2);
  pdc.add_undirected(2, 0);
  CHECK(has_partially_directed_cycle(pdc));
}

TEST_CASE("graph text format round-trips bit-exactly") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    DagSpec spec{6, 0.5, std::nullopt, 0};
    Dag d = assign_weights(random_dag(spec, rng), rng);
    const std::string text = format_graph(d);
    const ParsedGraph parsed = parse_graph(text);
    REQUIRE(parsed.dag);
    CHECK(*parsed.dag == d);
    CHECK(format_graph(*parsed.dag) == text);

    const Pdag cp = dag_to_cpdag(d);
    const std::string cp_text = format_graph(cp);
    const ParsedGraph cp_parsed = parse_graph(cp_text);
    CHECK(cp_parsed.pdag == cp);
    CHECK(format_graph(cp_parsed.pdag) == cp_text);
  }
}

TEST_CASE("graph text format layout and errors") {
  Dag d(3);
  d.add_edge(2, 0, 0.25);
  d.add_edge(0, 1, 0.5);
  CHECK(format_graph(d) == "nodes=3\n0 -> 1 [w=0.5]\n2 -> 0 [w=0.25]\n");
  CHECK(format_graph(dag_to_cpdag(d)) == "nodes=3\n0 -- 1\n0 -- 2\n");

  CHECK_THROWS_AS(parse_graph(""), GraphError);
  CHECK_THROWS_AS(parse_graph("0 -> 1\n"), GraphError);
  CHECK_THROWS_AS(parse_graph("nodes=2\n0 -> 2\n"), GraphError);
  CHECK_THROWS_AS(parse_graph("nodes=2\n0 => 1\n"), GraphError);
  CHECK_THROWS_AS(parse_graph("nodes=2\n0 -> 1 [w=abc]\n"), GraphError);
  CHECK_THROWS_AS(parse_graph("nodes=2\n0 -> 1\n1 -> 0\n"), GraphError);
  CHECK_FALSE(parse_graph("nodes=2\n0 -> 1\n").dag);
}
