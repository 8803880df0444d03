#include <set>

#include "doctest.h"
#include "dynres/weyl.hpp"

using namespace dynres;

TEST_CASE("simple reflections on weights") {
    auto a2 = DynkinDiagram::parse("A2");
    Weight w{1, 0};
    Weight r = reflect(a2, w, 1);
    CHECK(r == Weight{-1, 1});
    CHECK(reflect(a2, r, 2) == Weight{0, -1});
    // Reflection fixes weights with zero pairing.
    CHECK(reflect(a2, Weight{0, 5}, 1) == Weight{0, 5});
    CHECK(reflect(a2, Weight{0, 0}, 2) == Weight{0, 0});
}

TEST_CASE("minuscule orbits close up") {
    // Orbit sizes equal the dimensions of the corresponding minuscule
    // representations: one extreme weight per basis line.
    auto a3 = DynkinDiagram::parse("A3");
    auto g = orbit_graph(a3, 1);
    CHECK(g.nodes.size() == 4);
    CHECK(g.layer_count() == 4);
    for (int l = 0; l < 4; ++l) CHECK(g.layer_nodes(l).size() == 1);

    auto d4 = DynkinDiagram::parse("D4");
    CHECK(orbit_graph(d4, 1).nodes.size() == 8);
    CHECK(orbit_graph(d4, 3).nodes.size() == 8);
    CHECK(orbit_graph(d4, 4).nodes.size() == 8);

    auto e6 = DynkinDiagram::parse("E6");
    CHECK(orbit_graph(e6, 1).nodes.size() == 27);

    auto e8 = DynkinDiagram::parse("E8");
    CHECK(orbit_graph(e8, 8).nodes.size() == 240);  // adjoint: the root system
}

TEST_CASE("orbit graph top for the E8 adjoint-type node") {
    auto e8 = DynkinDiagram::parse("E8");
    auto g = orbit_graph(e8, 2, 3);
    CHECK(g.layer_nodes(0).size() == 1);
    CHECK(g.layer_nodes(1).size() == 1);
    CHECK(g.layer_nodes(2).size() == 1);
    CHECK(g.layer_nodes(3).size() == 2);

    auto at = [&](int layer, int k) { return g.nodes[g.layer_nodes(layer)[k]]; };
    CHECK(at(1, 0).weight == Weight{0, -1, 0, 1, 0, 0, 0, 0});
    CHECK(at(1, 0).word.str() == "s2");
    CHECK(at(2, 0).weight == Weight{0, 0, 1, -1, 1, 0, 0, 0});
    CHECK(at(2, 0).word.str() == "s4s2");
    // Two layer-3 nodes, lexicographically ordered by weight.
    CHECK(at(3, 0).weight == Weight{0, 0, 1, 0, -1, 1, 0, 0});
    CHECK(at(3, 0).word.str() == "s5s4s2");
    CHECK(at(3, 1).weight == Weight{1, 0, -1, 0, 1, 0, 0, 0});
    CHECK(at(3, 1).word.str() == "s3s4s2");

    // Edge structure down to layer 3: a single chain, then a fork.
    CHECK(g.edges.size() == 4);

    // One layer further the two branches close a diamond: their s3/s5
    // children coincide, so layer 4 has three nodes reached by four edges.
    auto g4 = orbit_graph(e8, 2, 4);
    CHECK(g4.layer_nodes(4).size() == 3);
    int into4 = 0;
    for (const auto& e : g4.edges)
        if (g4.nodes[e.to].layer == 4) ++into4;
    CHECK(into4 == 4);
}

TEST_CASE("orbit graph top for the E8 spinor-type node") {
    auto e8 = DynkinDiagram::parse("E8");
    auto g = orbit_graph(e8, 1, 4);
    for (int l = 0; l <= 3; ++l) CHECK(g.layer_nodes(l).size() == 1);
    CHECK(g.layer_nodes(4).size() == 2);
    auto at = [&](int layer) { return g.nodes[g.layer_nodes(layer)[0]]; };
    CHECK(at(1).weight == Weight{-1, 0, 1, 0, 0, 0, 0, 0});
    CHECK(at(2).weight == Weight{0, 0, -1, 1, 0, 0, 0, 0});
    CHECK(at(3).weight == Weight{0, 1, 0, -1, 1, 0, 0, 0});
    CHECK(at(3).word.str() == "s4s3s1");
}

TEST_CASE("witness words follow the unique chain and stop at forks") {
    auto e8 = DynkinDiagram::parse("E8");
    auto w2 = witness_words(e8, 2, 3);
    REQUIRE(w2.size() == 3);
    CHECK(w2[0].str() == "e");
    CHECK(w2[1].str() == "s2");
    CHECK(w2[2].str() == "s4s2");
    CHECK_THROWS_AS(witness_words(e8, 2, 4), BranchError);

    auto w1 = witness_words(e8, 1, 4);
    REQUIRE(w1.size() == 4);
    CHECK(w1[3].str() == "s4s3s1");
    CHECK_THROWS_AS(witness_words(e8, 1, 5), BranchError);

    auto d6 = DynkinDiagram::parse("D6");
    auto wd = witness_words(d6, 6, 3);
    REQUIRE(wd.size() == 3);
    CHECK(wd[1].str() == "s6");
    CHECK(wd[2].str() == "s4s6");
    CHECK_THROWS_AS(witness_words(d6, 6, 4), BranchError);
}

TEST_CASE("orbit nodes are distinct weights") {
    auto e6 = DynkinDiagram::parse("E6");
    auto g = orbit_graph(e6, 2);
    std::set<Weight> seen;
    for (const auto& n : g.nodes) seen.insert(n.weight);
    CHECK(seen.size() == g.nodes.size());
    CHECK(g.nodes.size() == 72);  // the E6 root system
}
