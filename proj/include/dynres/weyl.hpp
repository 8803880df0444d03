#pragma once

// Weyl group action on weights, orbits of fundamental weights, and the top
// of the Bruhat graph of W/W_P (minimal coset representatives).

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "dynres/errors.hpp"
#include "dynres/rootdata.hpp"

namespace dynres {

/// Reduced word for a minimal coset representative. Letters are Bourbaki
/// indices; the rightmost letter acts first, so the word [4,2] is s4*s2.
struct WeylWord {
    std::vector<int> letters;

    std::string str() const {
        if (letters.empty()) return "e";
        std::string s;
        for (int l : letters) s += "s" + std::to_string(l);
        return s;
    }
};

/// Simple reflection s_i acting on a weight in omega-coordinates:
/// w - w[i] * (i-th column of the Cartan matrix). i is a Bourbaki index.
inline Weight reflect(const DynkinDiagram& d, const Weight& w, int i) {
    int pos = d.position(i);
    Weight r = w;
    int wi = w[pos];
    if (wi == 0) return r;
    r[pos] -= 2 * wi;
    for (int j : d.adj[pos]) r[j] += wi;
    return r;
}

struct OrbitNode {
    Weight weight;
    WeylWord word;  // minimal word: word applied to the seed gives weight
    int layer = 0;
};

struct OrbitEdge {
    int from = 0, to = 0;  // node indices
    int reflection = 0;    // Bourbaki index
};

/// Top of the Bruhat graph on W/W_P: orbit of a fundamental weight under
/// length-increasing simple reflections, deduplicated by weight.
struct CosetOrbitGraph {
    int seed_vertex = 0;  // Bourbaki index of the fundamental weight
    std::vector<OrbitNode> nodes;
    std::vector<OrbitEdge> edges;

    int layer_count() const { return nodes.empty() ? 0 : nodes.back().layer + 1; }
    std::vector<int> layer_nodes(int layer) const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
            if (nodes[i].layer == layer) out.push_back(i);
        return out;
    }
};

/// Breadth-first closure of omega_i under reflections that increase the
/// coset length, truncated at `depth` layers below the seed (-1: unbounded).
/// Node order: BFS layer, then lexicographic weight.
inline CosetOrbitGraph orbit_graph(const DynkinDiagram& d, int i, int depth = -1) {
    int pos = d.position(i);
    CosetOrbitGraph g;
    g.seed_vertex = i;
    Weight seed(d.rank, 0);
    seed[pos] = 1;
    g.nodes.push_back({seed, WeylWord{}, 0});
    std::map<Weight, int> index{{seed, 0}};

    std::vector<int> frontier{0};
    for (int layer = 0; !frontier.empty() && (depth < 0 || layer < depth); ++layer) {
        // Gather the next layer first (dedup by weight), then sort by weight
        // so node ids are deterministic.
        std::map<Weight, WeylWord> fresh;
        for (int u : frontier) {
            const Weight w = g.nodes[u].weight;
            for (int s = 1; s <= d.rank; ++s) {
                if (w[d.position(s)] <= 0) continue;  // only length-increasing steps
                Weight w2 = reflect(d, w, s);
                if (index.count(w2) || fresh.count(w2)) continue;
                WeylWord word;
                word.letters.push_back(s);
                for (int l : g.nodes[u].word.letters) word.letters.push_back(l);
                fresh[w2] = word;
            }
        }
        std::vector<int> next;
        for (const auto& [w2, word] : fresh) {
            index[w2] = static_cast<int>(g.nodes.size());
            g.nodes.push_back({w2, word, layer + 1});
            next.push_back(index[w2]);
        }
        // Edges from this layer into the next (now that targets have ids).
        for (int u : frontier) {
            const Weight w = g.nodes[u].weight;
            for (int s = 1; s <= d.rank; ++s) {
                if (w[d.position(s)] <= 0) continue;
                Weight w2 = reflect(d, w, s);
                auto it = index.find(w2);
                if (it != index.end() && g.nodes[it->second].layer == layer + 1)
                    g.edges.push_back({u, it->second, s});
            }
        }
        frontier = next;
    }
    return g;
}

/// The identity word plus the unique-chain words down the top of the orbit
/// graph, used as codimension witnesses: `codim` words of lengths
/// 0, 1, ..., codim-1. Reports an error if the graph branches too early.
inline std::vector<WeylWord> witness_words(const DynkinDiagram& d, int i, int codim) {
    if (codim < 1) throw ValidationError("codim must be >= 1");
    CosetOrbitGraph g = orbit_graph(d, i, codim - 1);
    std::vector<WeylWord> words;
    for (int layer = 0; layer < codim; ++layer) {
        auto layer_ids = g.layer_nodes(layer);
        if (layer_ids.empty())
            throw BranchError("orbit of omega_" + std::to_string(i) + " in " + d.name() +
                              " is exhausted at depth " + std::to_string(layer));
        if (layer_ids.size() > 1)
            throw BranchError("orbit graph of omega_" + std::to_string(i) + " in " + d.name() +
                              " branches at depth " + std::to_string(layer) + " before " +
                              std::to_string(codim) + " witness words were collected");
        words.push_back(g.nodes[layer_ids[0]].word);
    }
    return words;
}

}  // namespace dynres
