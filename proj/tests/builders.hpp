#pragma once

// Small graphs, gadgets and random generators shared across tests.

#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "cspcat/kan.hpp"
#include "cspcat/reduce.hpp"
#include "cspcat/structures.hpp"

namespace builders {

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

inline cspcat::Copresheaf clique(std::uint32_t n) {
    EdgeList e;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
            if (a != b)
                e.push_back({a, b});
    return cspcat::multidigraph(n, e);
}

inline cspcat::Copresheaf directed_cycle(std::uint32_t n) {
    EdgeList e;
    for (std::uint32_t a = 0; a < n; ++a)
        e.push_back({a, (a + 1) % n});
    return cspcat::multidigraph(n, e);
}

// Undirected cycle/path presented over the digraph base with both directions.
inline cspcat::Copresheaf sym_cycle(std::uint32_t n) {
    EdgeList e;
    for (std::uint32_t a = 0; a < n; ++a) {
        e.push_back({a, (a + 1) % n});
        e.push_back({(a + 1) % n, a});
    }
    return cspcat::multidigraph(n, e);
}

inline cspcat::Copresheaf sym_path(std::uint32_t vertices) {
    EdgeList e;
    for (std::uint32_t a = 0; a + 1 < vertices; ++a) {
        e.push_back({a, a + 1});
        e.push_back({a + 1, a});
    }
    return cspcat::multidigraph(vertices, e);
}

inline cspcat::Copresheaf loop_graph() { return cspcat::multidigraph(1, {{0, 0}}); }

// The order on {0, 1}; its polymorphisms include min and max.
inline cspcat::Copresheaf le_graph() {
    return cspcat::multidigraph(2, {{0, 0}, {0, 1}, {1, 1}});
}

inline cspcat::Copresheaf random_graph(std::mt19937_64& rng, std::uint32_t max_v,
                                       std::uint32_t max_e, std::uint32_t min_v = 0,
                                       std::uint32_t min_e = 0) {
    std::uint32_t v = std::uniform_int_distribution<std::uint32_t>(min_v, max_v)(rng);
    std::uint32_t e = v == 0 ? 0 : std::uniform_int_distribution<std::uint32_t>(min_e, max_e)(rng);
    EdgeList edges;
    for (std::uint32_t i = 0; i < e; ++i) {
        std::uint32_t a = std::uniform_int_distribution<std::uint32_t>(0, v - 1)(rng);
        std::uint32_t b = std::uniform_int_distribution<std::uint32_t>(0, v - 1)(rng);
        edges.push_back({a, b});
    }
    return cspcat::multidigraph(v, edges);
}

// A graph over the symmetric base: each undirected edge {a, b} becomes a
// pair of elements swapped by r.
inline cspcat::Copresheaf sym_base_graph(std::uint32_t n, const EdgeList& undirected) {
    auto base = cspcat::symmetric_graph_category();
    const auto& c = *base;
    std::uint32_t ov = c.object_index("V"), oe = c.object_index("E");
    std::uint32_t ms = c.morphism_index("s"), mt = c.morphism_index("t");
    std::uint32_t mr = c.morphism_index("r");

    cspcat::Copresheaf x;
    x.shape = base;
    x.sets.assign(c.object_count(), nullptr);
    x.sets[ov] = cspcat::numbered_set(n);
    cspcat::NamedSet edges;
    for (std::size_t i = 0; i < undirected.size(); ++i) {
        edges.push_back("e" + std::to_string(i));
        edges.push_back("e" + std::to_string(i) + "r");
    }
    x.sets[oe] = cspcat::make_set(std::move(edges));

    x.maps.resize(c.morphism_count());
    x.maps[c.identities[ov]].resize(n);
    std::iota(x.maps[c.identities[ov]].begin(), x.maps[c.identities[ov]].end(), 0);
    x.maps[c.identities[oe]].resize(x.sets[oe]->size());
    std::iota(x.maps[c.identities[oe]].begin(), x.maps[c.identities[oe]].end(), 0);
    for (std::size_t i = 0; i < undirected.size(); ++i) {
        auto [a, b] = undirected[i];
        x.maps[ms].push_back(a);
        x.maps[ms].push_back(b);
        x.maps[mt].push_back(b);
        x.maps[mt].push_back(a);
        x.maps[mr].push_back(static_cast<std::uint32_t>(2 * i + 1));
        x.maps[mr].push_back(static_cast<std::uint32_t>(2 * i));
    }
    return x;
}

inline cspcat::Copresheaf random_sym_graph(std::mt19937_64& rng, std::uint32_t max_v,
                                           std::uint32_t max_e, std::uint32_t min_v = 0) {
    std::uint32_t v = std::uniform_int_distribution<std::uint32_t>(min_v, max_v)(rng);
    std::uint32_t e = v == 0 ? 0 : std::uniform_int_distribution<std::uint32_t>(0, max_e)(rng);
    EdgeList edges;
    for (std::uint32_t i = 0; i < e; ++i) {
        std::uint32_t a = std::uniform_int_distribution<std::uint32_t>(0, v - 1)(rng);
        std::uint32_t b = std::uniform_int_distribution<std::uint32_t>(0, v - 1)(rng);
        edges.push_back({a, b});
    }
    return sym_base_graph(v, edges);
}

// Replaces each directed edge by an undirected length-3 path: the gadget
// whose extension subdivides and symmetrizes a digraph.
inline cspcat::GadgetFunctor subdivision_gadget() {
    cspcat::GadgetFunctor g;
    g.shape = cspcat::digraph_category();
    g.base = cspcat::symmetric_graph_category();
    std::uint32_t sv = g.shape->object_index("V"), se = g.shape->object_index("E");
    g.gadgets.resize(2);
    g.gadgets[sv] = sym_base_graph(1, {});
    g.gadgets[se] = sym_base_graph(4, {{0, 1}, {1, 2}, {2, 3}});

    std::uint32_t bv = g.base->object_index("V"), be = g.base->object_index("E");
    g.arrows.resize(g.shape->morphism_count());
    auto identity_on = [&](const cspcat::Copresheaf& a) {
        cspcat::NatTransformation h;
        h.components.resize(a.sets.size());
        for (std::size_t o = 0; o < a.sets.size(); ++o) {
            h.components[o].resize(a.sets[o]->size());
            std::iota(h.components[o].begin(), h.components[o].end(), 0);
        }
        return h;
    };
    g.arrows[g.shape->identities[sv]] = identity_on(g.gadgets[sv]);
    g.arrows[g.shape->identities[se]] = identity_on(g.gadgets[se]);
    // arrow s: E -> V carries the end-point inclusion G(V) -> G(E)
    cspcat::NatTransformation at_s, at_t;
    at_s.components.resize(2);
    at_t.components.resize(2);
    at_s.components[bv] = {0};
    at_t.components[bv] = {3};
    at_s.components[be] = {};
    at_t.components[be] = {};
    g.arrows[g.shape->morphism_index("s")] = at_s;
    g.arrows[g.shape->morphism_index("t")] = at_t;
    return g;
}

// Loopless symmetric graph as a relational structure over one binary symbol.
inline cspcat::RelationalStructure graph_structure(std::uint32_t n, const EdgeList& undirected) {
    cspcat::RelationalStructure a;
    a.signature.names = {"E"};
    a.signature.arities = {2};
    for (std::uint32_t i = 0; i < n; ++i)
        a.domain.push_back("v" + std::to_string(i));
    std::vector<std::vector<std::uint32_t>> rel;
    for (auto [x, y] : undirected) {
        rel.push_back({x, y});
        rel.push_back({y, x});
    }
    std::sort(rel.begin(), rel.end());
    rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    a.relations.push_back(std::move(rel));
    return a;
}

inline cspcat::RelationalStructure cycle_structure(std::uint32_t n) {
    EdgeList e;
    for (std::uint32_t a = 0; a < n; ++a)
        e.push_back({a, (a + 1) % n});
    return graph_structure(n, e);
}

inline cspcat::RelationalStructure clique_structure(std::uint32_t n) {
    EdgeList e;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b)
            e.push_back({a, b});
    return graph_structure(n, e);
}

}  // namespace builders
