#include <doctest.h>

#include <random>

#include "builders.hpp"
#include "cspcat/grothendieck.hpp"
#include "oracles.hpp"

using namespace cspcat;

TEST_CASE("elements category of K3") {
    Copresheaf k3 = builders::clique(3);
    ElementsCategory el = gr(k3);
    CHECK(el.category->object_count() == 9);   // 3 vertices + 6 edges
    CHECK(el.category->morphism_count() == 21);  // 9 identities + 2 per edge
    CHECK(validate_category(*el.category).ok());
    CHECK(validate_functor(el.projection).ok());
    CHECK(el.category->objects[0] == "(V,0)");
    CHECK(el.category->objects[3] == "(E,e0)");
    CHECK(el.element_of[3].first == k3.shape->object_index("E"));
    CHECK(el.object_at(0, 2) == 2);
}

TEST_CASE("solving over the elements category counts homomorphisms") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 80; ++i) {
        Copresheaf x = builders::random_graph(rng, 4, 4);
        Copresheaf a = builders::random_graph(rng, 3, 5);
        FinDiagram cond = template_condition(a, x);
        CHECK(limit(cond, SolveMode::count).count == oracle::digraph_hom_count(x, a));
    }
}

TEST_CASE("gl recovers a copresheaf from its elements projection") {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 40; ++i) {
        Copresheaf x = builders::random_graph(rng, 4, 4);
        Copresheaf back = gl(gr(x).projection);
        CHECK(isomorphic(back, x));
    }
}

TEST_CASE("gl of a zig-zag instance is the two-edge path") {
    // two constraint objects sharing a middle variable
    auto base = digraph_category();
    FinCategory j;
    j.objects = {"u", "v", "w", "e", "f"};
    for (std::uint32_t o = 0; o < 5; ++o) {
        j.identities.push_back(o);
        j.morphisms.push_back({"id_" + j.objects[o], o, o});
    }
    j.morphisms.push_back({"es", 3, 0});
    j.morphisms.push_back({"et", 3, 1});
    j.morphisms.push_back({"fs", 4, 1});
    j.morphisms.push_back({"ft", 4, 2});
    REQUIRE(validate_category(j).ok());

    CatFunctor d;
    d.source = std::make_shared<FinCategory>(std::move(j));
    d.target = base;
    std::uint32_t v = base->object_index("V"), e = base->object_index("E");
    d.object_map = {v, v, v, e, e};
    d.morphism_map = {base->identities[v], base->identities[v], base->identities[v],
                      base->identities[e], base->identities[e],
                      base->morphism_index("s"), base->morphism_index("t"),
                      base->morphism_index("s"), base->morphism_index("t")};
    REQUIRE(validate_functor(d).ok());

    Copresheaf glued = gl(d);
    CHECK(isomorphic(glued, multidigraph(3, {{0, 1}, {1, 2}})));
}

TEST_CASE("maps out of gl(d) are solutions of d") {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 60; ++i) {
        Copresheaf x = builders::random_graph(rng, 3, 3);
        Copresheaf a = builders::random_graph(rng, 3, 4);
        CatFunctor d = gr(x).projection;
        std::uint64_t solutions = limit(compose_diagram(a, d), SolveMode::count).count;
        CHECK(hom(gl(d), a, SolveMode::count).count == solutions);
    }
}

TEST_CASE("element object names") {
    CHECK(element_object_name("V", "3") == "(V,3)");
    CHECK(element_object_name("E", "e1") == "(E,e1)");
}
