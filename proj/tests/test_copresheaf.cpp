#include <doctest.h>

#include <random>

#include "builders.hpp"
#include "cspcat/copresheaf.hpp"
#include "oracles.hpp"

using namespace cspcat;

TEST_CASE("hom counts on fixed graphs") {
    auto k3 = builders::clique(3);
    CHECK(hom(k3, k3, SolveMode::count).count == 6);
    CHECK(hom(builders::sym_cycle(5), k3, SolveMode::count).count == 30);
    CHECK(hom(builders::sym_path(3), k3, SolveMode::count).count == 12);
    CHECK_FALSE(hom(k3, builders::clique(2), SolveMode::decide).nonempty);
    CHECK_FALSE(hom(builders::loop_graph(), k3, SolveMode::decide).nonempty);
}

TEST_CASE("hom agrees with the brute-force count") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 120; ++i) {
        Copresheaf x = builders::random_graph(rng, 4, 5);
        Copresheaf a = builders::random_graph(rng, 3, 6);
        std::uint64_t want = oracle::digraph_hom_count(x, a);
        CHECK(hom(x, a, SolveMode::count).count == want);
        CHECK(hom(x, a, SolveMode::decide).nonempty == (want > 0));
    }
}

TEST_CASE("hom enumeration returns exactly the natural transformations") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 30; ++i) {
        Copresheaf x = builders::random_graph(rng, 3, 3);
        Copresheaf a = builders::random_graph(rng, 3, 4);
        auto en = hom(x, a, SolveMode::enumerate);
        CHECK(en.transformations.size() == en.count);
        for (const auto& h : en.transformations)
            CHECK(check_naturality(x, a, h).ok());
        CHECK(en.count == oracle::hom_count(x, a));
    }
}

TEST_CASE("hom across bases is refused") {
    CHECK_THROWS_AS(hom(builders::clique(2), builders::sym_base_graph(2, {{0, 1}}),
                        SolveMode::decide),
                    BaseMismatch);
}

TEST_CASE("powers multiply componentwise") {
    auto k3 = builders::clique(3);
    NamedSet two = {"0", "1"};
    Copresheaf p = power(k3, two);
    std::uint32_t v = p.shape->object_index("V"), e = p.shape->object_index("E");
    CHECK(p.sets[v]->size() == 9);
    CHECK(p.sets[e]->size() == 36);
    CHECK((*p.sets[v])[0] == "(0,0)");
    CHECK(validate_diagram(p).ok());

    // the power by the empty set is terminal
    Copresheaf t = power(k3, {});
    CHECK(t.sets[v]->size() == 1);
    CHECK(t.sets[e]->size() == 1);
    CHECK(hom(builders::loop_graph(), t, SolveMode::count).count == 1);

    CHECK_THROWS_AS(power(k3, *numbered_set(9), 1000), SizeCap);
}

TEST_CASE("binary polymorphisms of K3 are the Latin squares") {
    auto k3 = builders::clique(3);
    Copresheaf p = power(k3, {"0", "1"});
    CHECK(hom(p, k3, SolveMode::count).count == 12);
}

TEST_CASE("representables") {
    auto base = digraph_category();
    Copresheaf yv = yoneda(base, base->object_index("V"));
    Copresheaf ye = yoneda(base, base->object_index("E"));
    CHECK(yv.sets[base->object_index("V")]->size() == 1);
    CHECK(yv.sets[base->object_index("E")]->size() == 0);
    CHECK(ye.sets[base->object_index("V")]->size() == 2);
    CHECK(ye.sets[base->object_index("E")]->size() == 1);

    // hom(yo(s), X) recovers X(s)
    std::mt19937_64 rng(23);
    for (int i = 0; i < 40; ++i) {
        Copresheaf x = builders::random_graph(rng, 4, 5);
        CHECK(hom(yv, x, SolveMode::count).count ==
              x.sets[base->object_index("V")]->size());
        CHECK(hom(ye, x, SolveMode::count).count ==
              x.sets[base->object_index("E")]->size());
    }
}

TEST_CASE("tuple codecs round trip") {
    std::vector<std::uint32_t> t;
    decode_tuple(11, 3, 3, t);
    CHECK(t == std::vector<std::uint32_t>{1, 0, 2});  // most significant first
    CHECK(encode_tuple(t, 3) == 11);
    CHECK(checked_pow(6, 6, 1u << 20) == 46656);
    CHECK(checked_pow(0, 0, 10) == 1);
    CHECK_THROWS_AS(checked_pow(10, 10, 1000), SizeCap);
}

TEST_CASE("isomorphism search") {
    std::mt19937_64 rng(24);
    // relabeling a graph keeps it isomorphic
    Copresheaf x = builders::sym_cycle(4);
    Copresheaf y = multidigraph(4, {{1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 0}, {0, 3}, {0, 1}, {1, 0}});
    CHECK(isomorphic(x, y));
    auto iso = find_isomorphism(x, y);
    REQUIRE(iso.has_value());
    CHECK(check_naturality(x, y, *iso).ok());

    CHECK_FALSE(isomorphic(builders::sym_cycle(4), builders::sym_path(4)));
    CHECK_FALSE(isomorphic(builders::clique(3), builders::directed_cycle(3)));
}

TEST_CASE("hom equivalence") {
    CHECK(hom_equivalent(builders::sym_cycle(6), builders::clique(2)));
    CHECK_FALSE(hom_equivalent(builders::sym_cycle(5), builders::clique(3)));
    CHECK(hom_equivalent(builders::clique(3), builders::clique(3)));
}

TEST_CASE("transformation plumbing") {
    auto k3 = builders::clique(3);
    auto en = hom(k3, k3, SolveMode::enumerate);
    REQUIRE(en.count == 6);
    const auto& h = en.transformations[0];
    auto flat = flatten_transformation(h);
    CHECK(flat.size() == 9);  // 3 vertices + 6 edges
    auto hh = compose_transformations(k3, h, h);
    CHECK(check_naturality(k3, k3, hh).ok());
}

TEST_CASE("equal_copresheaves is exact on names and maps") {
    Copresheaf a = builders::clique(3);
    Copresheaf b = builders::clique(3);
    CHECK(equal_copresheaves(a, b));
    Copresheaf c = multidigraph(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 2}});
    CHECK_FALSE(equal_copresheaves(a, c));
}
