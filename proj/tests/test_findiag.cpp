#include <doctest.h>

#include <random>

#include "builders.hpp"
#include "cspcat/findiag.hpp"
#include "oracles.hpp"

using namespace cspcat;

namespace {

// parallel pair f, g : a -> b; limits are equalizers, colimits coequalizers
FinCategoryPtr parallel_pair() {
    FinCategory c;
    c.objects = {"a", "b"};
    c.identities = {0, 1};
    c.morphisms = {{"id_a", 0, 0}, {"id_b", 1, 1}, {"f", 0, 1}, {"g", 0, 1}};
    return std::make_shared<FinCategory>(std::move(c));
}

FinDiagram random_parallel(std::mt19937_64& rng, std::uint32_t max_n) {
    FinDiagram d;
    d.shape = parallel_pair();
    std::uniform_int_distribution<std::uint32_t> size(1, max_n);
    std::uint32_t na = size(rng), nb = size(rng);
    d.sets = {numbered_set(na, "a"), numbered_set(nb, "b")};
    d.maps.resize(4);
    d.maps[0].resize(na);
    std::iota(d.maps[0].begin(), d.maps[0].end(), 0);
    d.maps[1].resize(nb);
    std::iota(d.maps[1].begin(), d.maps[1].end(), 0);
    std::uniform_int_distribution<std::uint32_t> pick(0, nb - 1);
    for (std::uint32_t i = 0; i < na; ++i) {
        d.maps[2].push_back(pick(rng));
        d.maps[3].push_back(pick(rng));
    }
    return d;
}

}

TEST_CASE("limit agrees with full enumeration") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        FinDiagram d = random_parallel(rng, 5);
        std::uint64_t want = oracle::limit_count(d);
        CHECK(limit(d, SolveMode::count).count == want);
        auto en = limit(d, SolveMode::enumerate);
        CHECK(en.count == want);
        CHECK(en.solutions.size() == want);
        CHECK(limit(d, SolveMode::decide).nonempty == (want > 0));
    }
}

TEST_CASE("limit of a graph diagram finds its loops") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 50; ++i) {
        Copresheaf x = builders::random_graph(rng, 4, 5, 1);
        CHECK(limit(x, SolveMode::count).count == oracle::limit_count(x));
    }
    CHECK(limit(builders::loop_graph(), SolveMode::count).count == 1);
    CHECK_FALSE(limit(builders::clique(3), SolveMode::decide).nonempty);
}

TEST_CASE("limit with an empty component is empty") {
    Copresheaf x = multidigraph(0, {});
    auto r = limit(x, SolveMode::count);
    CHECK_FALSE(r.nonempty);
    CHECK(r.count == 0);
}

TEST_CASE("enumerated solutions are lexicographic and valid") {
    std::mt19937_64 rng(13);
    FinDiagram d = random_parallel(rng, 4);
    auto en = limit(d, SolveMode::enumerate);
    for (std::size_t i = 1; i < en.solutions.size(); ++i)
        CHECK(en.solutions[i - 1] < en.solutions[i]);
    for (const auto& sol : en.solutions) {
        CHECK(d.maps[2][sol[0]] == sol[1]);
        CHECK(d.maps[3][sol[0]] == sol[1]);
    }
}

TEST_CASE("coequalizer of a parallel pair") {
    FinDiagram d;
    d.shape = parallel_pair();
    d.sets = {numbered_set(2, "a"), numbered_set(3, "b")};
    d.maps = {{0, 1}, {0, 1, 2}, {0, 1}, {1, 2}};
    QuotientSet q = colimit(d);
    // classes: {a0, b0, b1, a1, b2} collapses to {a0,b0,b1,a1,b2}? chase:
    // f(a0)=b0 ~ a0, g(a0)=b1 ~ a0, f(a1)=b1, so everything but nothing
    // remains separate: single big class {a0,a1,b0,b1,b2}
    CHECK(q.carrier->size() == 1);
    CHECK((*q.carrier)[0] == "(a,a0)");
    CHECK(q.injections[0][0] == 0);
    CHECK(q.injections[1][2] == 0);
}

TEST_CASE("colimit classes are consistent and named by least members") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
        FinDiagram d = random_parallel(rng, 5);
        QuotientSet q = colimit(d);
        const auto& c = *d.shape;
        for (std::uint32_t m = 0; m < c.morphism_count(); ++m) {
            std::uint32_t s = c.morphisms[m].src, t = c.morphisms[m].tgt;
            for (std::uint32_t e = 0; e < d.sets[s]->size(); ++e)
                CHECK(q.injections[s][e] == q.injections[t][d.maps[m][e]]);
        }
        // representatives appear in scan order
        for (std::size_t k = 1; k < q.representatives.size(); ++k)
            CHECK(q.representatives[k - 1] < q.representatives[k]);
        for (std::size_t k = 0; k < q.representatives.size(); ++k) {
            auto [o, e] = q.representatives[k];
            CHECK(q.injections[o][e] == k);
            CHECK((*q.carrier)[k] ==
                  "(" + c.objects[o] + "," + (*d.sets[o])[e] + ")");
        }
    }
}

TEST_CASE("colimit of a discrete diagram is the disjoint sum") {
    Copresheaf x = multidigraph(3, {});
    QuotientSet q = colimit(x);
    CHECK(q.carrier->size() == 3);
    CHECK((*q.carrier)[1] == "(V,1)");
}

TEST_CASE("diagram validation catches ragged maps") {
    Copresheaf x = builders::clique(2);
    x.maps[x.shape->morphism_index("s")][0] = 7;
    CHECK_FALSE(validate_diagram(x).ok());
}
