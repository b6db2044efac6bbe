#include <doctest.h>

#include <map>
#include <random>

#include "builders.hpp"
#include "cspcat/textio.hpp"
#include "oracles.hpp"

using namespace cspcat;

TEST_CASE("category files round trip") {
    auto c = digraph_category();
    auto back = parse_category(serialize_category(*c));
    CHECK(equal_categories(*c, *back));

    auto sym = parse_category(
        "object V\nobject E\n"
        "arrow s : E -> V\narrow t : E -> V\narrow r : E -> E\n"
        "relation r . r = id_E\nrelation s . r = t\nrelation t . r = s\n");
    CHECK(equal_categories(*sym, *symmetric_graph_category()));
    CHECK(equal_categories(*parse_category(serialize_category(*sym)), *sym));
}

TEST_CASE("category parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_category("object V\nfrob V\n"),
                         doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_AS(parse_category("object V\narrow f : V -> W\n"), ParseError);
    CHECK_THROWS_AS(parse_category("object V\narrow f : V -> V\n"), ParseError);  // no composite
    CHECK_THROWS_AS(
        parse_category("object V\narrow f : V -> V\ncompose f . f = f\n"
                       "compose f . f = id_V\n"),
        ParseError);  // duplicate
    // comments and blank lines are fine
    auto c = parse_category("# a point\nobject V  # the only object\n\n");
    CHECK(c->object_count() == 1);
}

TEST_CASE("explicit compose tables work") {
    auto c = parse_category(
        "object a\nobject b\nobject c\n"
        "arrow f : a -> b\narrow g : b -> c\narrow h : a -> c\n"
        "compose g . f = h\n");
    CHECK(validate_category(*c).ok());
    CHECK(c->compose(c->morphism_index("g"), c->morphism_index("f")) ==
          c->morphism_index("h"));
}

TEST_CASE("copresheaf files round trip") {
    std::mt19937_64 rng(71);
    auto resolve = builtin_resolver();
    for (int i = 0; i < 25; ++i) {
        Copresheaf x = builders::random_graph(rng, 4, 5);
        Copresheaf back = parse_copresheaf(serialize_copresheaf(x, "digraph"), resolve);
        CHECK(equal_copresheaves(x, back));
    }
    Copresheaf s = builders::sym_base_graph(3, {{0, 1}, {1, 2}});
    CHECK(equal_copresheaves(s, parse_copresheaf(serialize_copresheaf(s, "symmetric"), resolve)));
}

TEST_CASE("copresheaf parse rejects bad input") {
    auto resolve = builtin_resolver();
    CHECK_THROWS_AS(parse_copresheaf("set V = {a}\n", resolve), ParseError);  // no base
    CHECK_THROWS_AS(parse_copresheaf("base digraph\nset V = {a, a}\n", resolve), ParseError);
    CHECK_THROWS_AS(
        parse_copresheaf("base digraph\nset V = {a}\nset E = {e}\nmap s : e -> a\n", resolve),
        ParseError);  // t missing
    CHECK_THROWS_AS(parse_copresheaf("base nowhere\nset V = {}\n", resolve), ParseError);
    Copresheaf x = parse_copresheaf(
        "base digraph\nset V = {a, b}\nset E = {e}\nmap s : e -> a\nmap t : e -> b\n", resolve);
    CHECK(x.sets[x.shape->object_index("V")]->size() == 2);
    // nested names survive the comma splitter
    Copresheaf nested = parse_copresheaf("base digraph\nset V = {(a,(b,c)), [x,y]}\n", resolve);
    CHECK((*nested.sets[nested.shape->object_index("V")])[0] == "(a,(b,c))");
}

TEST_CASE("functor files round trip") {
    Copresheaf x = builders::clique(2);
    CatFunctor d = gr(x).projection;
    std::string src_text = serialize_category(*d.source);
    CategoryResolver resolve = [&](const std::string& ref) -> FinCategoryPtr {
        if (ref == "elements")
            return d.source;
        return builtin_resolver()(ref);
    };
    CatFunctor back = parse_functor(serialize_functor(d, "elements", "digraph"), resolve);
    CHECK(back.object_map == d.object_map);
    CHECK(back.morphism_map == d.morphism_map);
    CHECK_THROWS_AS(parse_functor("source digraph\ntarget digraph\n", resolve), ParseError);
}

TEST_CASE("condition files round trip") {
    MinorCondition sig = siggers_condition();
    MinorCondition back = parse_condition(serialize_condition(sig));
    CHECK(back.symbols == sig.symbols);
    CHECK(back.arities == sig.arities);
    REQUIRE(back.identities.size() == sig.identities.size());
    for (std::size_t i = 0; i < back.identities.size(); ++i) {
        CHECK(back.identities[i].left == sig.identities[i].left);
        CHECK(back.identities[i].right == sig.identities[i].right);
        CHECK(back.identities[i].pi == sig.identities[i].pi);
    }

    MinorCondition sym = parse_condition("symbol f/2\nidentity f(y,x) = f(x,y)\n");
    CHECK(sym.identities[0].pi == std::vector<std::uint32_t>{1, 0});
    CHECK_THROWS_AS(parse_condition("symbol f/2\nidentity f(x,x) = f(x,x)\n"), ParseError);
    CHECK_THROWS_AS(parse_condition("symbol f/2\nidentity f(x) = f(x,y)\n"), ParseError);
}

TEST_CASE("structure files round trip") {
    RelationalStructure a = builders::cycle_structure(4);
    RelationalStructure back = parse_structure(serialize_structure(a));
    CHECK(back.domain == a.domain);
    CHECK(back.relations == a.relations);
    CHECK(back.signature.names == a.signature.names);
    CHECK_THROWS_AS(parse_structure("rel E/2 = {(a,b)}\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("domain {a}\nrel E/2 = {(a,a,a)}\n"), ParseError);
}

TEST_CASE("pp formula files") {
    ParsedFormula f = parse_pp_formula(
        "symbol E/2\nfree x y\nexists u v . E(x,u) & E(u,v) & E(v,y)\n");
    CHECK(f.formula.free_vars == std::vector<std::string>{"x", "y"});
    CHECK(f.formula.bound_vars == std::vector<std::string>{"u", "v"});
    CHECK(f.formula.atoms.size() == 3);
    CHECK(f.formula.atoms[0].args == std::vector<std::uint32_t>{0, 2});

    // free variables are inferred in first-occurrence order when unlisted
    ParsedFormula g = parse_pp_formula("symbol E/2\nE(b,a) & a = c\n");
    CHECK(g.formula.free_vars == std::vector<std::string>{"b", "a", "c"});
    CHECK(g.formula.atoms[1].kind == PPAtom::equality);

    ParsedFormula h = parse_pp_formula(serialize_pp_formula(f.formula, f.signature));
    CHECK(h.formula.free_vars == f.formula.free_vars);
    CHECK(h.formula.atoms.size() == f.formula.atoms.size());

    CHECK_THROWS_AS(parse_pp_formula("symbol E/2\nE(x,y,z)\n"), ParseError);
    CHECK_THROWS_AS(parse_pp_formula("symbol E/2\nfree x\nE(x,y)\n"), ParseError);
}

TEST_CASE("pp sentence files") {
    auto base = digraph_category();
    PPFormula phi = parse_pp_sentence("exists x y e . s(e) = x & t(e) = y\n", *base);
    CHECK(phi.free_vars.empty());
    CHECK(phi.bound_vars.size() == 3);
    CHECK(phi.atoms.size() == 2);
    CHECK(phi.atoms[0].kind == PPAtom::functional);

    PPFormula again = parse_pp_sentence(serialize_pp_sentence(phi, *base), *base);
    CHECK(again.bound_vars == phi.bound_vars);

    CHECK_THROWS_AS(parse_pp_sentence("exists e . w(e) = e\n", *base), UnknownMorphism);
    CHECK_THROWS_AS(parse_pp_sentence("exists x . E(x,x)\n", *base), ParseError);
    CHECK_THROWS_AS(parse_pp_sentence("s(e) = x\n", *base), ParseError);  // unquantified
}

TEST_CASE("interpretation files round trip") {
    std::string text =
        "dimension 1\n"
        "source E/2\n"
        "target E/2\n"
        "domain (x) : x = x\n"
        "relation E (x,y) : exists u v . E(x,u) & E(u,v) & E(v,y)\n";
    PPInterpretation phi = parse_interpretation(text);
    CHECK(phi.dimension == 1);
    CHECK(phi.relation_formulas[0].bound_vars.size() == 2);
    PPInterpretation back = parse_interpretation(serialize_interpretation(phi));
    CHECK(back.relation_formulas[0].atoms.size() == 3);
    CHECK(back.domain_formula.free_vars == phi.domain_formula.free_vars);

    CHECK_THROWS_AS(parse_interpretation("dimension 1\nsource E/2\ntarget E/2\n"
                                         "domain (x) : x = x\n"),
                    ParseError);  // missing relation formula
    CHECK_THROWS_AS(parse_interpretation("source E/2\ntarget E/2\n"
                                         "domain (x) : x = x\nrelation E (x,y) : E(x,y)\n"),
                    ParseError);  // missing dimension
}

TEST_CASE("gadget directories round trip") {
    GadgetFunctor g = builders::subdivision_gadget();
    auto files = serialize_gadget(g);
    std::map<std::string, std::string> dir(files.begin(), files.end());
    FileLoader load = [&](const std::string& name) {
        auto it = dir.find(name);
        REQUIRE(it != dir.end());
        return it->second;
    };
    GadgetFunctor back = parse_gadget(dir.at("gadget.txt"), load);
    CHECK(validate_gadget(back).ok());
    CHECK(equal_categories(*back.shape, *g.shape));
    CHECK(equal_categories(*back.base, *g.base));
    REQUIRE(back.gadgets.size() == g.gadgets.size());
    for (std::size_t o = 0; o < g.gadgets.size(); ++o)
        CHECK(equal_copresheaves(back.gadgets[o], g.gadgets[o]));
    for (std::size_t f = 0; f < g.arrows.size(); ++f)
        CHECK(back.arrows[f].components == g.arrows[f].components);

    // a missing arrow block is refused
    dir["arrows.txt"] = "arrow s\ncomponent V : 0 -> 0\n";
    CHECK_THROWS_AS(parse_gadget(dir.at("gadget.txt"), load), ParseError);
}
