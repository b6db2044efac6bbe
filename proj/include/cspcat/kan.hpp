#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "cspcat/copresheaf.hpp"
#include "cspcat/grothendieck.hpp"

namespace cspcat {

// Contravariant gadget assignment: one copresheaf over `base` per object of
// `shape`, and for every arrow f: s -> s' a transformation G(s') -> G(s).
struct GadgetFunctor {
    FinCategoryPtr shape;
    FinCategoryPtr base;
    std::vector<Copresheaf> gadgets;
    std::vector<NatTransformation> arrows;
};

// Checks naturality of every arrow, identities, and G(v.u) = G(u).G(v).
ValidationReport validate_gadget(const GadgetFunctor& g);

// The gadget of representables; its Yoneda extension is the identity.
GadgetFunctor yoneda_gadget(const FinCategoryPtr& base);

constexpr std::size_t default_power_cap = 1000000;

// A finite window of the minion hom(a^N, b): element lists per recorded
// arity set plus the minor action along every map between recorded arities.
struct MinionTable {
    std::vector<NamedSet> arities;
    std::vector<NamedSetPtr> elements;
    // Flattened transformations in enumeration order; empty for hand-built
    // tables that never came from a template pair.
    std::vector<std::vector<std::vector<std::uint32_t>>> flats;
    // Keyed by (from arity, to arity, encoded function table).
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>, std::vector<std::uint32_t>>
        actions;

    // First recorded arity of the given size; throws MissingArity.
    std::uint32_t find_arity(std::size_t size) const;
    // Minor map along pi: arities[from] -> arities[to]; throws MissingArity.
    const std::vector<std::uint32_t>& action(std::uint32_t from, std::uint32_t to,
                                             const std::vector<std::uint32_t>& pi) const;
};

// The right Kan extension of b along a evaluated at the given arity sets,
// with all action maps between them.  This is Pol(a, b) at those arities.
MinionTable ran_eval(const Copresheaf& a, const Copresheaf& b, const std::vector<NamedSet>& arities,
                     std::size_t cap = default_power_cap);

// "[v0,v1,...]" over the element names of n; the empty tuple is "[]".
std::string function_tuple_name(const NamedSet& n, const std::vector<std::uint32_t>& tuple);

// One component of a left Kan extension: the colimit over the opposite of
// d's shape of the function sets n^{d(j)}, with enough data to act on it.
struct LanValue {
    NamedSetPtr carrier;
    // (shape object, encoded function) representative per class.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> representatives;
    std::vector<std::vector<std::uint32_t>> injections;
};

LanValue lan_value(const FinDiagram& d, const NamedSet& n, std::size_t cap = default_power_cap);

// Lan_a x at n: the colimit over the elements of x of the sets n^{a(s)}.
NamedSet lan_eval(const Copresheaf& a, const Copresheaf& x, const NamedSet& n,
                  std::size_t cap = default_power_cap);

// Gadget replacement: the componentwise colimit over the elements of a of
// the gadget copresheaves, glued along g's transformations.
Copresheaf yoneda_extend(const GadgetFunctor& g, const Copresheaf& a);

// nerve(g, b)(s) = hom(g(s), b); arrows act by precomposition.
Copresheaf nerve(const GadgetFunctor& g, const Copresheaf& b);

struct AdjunctionCheck {
    bool equal = false;
    std::uint64_t left = 0;
    std::uint64_t right = 0;
};

// |hom(yoneda_extend(g, a), c)| versus |hom(a, nerve(g, c))|.
AdjunctionCheck verify_adjunction(const GadgetFunctor& g, const Copresheaf& a, const Copresheaf& c);

}
