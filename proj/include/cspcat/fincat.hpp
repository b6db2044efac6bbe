#ifndef CSPCAT_FINCAT_HPP
#define CSPCAT_FINCAT_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace cspcat {

inline constexpr std::uint32_t npos32 = 0xffffffffu;

struct Morphism {
    std::string name;
    std::uint32_t src;
    std::uint32_t tgt;
};

// A finite category with a total, explicitly stored composition table.
// Objects and morphisms keep their declaration order; all other modules
// rely on those indices being stable.  Identity composites are resolved
// by a fast path, so `composites` only holds pairs of non-identities.
struct FinCategory {
    std::vector<std::string> objects;
    std::vector<Morphism> morphisms;
    std::vector<std::uint32_t> identities;  // object index -> morphism index
    std::unordered_map<std::uint64_t, std::uint32_t> composites;

    std::size_t object_count() const { return objects.size(); }
    std::size_t morphism_count() const { return morphisms.size(); }

    bool is_identity(std::uint32_t m) const {
        return identities[morphisms[m].src] == m && morphisms[m].src == morphisms[m].tgt;
    }

    static std::uint64_t pair_key(std::uint32_t g, std::uint32_t f) {
        return (static_cast<std::uint64_t>(g) << 32) | f;
    }

    // g . f, or npos32 when src(g) != tgt(f) or the table lacks the entry.
    std::uint32_t compose(std::uint32_t g, std::uint32_t f) const {
        if (morphisms[f].tgt != morphisms[g].src)
            return npos32;
        if (is_identity(f))
            return g;
        if (is_identity(g))
            return f;
        auto it = composites.find(pair_key(g, f));
        return it == composites.end() ? npos32 : it->second;
    }

    std::uint32_t object_index(const std::string& name) const {
        for (std::uint32_t i = 0; i < objects.size(); ++i)
            if (objects[i] == name)
                return i;
        return npos32;
    }

    std::uint32_t morphism_index(const std::string& name) const {
        for (std::uint32_t i = 0; i < morphisms.size(); ++i)
            if (morphisms[i].name == name)
                return i;
        return npos32;
    }

    // Morphisms s -> t in declaration order.
    std::vector<std::uint32_t> hom_set(std::uint32_t s, std::uint32_t t) const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t m = 0; m < morphisms.size(); ++m)
            if (morphisms[m].src == s && morphisms[m].tgt == t)
                out.push_back(m);
        return out;
    }
};

using FinCategoryPtr = std::shared_ptr<const FinCategory>;

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Functor between finite categories, stored as total index maps.
struct CatFunctor {
    FinCategoryPtr source;
    FinCategoryPtr target;
    std::vector<std::uint32_t> object_map;
    std::vector<std::uint32_t> morphism_map;
};

// A category presentation: generator arrows plus word equations.
// Words list generator indices outermost-first, so {s, r} reads "s after r";
// an empty word denotes the identity at `at` (needed for equations like r.r = id).
struct PresentationWord {
    std::vector<std::uint32_t> factors;
    std::uint32_t at;  // object carrying the identity when factors is empty
};

struct Presentation {
    std::vector<std::string> objects;
    std::vector<Morphism> generators;
    std::vector<std::pair<PresentationWord, PresentationWord>> relations;
};

ValidationReport validate_category(const FinCategory& c);
ValidationReport validate_functor(const CatFunctor& f);

// Identity laws, unit checks and associativity, as data rather than a throw.
bool same_category(const FinCategoryPtr& a, const FinCategoryPtr& b);
bool equal_categories(const FinCategory& a, const FinCategory& b);

FinCategory opposite(const FinCategory& c);

// Closes a presentation into a finite category by exhaustive word rewriting.
// Each class of parallel words is represented by its (length, lex)-least
// member; both the number of morphisms and the explored word length are
// capped at `cap`, and overruns raise CapExceeded.
FinCategory close_presentation(const Presentation& p, std::size_t cap);

// Built-in base categories.
FinCategoryPtr digraph_category();           // objects V, E; arrows s, t: E -> V
FinCategoryPtr symmetric_graph_category();   // digraph base plus r: E -> E, r.r = id, s.r = t, t.r = s

}

#endif
