#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cspcat/minion.hpp"
#include "cspcat/reduce.hpp"
#include "cspcat/structures.hpp"

// Line-oriented text formats.  `#` starts a comment; names must not contain
// whitespace.  Parsers throw ParseError with a line number.
namespace cspcat {

// `object v`, `arrow f : src -> tgt`, `compose g . f = h`,
// `relation word = word`.  A file with relation lines is a presentation and
// is closed under `cap`; otherwise identities are implicit (id_<object>) and
// the compose lines must make composition total.
FinCategoryPtr parse_category(const std::string& text, std::size_t cap = 4096);
std::string serialize_category(const FinCategory& c);

// Maps a `base` reference (a builtin name or a path) to its category.
using CategoryResolver = std::function<FinCategoryPtr(const std::string&)>;
CategoryResolver builtin_resolver();

// `base <ref>`, `set obj = {e1, e2}`, `map f : e -> e'`; identity maps are
// implicit.
Copresheaf parse_copresheaf(const std::string& text, const CategoryResolver& resolve);
std::string serialize_copresheaf(const Copresheaf& x, const std::string& base_ref);

// `source <ref>`, `target <ref>`, `object j -> s`, `arrow u -> f`; identity
// arrows map to identities when omitted.
CatFunctor parse_functor(const std::string& text, const CategoryResolver& resolve);
std::string serialize_functor(const CatFunctor& d, const std::string& source_ref,
                              const std::string& target_ref);

// `symbol f/6`, `identity f(x,y,z,x,y,z) = t(x,y,z)`; the right side lists
// distinct variables, the left side infers the minor map from their names.
MinorCondition parse_condition(const std::string& text);
std::string serialize_condition(const MinorCondition& c);

// `domain {a, b}`, `rel E/2 = {(a,b), (b,a)}`.
RelationalStructure parse_structure(const std::string& text);
std::string serialize_structure(const RelationalStructure& a);

// `symbol E/2` lines, an optional `free x y` line, then the body
// `exists u v . E(x,u) & E(u,v) & x = y`.  Without a free line the free
// variables are the unquantified ones in order of first occurrence.
struct ParsedFormula {
    RelationalSignature signature;
    PPFormula formula;
};
ParsedFormula parse_pp_formula(const std::string& text);
std::string serialize_pp_formula(const PPFormula& f, const RelationalSignature& sig);

// A sentence over functional atoms, resolved against a base category:
// `exists x y e . s(e) = x & t(e) = y`.
PPFormula parse_pp_sentence(const std::string& text, const FinCategory& base);
std::string serialize_pp_sentence(const PPFormula& f, const FinCategory& base);

// `dimension n`, `source E/2` and `target E/2` lines, `domain (x) : body`,
// `relation E (x,y) : body`.
PPInterpretation parse_interpretation(const std::string& text);
std::string serialize_interpretation(const PPInterpretation& phi);

// A gadget functor is a manifest plus referenced files: `shape <file>`,
// `base <file>`, `gadget obj = <file>`, `arrows <file>`; the arrows file
// holds `arrow f` headers over `component obj : e -> e'` lines.
using FileLoader = std::function<std::string(const std::string&)>;
GadgetFunctor parse_gadget(const std::string& manifest, const FileLoader& load);
std::vector<std::pair<std::string, std::string>> serialize_gadget(const GadgetFunctor& g);

}
