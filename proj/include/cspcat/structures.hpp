#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspcat/kan.hpp"

namespace cspcat {

struct RelationalSignature {
    std::vector<std::string> names;
    std::vector<std::uint32_t> arities;
};

ValidationReport validate_signature(const RelationalSignature& sig);

// Tuples are kept sorted and without duplicates.
struct RelationalStructure {
    RelationalSignature signature;
    NamedSet domain;
    std::vector<std::vector<std::vector<std::uint32_t>>> relations;
};

ValidationReport validate_structure(const RelationalStructure& a);

// One object V, one object per symbol, and projection arrows R.i : R -> V.
FinCategoryPtr signature_category(const RelationalSignature& sig);

// The signature encoded by a category of the above shape, with the
// projection morphisms per symbol in coordinate order.  Throws BaseShape.
struct SignatureShape {
    RelationalSignature signature;
    std::vector<std::vector<std::uint32_t>> projections;
};

SignatureShape recognize_signature(const FinCategory& c);

// The two translations between structures and copresheaves over the
// signature category; to_structure collapses parallel relation elements.
Copresheaf to_copresheaf(const RelationalStructure& a);
RelationalStructure to_structure(const Copresheaf& a);

// One-object encoding: the domain is the product of all component sets and
// each base morphism pi contributes a binary relation
// E_pi = {(a, b) : a(pi)(a_src) = b_tgt}.
RelationalStructure single_sorted(const Copresheaf& a, std::size_t cap = default_power_cap);

struct PPAtom {
    enum Kind { relation, equality, functional };
    Kind kind = relation;
    // relation: signature symbol; functional: base morphism f in f(x) = y.
    std::uint32_t symbol = 0;
    std::vector<std::uint32_t> args;  // indices into free vars then bound vars
};

// Prenex existential conjunction of atoms.
struct PPFormula {
    std::vector<std::string> free_vars;
    std::vector<std::string> bound_vars;
    std::vector<PPAtom> atoms;
};

// Chandra-Merlin: satisfying assignments of a quantifier-free conjunction
// biject with homomorphisms out of its canonical structure.  Equality atoms
// quotient the variables; var_class records variable -> domain class.
struct CanonicalResult {
    RelationalStructure structure;
    std::vector<std::uint32_t> var_class;
};

CanonicalResult canonical_structure_full(const PPFormula& phi, const RelationalSignature& sig);
RelationalStructure canonical_structure(const PPFormula& phi, const RelationalSignature& sig);
PPFormula canonical_formula(const RelationalStructure& c);

// A sentence over functional atoms f(x) = y becomes an instance functor
// whose shape has no two composable non-identity arrows: each variable gets
// a primed copy feeding all outgoing constraints.
CatFunctor pp_sentence_to_instance(const PPFormula& phi, const FinCategoryPtr& s);
PPFormula instance_to_pp_sentence(const CatFunctor& d);

struct PPInterpretation {
    std::uint32_t dimension = 1;
    RelationalSignature source;  // input structures
    RelationalSignature target;  // interpreted structures
    PPFormula domain_formula;    // quantifier-free, `dimension` free variables
    std::vector<PPFormula> relation_formulas;  // dimension * arity free variables each
};

// The gadget whose nerve computes the interpretation; the containment of
// each relation formula in the domain formula is checked on the canonical
// structures and violations raise ShapeError.
GadgetFunctor ppinterp_to_gadget(const PPInterpretation& phi);
PPInterpretation gadget_to_ppinterp(const GadgetFunctor& g);

}
