#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspcat/kan.hpp"

namespace cspcat {

// f(x_{pi(1)},...,x_{pi(m)}) = g(x_1,...,x_n): pi maps the left symbol's
// argument positions to the right symbol's variables.
struct MinorIdentity {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::vector<std::uint32_t> pi;
};

struct MinorCondition {
    std::vector<std::string> symbols;
    std::vector<std::uint32_t> arities;
    std::vector<MinorIdentity> identities;
};

ValidationReport validate_condition(const MinorCondition& c);

// Built-in conditions.
MinorCondition siggers_condition();
MinorCondition symmetric_binary_condition();
MinorCondition trivial_condition();

// The diagram D_Gamma: one object per symbol carrying its arity set, one
// arrow per identity carrying pi.  The shape is closed under composition by
// composing the function tables; composites that equal an existing arrow
// (or an identity function) are merged rather than duplicated.
FinDiagram condition_to_diagram(const MinorCondition& c);

// One identity per non-identity arrow, deduplicated; inverse of
// condition_to_diagram up to renaming.
MinorCondition diagram_to_condition(const FinDiagram& d);

// The free structure (gl D_Gamma) applied componentwise to x, together with
// the per-object colimit data needed to translate homomorphisms back into
// polymorphisms.  Over x = A this is the indicator structure of the
// condition.
struct IndicatorStructure {
    Copresheaf copresheaf;
    std::vector<LanValue> values;  // per base object of x
    FinDiagram condition;          // D_Gamma
};

IndicatorStructure indicator_structure(const Copresheaf& x, const MinorCondition& gamma,
                                       std::size_t cap = default_power_cap);

Copresheaf free_structure(const Copresheaf& x, const MinorCondition& gamma,
                          std::size_t cap = default_power_cap);

// Componentwise application of a recorded minion window; the table must
// contain an arity of size |x(s)| for every s and the actions along every
// map of x.  Throws MissingArity otherwise.
Copresheaf free_structure(const Copresheaf& x, const MinionTable& m);

struct SatisfactionResult {
    bool satisfied = false;
    // One polymorphism a^{arity(f)} -> b per symbol when satisfied; the
    // component at s of witness[f] is indexed by encoded tuples over a(s).
    std::vector<NatTransformation> witness;
};

// Whether Pol(a, b) satisfies gamma, decided as hom(indicator, b) without
// materializing the minion.
SatisfactionResult satisfies(const Copresheaf& a, const Copresheaf& b, const MinorCondition& gamma,
                             std::size_t cap = default_power_cap);

// Whether every minion satisfying gamma also satisfies pi_cond, decided as
// the limit over D_Pi's shape of (gl D_Gamma) at the sets D_Pi(i).
bool interpretable(const MinorCondition& pi_cond, const MinorCondition& gamma,
                   std::size_t cap = default_power_cap);

// The category of all functions between the given sets, with the function
// tables laid out per morphism.
struct FunctionCategory {
    FinCategoryPtr category;
    std::vector<NamedSet> arities;
    std::vector<std::vector<std::uint32_t>> functions;
};

FunctionCategory function_category(const std::vector<NamedSet>& arities);

// The inclusion of the arity sets themselves as a copresheaf.
Copresheaf identity_copresheaf(const FunctionCategory& fc);

// A recorded minion window as a copresheaf over the function category; the
// table must have been built over the same arity list.
Copresheaf minion_copresheaf(const FunctionCategory& fc, const MinionTable& table);

struct HardnessProbeResult {
    bool refuted = false;
    std::uint32_t refuted_arity = 0;
    // Per probed arity [1..k], element -> chosen position; empty when refuted.
    std::vector<std::vector<std::uint32_t>> witness;
    MinionTable table;  // the last probed window
};

// Searches for choice functions Pol(a,b)(N) -> N natural in all maps between
// the sets [1]..[max_arity].  Refutation is sound evidence that no natural
// transformation to the identity exists; a bounded witness is evidence only.
HardnessProbeResult probe_hardness(const Copresheaf& a, const Copresheaf& b,
                                   std::uint32_t max_arity,
                                   std::size_t cap = default_power_cap);

}
