#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cspcat/kan.hpp"

namespace cspcat {

// A promise template: a strict copresheaf, a relaxed one over the same base,
// and the promise homomorphism between them, found at construction.
struct TemplatePair {
    Copresheaf a;
    Copresheaf b;
    NatTransformation witness;
};

// Throws BaseMismatch on different bases and PromiseViolation when hom(a, b)
// is empty.
TemplatePair template_pair(Copresheaf a, Copresheaf b);

// The reduction X |-> gl(A.gr X).A': at each target object t, the colimit
// over the elements (s, x) of X of the function sets A'(t)^{A(s)}, reindexed
// by precomposition, with A' acting by postcomposition.  The per-(s, t)
// function tables are cached so a corpus run pays for them once.
struct UniversalReducer {
    TemplatePair src;
    TemplatePair dst;
    std::size_t cap = default_power_cap;

    // pow[s][t] = |A'(t)|^{|A(s)|}
    std::vector<std::vector<std::uint64_t>> pow;
    // reindex[u][t] for u: s -> s' in the source base: code over A(s') to
    // code over A(s);  post[v][s] for v: t -> t' in the target base: code
    // over A'(t) to code over A'(t').
    std::vector<std::vector<std::vector<std::uint32_t>>> reindex;
    std::vector<std::vector<std::vector<std::uint32_t>>> post;

    Copresheaf apply(const Copresheaf& x) const;
};

UniversalReducer universal_reducer(TemplatePair src, TemplatePair dst,
                                   std::size_t cap = default_power_cap);

Copresheaf universal_reduction(const TemplatePair& src, const TemplatePair& dst,
                               const Copresheaf& x, std::size_t cap = default_power_cap);

// The same composite assembled through gr + lan_value; an independent code
// path that must agree with UniversalReducer element for element.
Copresheaf universal_reduction_via_lan(const TemplatePair& src, const TemplatePair& dst,
                                       const Copresheaf& x, std::size_t cap = default_power_cap);

// kay_G as a reduction step.
Copresheaf gadget_reduce(const GadgetFunctor& g, const Copresheaf& x);

// YES: maps into the strict template.  NO: not even into the relaxed one.
enum class Verdict { yes, no, neither };
enum class Classification { sound, complete, violation, outside_promise };

struct InstanceReport {
    std::string name;
    Verdict input = Verdict::neither;
    Verdict output = Verdict::neither;
    Classification classification = Classification::outside_promise;
};

struct ReductionReport {
    // The minion-transformation hypothesis is the caller's assertion; the
    // harness records it rather than assuming it silently.
    std::string assertion;
    std::vector<InstanceReport> instances;
    std::size_t violations = 0;
    std::size_t outside = 0;
    bool passed() const { return violations == 0; }
};

using Reduction = std::function<Copresheaf(const Copresheaf&)>;

// Runs the reduction and both solvers on every instance.  Instances are
// processed in parallel; each pipeline is pure and the report keeps corpus
// order.
ReductionReport harness(const std::vector<std::pair<std::string, Copresheaf>>& corpus,
                        const TemplatePair& pair_src, const TemplatePair& pair_dst,
                        const Reduction& reduction, const std::string& assertion = "");

// Corpus generators over the digraph base.
Copresheaf multidigraph(std::uint32_t vertices,
                        const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);
std::vector<std::pair<std::string, Copresheaf>> all_multidigraphs(std::uint32_t max_vertices,
                                                                  std::uint32_t max_edges);
Copresheaf random_multidigraph(std::uint64_t seed, std::uint32_t max_vertices,
                               std::uint32_t max_edges);

}
