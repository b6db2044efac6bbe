#ifndef CSPCAT_COPRESHEAF_HPP
#define CSPCAT_COPRESHEAF_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "findiag.hpp"

namespace cspcat {

// A copresheaf is a set-valued diagram whose shape plays the role of a base
// category; positions in `sets`/`maps` line up with the base's indices.
using Copresheaf = FinDiagram;

// Componentwise map between two copresheaves over the same base:
// components[s] sends elements of X(s) to elements of A(s).
struct NatTransformation {
    std::vector<std::vector<std::uint32_t>> components;
};

struct HomResult {
    bool nonempty = false;
    std::uint64_t count = 0;
    std::vector<NatTransformation> transformations;  // all in enumerate mode, first in decide
};

// Natural transformations X -> A, solved as the limit of A over the category
// of elements of X.  Throws BaseMismatch when the bases differ.
HomResult hom(const Copresheaf& x, const Copresheaf& a, SolveMode mode);

ValidationReport check_naturality(const Copresheaf& x, const Copresheaf& a,
                                  const NatTransformation& h);

// A^N: componentwise functions N -> A(s), encoded as fixed-radix tuples with
// the first position most significant.  Componentwise sizes above `cap`
// raise SizeCap.
Copresheaf power(const Copresheaf& a, const NamedSet& n, std::size_t cap = 1000000);

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::size_t cap);
void decode_tuple(std::uint64_t index, std::uint32_t radix, std::uint32_t length,
                  std::vector<std::uint32_t>& out);
std::uint64_t encode_tuple(const std::vector<std::uint32_t>& tuple, std::uint32_t radix);

// The representable copresheaf hom(s, -); element names are morphism names.
Copresheaf yoneda(const FinCategoryPtr& base, std::uint32_t s);

// Reindex a copresheaf along an instance functor: (a . d)(j) = a(d(j)).
FinDiagram compose_diagram(const Copresheaf& a, const CatFunctor& d);

bool hom_equivalent(const Copresheaf& a, const Copresheaf& b);

// Natural isomorphism search: exact componentwise bijections commuting with
// every base morphism.
std::optional<NatTransformation> find_isomorphism(const Copresheaf& a, const Copresheaf& b);
bool isomorphic(const Copresheaf& a, const Copresheaf& b);

bool equal_copresheaves(const Copresheaf& a, const Copresheaf& b);

NatTransformation compose_transformations(const Copresheaf& x, const NatTransformation& first,
                                          const NatTransformation& then);
std::vector<std::uint32_t> flatten_transformation(const NatTransformation& h);

}

#endif
