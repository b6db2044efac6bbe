#ifndef CSPCAT_GROTHENDIECK_HPP
#define CSPCAT_GROTHENDIECK_HPP

#include "copresheaf.hpp"

namespace cspcat {

// The category of elements of a copresheaf, with its projection back to the
// base.  Objects are pairs (base object, element) ordered by those indices;
// identities come first in the morphism list, then one morphism per
// (non-identity base morphism, source element) in that order.
struct ElementsCategory {
    FinCategoryPtr category;
    CatFunctor projection;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> element_of;  // object -> (base obj, elem)
    std::vector<std::uint32_t> object_offsets;    // base object -> first elements-object
    std::vector<std::uint32_t> morphism_offsets;  // base morphism -> first non-identity arrow

    std::uint32_t object_at(std::uint32_t s, std::uint32_t x) const {
        return object_offsets[s] + x;
    }
};

ElementsCategory gr(const Copresheaf& x);

// Left adjoint to the elements construction: the colimit of representables
// over the shape, computed one base object at a time with the union-find
// quotient.  Carrier elements are named by their class representative
// (shape object, base morphism) pair.
Copresheaf gl(const CatFunctor& d);

// The instance diagram A over the category of elements of I, i.e. the
// system of constraints whose limit is hom(I, A).
FinDiagram template_condition(const Copresheaf& a, const Copresheaf& i);

std::string element_object_name(const std::string& object, const std::string& element);

}

#endif
