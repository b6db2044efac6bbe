#ifndef CSPCAT_FINDIAG_HPP
#define CSPCAT_FINDIAG_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fincat.hpp"

namespace cspcat {

using NamedSet = std::vector<std::string>;
using NamedSetPtr = std::shared_ptr<const NamedSet>;

NamedSetPtr make_set(std::vector<std::string> names);
NamedSetPtr numbered_set(std::size_t n, const std::string& prefix = "");

// A functor from a finite shape category to finite sets.  `sets` holds the
// element names per object, `maps` one total table per morphism (identities
// included).  Sets are shared pointers so large diagrams can alias the same
// underlying set many times without copying names.
struct FinDiagram {
    FinCategoryPtr shape;
    std::vector<NamedSetPtr> sets;
    std::vector<std::vector<std::uint32_t>> maps;
};

ValidationReport validate_diagram(const FinDiagram& d);

enum class SolveMode { decide, enumerate, count };

// One element index per shape object, in object declaration order.
using SolutionTuple = std::vector<std::uint32_t>;

struct LimitResult {
    bool nonempty = false;
    std::uint64_t count = 0;                 // exact in count and enumerate modes
    std::vector<SolutionTuple> solutions;    // filled in enumerate mode, lexicographic
};

// The limit of a set-valued diagram: all tuples (d_i) with D(f)(d_i) = d_j
// for every f: i -> j.  Backtracking assigns objects in ascending set size
// (ties by declaration order) and keeps every functional constraint
// arc-consistent after each assignment, so propagation is exact.
LimitResult limit(const FinDiagram& d, SolveMode mode);

// The colimit carrier: disjoint sum of the sets quotiented by the smallest
// equivalence with x ~ D(f)(x).  Classes are ordered, and named, by their
// least (object index, element index) member.
struct QuotientSet {
    NamedSetPtr carrier;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> representatives;
    std::vector<std::vector<std::uint32_t>> injections;  // per object: element -> class
};

QuotientSet colimit(const FinDiagram& d);

}

#endif
