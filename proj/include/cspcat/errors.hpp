#ifndef CSPCAT_ERRORS_HPP
#define CSPCAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cspcat {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Presentation closure ran past the morphism or word-length budget.
struct CapExceeded : Error {
    explicit CapExceeded(const std::string& what) : Error(what) {}
};

// A per-component set (power, minion window, indicator) would exceed the cap.
struct SizeCap : Error {
    explicit SizeCap(const std::string& what) : Error(what) {}
};

// Two copresheaves that should live over the same base category do not.
struct BaseMismatch : Error {
    explicit BaseMismatch(const std::string& what) : Error(what) {}
};

// A minion table is asked for an arity it does not record.
struct MissingArity : Error {
    explicit MissingArity(const std::string& what) : Error(what) {}
};

// A formula or file refers to a morphism the base category lacks.
struct UnknownMorphism : Error {
    explicit UnknownMorphism(const std::string& what) : Error(what) {}
};

// Input data is not of the shape an operation requires.
struct ShapeError : Error {
    explicit ShapeError(const std::string& what) : Error(what) {}
};

// A copresheaf was expected to live over a relational signature category.
struct BaseShape : Error {
    explicit BaseShape(const std::string& what) : Error(what) {}
};

// A template pair was constructed whose promise homomorphism does not exist.
struct PromiseViolation : Error {
    explicit PromiseViolation(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

}

#endif
