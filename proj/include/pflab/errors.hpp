#pragma once

#include <stdexcept>
#include <string>

namespace pflab {

// A constructed object would exceed Caps::size_cap.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Ideal lattice enumeration hit Caps::ideal_cap. Enumeration never truncates
// silently: callers either propagate this or record an explicit skip.
class EnumerationOverflow : public std::runtime_error {
public:
    explicit EnumerationOverflow(const std::string& what) : std::runtime_error(what) {}
};

// A ring axiom failed during validation. Carries the axiom name and the
// witness elements (unused slots are -1).
class AxiomError : public std::runtime_error {
public:
    AxiomError(std::string axiom_, int a_, int b_, int c_, const std::string& what)
        : std::runtime_error(what), axiom(std::move(axiom_)), a(a_), b(b_), c(c_) {}

    std::string axiom;
    int a, b, c;
};

// Expression syntax error with a 0-based input position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t pos_, const std::string& what)
        : std::runtime_error(what), pos(pos_) {}

    std::size_t pos;
};

// Well-formed expression that cannot be evaluated (non-prime p, generator
// index out of range, non-maximal ideal passed to loc, ...).
class SemanticError : public std::runtime_error {
public:
    explicit SemanticError(const std::string& what) : std::runtime_error(what) {}
};

// Two independent routes to the same mathematical fact disagreed. This is
// always an implementation bug, never a property of the input.
class InternalDisagreement : public std::logic_error {
public:
    explicit InternalDisagreement(const std::string& what) : std::logic_error(what) {}
};

} // namespace pflab
