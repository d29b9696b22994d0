#ifndef NORMA_ERRORS_HPP
#define NORMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace norma {

// Error taxonomy used across the library. The CLI maps these to exit codes,
// so new error kinds should subclass one of the four below.

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input: unreadable documents, bad scalar literals, bad flags.
struct parse_error : error {
    explicit parse_error(const std::string& msg) : error(msg) {}
};

// Structurally invalid data: structure constants that fail the ring axioms,
// dangling references in a document, a relation that fails to hold.
struct validation_error : error {
    explicit validation_error(const std::string& msg) : error(msg) {}
};

// A well-formed request outside an operation's domain: non-square det,
// kernel over a non-field, odd d for the split triple, and so on.
struct precondition_error : error {
    explicit precondition_error(const std::string& msg) : error(msg) {}
};

// Shape mismatches between operands.
struct shape_error : precondition_error {
    explicit shape_error(const std::string& msg) : precondition_error(msg) {}
};

// Operation not available over the given scalar domain.
struct domain_error : precondition_error {
    explicit domain_error(const std::string& msg) : precondition_error(msg) {}
};

} // namespace norma

#endif
