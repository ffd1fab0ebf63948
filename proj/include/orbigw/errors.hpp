#ifndef ORBIGW_ERRORS_HPP
#define ORBIGW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace orbigw {

// Malformed data that violates a structural precondition (mismatched
// variable lists, bad exponent vectors, unknown labels).
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside the mathematical domain of an operation (division by a
// non-unit, exp of a series with nonzero constant term, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Rejected target data (non-coprime weights, Calabi-Yau sum violated, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A coordinate change whose linear part is not the identity.
class NonInvertibleMap : public std::runtime_error {
public:
    explicit NonInvertibleMap(const std::string& msg) : std::runtime_error(msg) {}
};

// The chosen extension misses a degree-2 class that the I-function produces,
// so the mirror map cannot be inverted.
class NonInvertibleExtension : public std::runtime_error {
public:
    explicit NonInvertibleExtension(const std::string& msg) : std::runtime_error(msg) {}
};

// Column-sum identity of the extended weight data failed.
class CYViolation : public std::runtime_error {
public:
    CYViolation(const std::string& msg, int row) : std::runtime_error(msg), offending_row(row) {}
    int offending_row;
};

// Overlapping determinations of an invariant disagreed.
class ExtractionInconsistency : public std::runtime_error {
public:
    explicit ExtractionInconsistency(const std::string& msg) : std::runtime_error(msg) {}
};

// A broken internal invariant (singular pairing, homogeneity failure, ...).
class InternalError : public std::runtime_error {
public:
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace orbigw

#endif
