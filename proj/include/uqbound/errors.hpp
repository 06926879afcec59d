#pragma once

#include <stdexcept>
#include <string>

namespace uqb {

// Base class for everything thrown by this library, so callers can catch
// library failures separately from std errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument or state: bad weights, empty samples, parameters outside
// the admissible region, malformed JSON payloads.
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

// An iterative routine (root finder, adaptive quadrature, MLE) failed to
// reach its tolerance within the iteration budget.
class nonconvergence_error : public error {
public:
    explicit nonconvergence_error(const std::string& what) : error(what) {}
};

// Evaluation would overflow double range (raw moment generating functions
// at large argument).  Log-space routines do not throw this.
class overflow_error : public error {
public:
    explicit overflow_error(const std::string& what) : error(what) {}
};

// A problem instance is too large for the exact (enumeration) path.
class size_error : public error {
public:
    explicit size_error(const std::string& what) : error(what) {}
};

} // namespace uqb
