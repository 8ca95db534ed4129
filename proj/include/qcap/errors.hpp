#pragma once

#include <stdexcept>
#include <string>

namespace qcap {

// Raised for malformed inputs: bad parameters, schema mismatches, empty
// columns, out-of-range configuration. CLI maps this to exit code 2.
class data_error : public std::runtime_error {
  public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a computation loses numerical integrity: imaginary residue
// above tolerance, broken completeness, failed convergence. Exit code 3.
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qcap
