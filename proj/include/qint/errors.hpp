#pragma once

#include <stdexcept>
#include <string>

namespace qint {

// Invalid parameter or violated model invariant. The CLI maps this to exit code 2.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed config file; message carries file/line/field diagnostics. Exit code 2.
class parse_error : public validation_error {
public:
    explicit parse_error(const std::string& what) : validation_error(what) {}
};

// Divergent evanescent decay length (incidence at or below the critical angle).
// The CLI maps this to exit code 3.
class singularity_error : public std::domain_error {
public:
    explicit singularity_error(const std::string& what) : std::domain_error(what) {}
};

} // namespace qint
