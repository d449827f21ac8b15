#ifndef FKLAB_ERRORS_HPP
#define FKLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fklab {

// Bad user input: malformed config file, unknown preset, out-of-range
// parameter. The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure at run time: singular matrix, non-convergence,
// invalid weights. The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fklab

#endif
