#ifndef SELFDUAL_ERRORS_HPP
#define SELFDUAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sd {

/// Base class for all library errors. The module prefix goes in the message.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Evaluation requested at (or too close to) a pole.
struct pole_error : error {
    using error::error;
};

/// Invalid modulus, degenerate parameter, out-of-range argument.
struct domain_error : error {
    using error::error;
};

/// The line-bundle parameter sits on a spin point of the torus.
struct spin_point_error : error {
    using error::error;
};

/// An iterative solver failed to converge.
struct convergence_error : error {
    using error::error;
};

/// Monodromy/ODE integration failure (path too close to a puncture, divergence).
struct integration_error : error {
    using error::error;
};

/// Loop-group factorization failure (singular on the circle, truncation too small,
/// unexpected partial indices, ill-conditioned rank decision).
struct factorization_error : error {
    using error::error;
};

/// Reality-gauge failure (reducible family, no intertwiner, winding obstruction).
struct reality_error : error {
    using error::error;
};

/// Malformed input document or config.
struct parse_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

}  // namespace sd

#endif
