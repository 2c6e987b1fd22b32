#pragma once

#include <stdexcept>
#include <string>

namespace oofdm {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input has the wrong length / size (e.g. non-power-of-two transform length).
struct SizingError : Error {
    explicit SizingError(const std::string& what) : Error(what) {}
};

/// Invalid configuration value (bad modulation order, empty grid, ...).
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Value outside the mathematical domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Channel eigenvalue too close to zero; zero-forcing equalizer undefined.
struct SingularChannelError : Error {
    explicit SingularChannelError(const std::string& what) : Error(what) {}
};

} // namespace oofdm
