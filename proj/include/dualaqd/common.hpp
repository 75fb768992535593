#pragma once

#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

namespace dualaqd {

// Error taxonomy used across the library. The CLI maps these to exit codes
// (config -> 2, data -> 3, numeric -> 4).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken API contract (caller bug), distinct from bad user input.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

namespace detail {
inline bool& warnings_enabled() {
    static bool enabled = true;
    return enabled;
}
}  // namespace detail

inline void set_warnings_enabled(bool enabled) { detail::warnings_enabled() = enabled; }

inline void log_warn(const std::string& msg) {
    if (detail::warnings_enabled()) std::cerr << "[warn] " << msg << "\n";
}

// splitmix64; used to derive independent RNG streams from (seed, salt) pairs
// so that folds, ensemble members and MC passes stay deterministic regardless
// of scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt1, std::uint64_t salt2) {
    return mix_seed(mix_seed(seed, salt1), salt2);
}

}  // namespace dualaqd
