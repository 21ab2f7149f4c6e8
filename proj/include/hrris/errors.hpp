#ifndef HRRIS_ERRORS_HPP
#define HRRIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hrris {

/// A matrix that the model requires to be (numerically) rank <= 1 turned out
/// not to be. Signals a violated model assumption, never silently absorbed.
class rank_error : public std::runtime_error {
  public:
    explicit rank_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// The relay power budget cannot accommodate the requested assignment.
class infeasible_error : public std::runtime_error {
  public:
    explicit infeasible_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Configuration file is malformed or violates a field invariant.
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace hrris

#endif
