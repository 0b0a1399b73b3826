#ifndef NETTEST_ERRORS_HPP
#define NETTEST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nettest {

// Bad input: malformed files, dimension mismatches, out-of-range parameters.
// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what_arg)
        : std::runtime_error(what_arg) {}
};

// A broken internal invariant: a state the library promises cannot occur.
// The CLI maps this to exit code 3.
class InvariantError : public std::logic_error {
  public:
    explicit InvariantError(const std::string& what_arg)
        : std::logic_error(what_arg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

inline void affirm(bool cond, const std::string& msg) {
    if (!cond) throw InvariantError(msg);
}

} // namespace nettest

#endif // NETTEST_ERRORS_HPP
