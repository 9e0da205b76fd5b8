#pragma once

#include <stdexcept>
#include <string>

namespace ajel {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind {
    size,       // design too small for the kernel / deletion infeasible
    numeric,    // non-finite input or kernel output
    parameter,  // argument outside its domain
    solver,     // iteration cap hit on a well-posed problem (a bug)
    parse,      // malformed input file
    usage,      // incompatible options
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace ajel
