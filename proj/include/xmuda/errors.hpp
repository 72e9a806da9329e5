#ifndef XMUDA_ERRORS_HPP
#define XMUDA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xmuda {

// Error categories map to distinct CLI exit codes.
enum class ErrorKind {
    invalid_argument,  // bad values passed to an operation
    config,            // malformed or inconsistent configuration
    data,              // dataset/manifest/checkpoint problems
    split_misuse,      // attempt to read labels of a protected split
    dependency,        // missing prerequisite artifact (e.g. distillation input)
    numeric,           // non-finite loss or divergence
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) throw Error(kind, msg);
}

inline void require_arg(bool cond, const std::string& msg) {
    require(cond, ErrorKind::invalid_argument, msg);
}

}  // namespace xmuda

#endif
