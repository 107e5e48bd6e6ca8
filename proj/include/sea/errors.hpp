#ifndef SEA_ERRORS_HPP
#define SEA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sea {

enum class ErrorKind {
    invalid_argument,   // caller broke a precondition
    resource,           // a configured budget or width limit was exceeded
    data_not_found,     // a required data file is missing
    corrupt_data,       // a data file failed validation
    bad_reduction,      // curve is singular modulo the given prime
    degenerate_isogeny, // Elkies kernel construction hit a degenerate case
    retry_exhausted,    // randomized splitting gave up after the retry bound
    internal            // contract violation inside the library
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

// Process exit code for a given failure, per the CLI contract.
inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_argument: return 2;
    case ErrorKind::data_not_found: return 3;
    case ErrorKind::corrupt_data: return 3;
    case ErrorKind::resource: return 4;
    case ErrorKind::bad_reduction: return 5;
    default: return 1;
    }
}

} // namespace sea

#endif
