#ifndef TWISTLAB_ERRORS_HPP
#define TWISTLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace twistlab {

// Error categories mirror the status codes of the public C API.

struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A request beyond the sieved range of a CoefficientTable.
struct table_range_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Coefficient coverage insufficient for a computation; carries the
// requirement so callers can rebuild with the right bounds.
struct coverage_error : std::runtime_error {
    long long required_p_max = 0;
    long long required_n_max = 0;
    coverage_error(const std::string& msg, long long preq, long long nreq)
        : std::runtime_error(msg), required_p_max(preq), required_n_max(nreq) {}
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Corrupt or mismatched on-disk format (cache magic/version/checksum).
struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure (quadrature non-convergence and the like).
struct numerics_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace twistlab

#endif
