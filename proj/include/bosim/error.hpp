#ifndef BOSIM_ERROR_HPP
#define BOSIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bosim {

enum class ErrorCode {
    invalid_dimension,
    unitarity_violation,
    hermiticity_violation,
    invalid_shape,
    size_limit,
    invalid_multiset,
    invalid_power,
    shape_mismatch,
    invalid_subset,
    enumeration_too_large,
    invalid_fold,
    invalid_distribution,
    insufficient_data,
    inconsistent_counts,
    invalid_entropy,
    invalid_config,
    io_error,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) throw Error(code, what);
}

} // namespace bosim

#endif
