#pragma once

#include <stdexcept>
#include <string>

namespace osm
{

enum class ErrorCode
{
  invalid_argument,
  invalid_state,
  unsupported_degree,
  state_out_of_range,
  singular_matrix,
  singular_patch,
  not_ready,
  level_mismatch,
  internal,
};

const char *to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline const char *to_string(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::invalid_argument:
      return "invalid-argument";
    case ErrorCode::invalid_state:
      return "invalid-state";
    case ErrorCode::unsupported_degree:
      return "unsupported-degree";
    case ErrorCode::state_out_of_range:
      return "state-out-of-range";
    case ErrorCode::singular_matrix:
      return "singular-matrix";
    case ErrorCode::singular_patch:
      return "singular-patch";
    case ErrorCode::not_ready:
      return "not-ready";
    case ErrorCode::level_mismatch:
      return "level-mismatch";
    case ErrorCode::internal:
      return "internal";
  }
  return "unknown";
}

#define OSM_REQUIRE(cond, code, msg)        \
  do                                        \
  {                                         \
    if (!(cond))                            \
    {                                       \
      throw ::osm::Error((code), (msg));    \
    }                                       \
  } while (false)

}  // namespace osm
