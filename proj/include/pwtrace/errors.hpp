#pragma once

#include <stdexcept>
#include <string>

namespace pwtrace {

enum class errc {
  degenerate_denominator,
  order_out_of_range,
  duplicate_points,
  eta_non_positive,
  bound_degenerate,
  node_on_boundary,
  empty_grid,
  capacity_exceeded,
  eta_out_of_range,
  clusters_too_close,
  node_not_in_sequence,
  s_zero,
  non_positive_weight,
  singular_sample_gap,
  coincident_point,
  missing_trace_value,
  flavor_mismatch,
  derivative_zero,
  zero_norm,
  pole_on_contour,
  partition_failed,
  invalid_sequence,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace pwtrace
