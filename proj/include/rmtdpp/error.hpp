#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmtdpp {

enum class Errc {
  invalid_argument,
  pivot_too_small,
  singular_pinned_block,
  zero_row,
  no_convergence,
  singular,
  unsupported_order,
  singular_gram,
  resolvent_singular,
  invalid_marginal,
  forced_impossible,
  not_orthonormal,
  spectrum_out_of_range,
  not_projection,
  numerical_breakdown,
  unsupported_variant,
  singular_kasteleyn,
  malformed_tiling,
  dead_end,
  no_eigenvalue_found,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Carries the best estimate reached before giving up.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double best, int order)
      : Error(Errc::no_convergence, what), best_(best), order_(order) {}

  double best_value() const noexcept { return best_; }
  int order_used() const noexcept { return order_; }

 private:
  double best_;
  int order_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace rmtdpp
