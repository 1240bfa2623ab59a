#pragma once

// The invariant matrix behind `adlab verify` and the acceptance binary.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace adlab {

enum class VerifyLevel { fast, full };
VerifyLevel parse_level(std::string_view name);

struct CheckResult {
  std::string criterion;  // "1".."8", or "order" / "mutation" for full-only studies
  std::string name;
  bool pass = false;
  double measured = 0.0;
  std::string limit;
  double seconds = 0.0;
};

// fast: two-level scenarios only; full adds random four-level sampled
// Hamiltonians, convergence orders and the coupling-sign mutation.
// `on_result` (optional) sees each check as soon as it finishes.
std::vector<CheckResult> run_verification(VerifyLevel level, std::uint64_t seed = 0,
                                          const std::function<void(const CheckResult&)>& on_result = {});

std::string format_check(const CheckResult& r);

}  // namespace adlab
