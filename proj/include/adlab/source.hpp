#pragma once

#include <functional>
#include <limits>
#include <string>

#include "adlab/linalg.hpp"

namespace adlab {

struct TimeWindow {
  double begin = -std::numeric_limits<double>::infinity();
  double end = std::numeric_limits<double>::infinity();

  bool contains(double t) const;
};

// Time -> Hermitian matrix. Every evaluation is window- and Hermiticity-checked.
class HamiltonianSource {
 public:
  using Rule = std::function<ComplexMatrix(double)>;

  HamiltonianSource(std::size_t dim, Rule rule, TimeWindow window = {}, std::string label = {});

  ComplexMatrix operator()(double t) const;

  std::size_t dim() const noexcept { return dim_; }
  const TimeWindow& window() const noexcept { return window_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::size_t dim_;
  Rule rule_;
  TimeWindow window_;
  std::string label_;
};

}  // namespace adlab
