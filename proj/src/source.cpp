#include "adlab/source.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adlab {

bool TimeWindow::contains(double t) const {
  // Grid arithmetic t0 + k*dt may land a few ulps outside a sampled window.
  const double slack = 1e-12 * std::max({1.0, std::isfinite(begin) ? std::abs(begin) : 0.0,
                                         std::isfinite(end) ? std::abs(end) : 0.0});
  return t >= begin - slack && t <= end + slack;
}

HamiltonianSource::HamiltonianSource(std::size_t dim, Rule rule, TimeWindow window,
                                     std::string label)
    : dim_(dim), rule_(std::move(rule)), window_(window), label_(std::move(label)) {
  if (dim_ == 0) throw Error(ErrorCode::DimensionMismatch, "source dimension must be positive");
}

ComplexMatrix HamiltonianSource::operator()(double t) const {
  if (!window_.contains(t)) {
    std::ostringstream msg;
    msg << label_ << " evaluated at t=" << t << " outside [" << window_.begin << ", "
        << window_.end << "]";
    throw Error(ErrorCode::SourceOutOfWindow, msg.str());
  }
  ComplexMatrix h = rule_(t);
  if (h.dim() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, label_ + " returned a matrix of the wrong size");
  }
  if (!h.all_finite() || !check_hermitian(h, 1e-10 * std::max(1.0, h.frobenius_norm()))) {
    std::ostringstream msg;
    msg << label_ << " is not Hermitian at t=" << t;
    throw Error(ErrorCode::NotHermitian, msg.str());
  }
  return h;
}

}  // namespace adlab
