#include "adlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

namespace adlab {

namespace {

using json = nlohmann::json;

ComplexMatrix sigma_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix sigma_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace

void RotatingModelParams::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw Error(ErrorCode::InvalidParams, "omega0 must be finite and > 0");
  }
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidParams, "omega must be finite and >= 0");
  }
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw Error(ErrorCode::InvalidParams, "theta must lie in [0, pi]");
  }
}

ComplexMatrix rotating_hamiltonian_at(const RotatingModelParams& p, double t) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const cplx rot = std::exp(kI * (p.omega * t));
  const double scale = -0.5 * p.omega0;
  return ComplexMatrix{{scale * c, scale * s * std::conj(rot)}, {scale * s * rot, -scale * c}};
}

HamiltonianSource rotating_hamiltonian(const RotatingModelParams& p) {
  p.validate();
  return HamiltonianSource(
      2, [p](double t) { return rotating_hamiltonian_at(p, t); }, {}, "rotating");
}

ComplexMatrix rotating_effective_hamiltonian(const RotatingModelParams& p) {
  p.validate();
  const double z = p.omega0 * std::cos(p.theta) + p.omega;
  const double x = p.omega0 * std::sin(p.theta);
  return cplx{-0.5 * z} * sigma_z() + cplx{-0.5 * x} * sigma_x();
}

ComplexMatrix rotating_exact_propagator(const RotatingModelParams& p, double t) {
  const ComplexMatrix frame = expm_hermitian_generator(cplx{0.5 * p.omega} * sigma_z(), t);
  return frame * expm_hermitian_generator(rotating_effective_hamiltonian(p), t);
}

double rotating_nu(const RotatingModelParams& p) {
  p.validate();
  return std::sqrt(p.omega0 * p.omega0 + p.omega * p.omega +
                   2.0 * p.omega0 * p.omega * std::cos(p.theta));
}

EigenSpinors rotating_eigenspinors(const RotatingModelParams& p, double t) {
  p.validate();
  const double c = std::cos(0.5 * p.theta);
  const double s = std::sin(0.5 * p.theta);
  const cplx rot = std::exp(kI * (p.omega * t));
  const cplx gauge = std::exp(-kI * (0.5 * p.omega * t * (1.0 - std::cos(p.theta))));
  EigenSpinors out;
  out.plus = ComplexVector{c * gauge, s * rot * gauge};
  out.minus = ComplexVector{-s * std::conj(rot) * std::conj(gauge), c * std::conj(gauge)};
  out.plus_energy = -0.5 * p.omega0;
  out.minus_energy = 0.5 * p.omega0;
  return out;
}

cplx rotating_coupling(const RotatingModelParams& p, double t) {
  p.validate();
  return 0.5 * p.omega * std::sin(p.theta) * std::exp(-kI * (p.omega * t * std::cos(p.theta)));
}

HamiltonianSource sampled_hamiltonian(std::vector<HamiltonianSample> samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidParams, "no samples");
  const std::size_t dim = samples.front().h.dim();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    if (s.h.dim() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "sample " + std::to_string(k) + " has wrong dim");
    }
    if (!s.h.all_finite() || !check_hermitian(s.h, 1e-10 * std::max(1.0, s.h.frobenius_norm()))) {
      throw Error(ErrorCode::NotHermitian, "sample " + std::to_string(k) + " is not Hermitian");
    }
    if (k > 0 && !(s.t > samples[k - 1].t)) {
      throw Error(ErrorCode::NonMonotoneTimes, "times must be strictly increasing");
    }
  }

  const TimeWindow window{samples.front().t, samples.back().t};
  auto data = std::make_shared<const std::vector<HamiltonianSample>>(std::move(samples));
  auto rule = [data](double t) -> ComplexMatrix {
    const auto& s = *data;
    if (s.size() == 1 || t <= s.front().t) return s.front().h;
    if (t >= s.back().t) return s.back().h;
    const auto hi = std::upper_bound(s.begin(), s.end(), t,
                                     [](double x, const HamiltonianSample& y) { return x < y.t; });
    const auto lo = hi - 1;
    const double w = (t - lo->t) / (hi->t - lo->t);
    return cplx{1.0 - w} * lo->h + cplx{w} * hi->h;
  };
  return HamiltonianSource(dim, std::move(rule), window, "sampled");
}

std::vector<HamiltonianSample> load_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open samples file " + path.string());
  json doc;
  try {
    in >> doc;
    const auto dim = doc.at("dim").get<std::size_t>();
    const auto& times = doc.at("times");
    const auto& matrices = doc.at("matrices");
    if (dim == 0 || times.size() != matrices.size()) {
      throw Error(ErrorCode::ConfigError, "samples file: dim/times/matrices inconsistent");
    }
    std::vector<HamiltonianSample> out;
    out.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto& flat = matrices[k];
      if (flat.size() != dim * dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "matrix " + std::to_string(k) + " needs " + std::to_string(dim * dim) +
                        " entries");
      }
      std::vector<cplx> entries;
      entries.reserve(dim * dim);
      for (const auto& pair : flat) {
        entries.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
      }
      out.push_back({times[k].get<double>(), ComplexMatrix(dim, std::move(entries))});
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, "samples file " + path.string() + ": " + e.what());
  }
}

void save_samples(const std::filesystem::path& path, const std::vector<HamiltonianSample>& samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidParams, "no samples to save");
  json doc;
  doc["dim"] = samples.front().h.dim();
  json times = json::array();
  json matrices = json::array();
  for (const auto& s : samples) {
    times.push_back(s.t);
    json flat = json::array();
    for (const auto& z : s.h.entries()) flat.push_back({z.real(), z.imag()});
    matrices.push_back(std::move(flat));
  }
  doc["times"] = std::move(times);
  doc["matrices"] = std::move(matrices);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  out << doc.dump() << '\n';
}

HamiltonianSource random_smooth_hamiltonian(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorCode::InvalidParams, "dim must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  struct Term {
    double freq;
    double phase;
    ComplexMatrix b;
  };
  std::vector<Term> terms;
  for (int j = 0; j < 3; ++j) {
    ComplexMatrix b(dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) b(r, c) = cplx{gauss(rng), gauss(rng)};
    b = hermitian_part(b);
    b *= 0.3 / b.frobenius_norm();
    terms.push_back({0.05 + 0.25 * uniform(rng), 2.0 * std::numbers::pi * uniform(rng), b});
  }
  ComplexMatrix base(dim);
  for (std::size_t i = 0; i < dim; ++i) base(i, i) = 2.0 * static_cast<double>(i);

  auto rule = [base, terms](double t) {
    ComplexMatrix h = base;
    for (const auto& term : terms) h += cplx{std::sin(term.freq * t + term.phase)} * term.b;
    return h;
  };
  std::ostringstream label;
  label << "random" << dim << "#" << seed;
  return HamiltonianSource(dim, std::move(rule), {}, label.str());
}

std::vector<HamiltonianSample> sample_source(const HamiltonianSource& src, double t_start,
                                             double dt, std::size_t count) {
  std::vector<HamiltonianSample> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t_start + static_cast<double>(k) * dt;
    out.push_back({t, src(t)});
  }
  return out;
}

}  // namespace adlab
