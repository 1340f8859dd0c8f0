// SPDX-License-Identifier: Apache-2.0
#include "flagwalk/perturbation.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace flagwalk {

namespace {

void check_p(int L, int p) {
  if (p < 1 || p > L) {
    throw InputError("p must satisfy 1 <= p <= L (got p = " + std::to_string(p) +
                     ", L = " + std::to_string(L) + ")");
  }
}

double sin2k(double E) {
  const double s = std::sin(wavenumber(E));
  return s * s;
}

}  // namespace

double gamma_perturbative(int L, int p, double E, double lambda) {
  check_p(L, p);
  return lambda * lambda * (1.0 + 2.0 * (L - p)) / (8.0 * sin2k(E));
}

double gamma_partial_sum(int L, int p, double E, double lambda) {
  check_p(L, p);
  return lambda * lambda * p * (2.0 * L - p) / (8.0 * sin2k(E));
}

double gamma_spacing(double E, double lambda) { return lambda * lambda / (4.0 * sin2k(E)); }

PerturbativePrediction perturbative_prediction(int L, double E, double lambda) {
  if (L < 1) throw InputError("perturbative_prediction: L must be >= 1");
  PerturbativePrediction out{L, E, lambda, {}, {}};
  for (int p = 1; p <= L; ++p) {
    out.exponents.push_back(gamma_perturbative(L, p, E, lambda));
    out.partial_sums.push_back(gamma_partial_sum(L, p, E, lambda));
  }
  return out;
}

Complex trace_p(const ComplexMatrix& M, int p) { return M.diagonal().head(p).sum(); }

double class_function_Fp(const IsotropicFrame& x, int p) {
  const int L = x.dim();
  check_p(L, p);
  const ComplexMatrix UV = x.U.adjoint() * x.V;
  const ComplexMatrix VU = UV.adjoint();
  const Complex a = trace_p(UV, p);
  const Complex b = trace_p(VU, p);
  const Complex F = 2.0 * L * p + static_cast<double>(L) * (a + b) + 0.5 * a * a + 0.5 * b * b -
                    static_cast<double>(p * p);
  if (std::abs(F.imag()) > 1e-12 * std::max(1.0, std::abs(F.real()))) {
    throw InputError("class_function_Fp: non-real value; frame is not unitary");
  }
  return F.real();
}

IsotropicFrame rotate(const IsotropicFrame& x, double theta) {
  const Complex e = std::polar(1.0, -theta);
  return {e * x.U, std::conj(e) * x.V};
}

std::vector<Complex> fourier_coeffs(const ComplexFrameFunction& f, const IsotropicFrame& x, int J,
                                    int grid) {
  if (J < 0 || grid < 4 * J + 1) {
    throw InputError("fourier_coeffs: grid must be >= 4J + 1 (J = " + std::to_string(J) +
                     ", grid = " + std::to_string(grid) + ")");
  }
  std::vector<Complex> values(static_cast<std::size_t>(grid));
  for (int g = 0; g < grid; ++g) {
    values[static_cast<std::size_t>(g)] = f(rotate(x, 2.0 * std::numbers::pi * g / grid));
  }
  std::vector<Complex> out(static_cast<std::size_t>(2 * J + 1));
  for (int j = -J; j <= J; ++j) {
    Complex acc = 0.0;
    for (int g = 0; g < grid; ++g) {
      acc += std::polar(1.0, -2.0 * std::numbers::pi * j * g / grid) *
             values[static_cast<std::size_t>(g)];
    }
    out[static_cast<std::size_t>(j + J)] = acc / static_cast<double>(grid);
  }
  return out;
}

ComplexFrameFunction fourier_component(ComplexFrameFunction f, int j, int grid) {
  return [f = std::move(f), j, grid](const IsotropicFrame& x) {
    Complex acc = 0.0;
    for (int g = 0; g < grid; ++g) {
      const double theta = 2.0 * std::numbers::pi * g / grid;
      acc += std::polar(1.0, -j * theta) * f(rotate(x, theta));
    }
    return acc / static_cast<double>(grid);
  };
}

Complex second_difference(const ComplexFrameFunction& f, const IsotropicFrame& x,
                          const ComplexMatrix& X, double h) {
  const Complex fp = f(act(expm(h * X), x));
  const Complex fm = f(act(expm(-h * X), x));
  return (fp - 2.0 * f(x) + fm) / (h * h);
}

namespace {

void check_generator_args(double h, std::int64_t nsamples) {
  if (!(h >= 1e-4 && h <= 1e-2)) throw InputError("generator: h must lie in [1e-4, 1e-2]");
  if (nsamples < 2) throw InputError("generator: nsamples must be >= 2");
}

ComplexFrameFunction complexify(const FrameFunction& f) {
  return [&f](const IsotropicFrame& x) { return Complex(f(x)); };
}

// Mean over the rotation-group nodes of the second difference along
// R_theta P R_theta^{-1}.
Complex rotation_averaged(const WiresModel& model, const ComplexFrameFunction& f,
                          const IsotropicFrame& x, double h, const ComplexMatrix& P,
                          const std::vector<double>& nodes) {
  Complex acc = 0.0;
  for (double theta : nodes) {
    const ComplexMatrix R = rotation_matrix(model.L(), theta);
    acc += second_difference(f, x, R * P * R.adjoint(), h);
  }
  return acc / static_cast<double>(nodes.size());
}

}  // namespace

Estimate apply_generator(const WiresModel& model, const FrameFunction& f, const IsotropicFrame& x,
                         double h, std::int64_t nsamples, Rng& rng) {
  check_generator_args(h, nsamples);
  const ComplexFrameFunction g = complexify(f);
  Accumulator acc;
  for (std::int64_t i = 0; i < nsamples; ++i) {
    acc.add(second_difference(g, x, model.perturbation(model.sample_w(rng)), h).real());
  }
  return to_estimate(acc);
}

Estimate averaged_generator(const WiresModel& model, const FrameFunction& f,
                            const IsotropicFrame& x, double h, std::int64_t nsamples, Rng& rng,
                            int min_nodes) {
  check_generator_args(h, nsamples);
  const ComplexFrameFunction g = complexify(f);
  const auto nodes = RotationGroup(model.k()).quadrature(4, min_nodes);
  Accumulator acc;
  for (std::int64_t i = 0; i < nsamples; ++i) {
    acc.add(rotation_averaged(model, g, x, h, model.perturbation(model.sample_w(rng)), nodes).real());
  }
  return to_estimate(acc);
}

Complex apply_generator_fixed(const WiresModel& model, const ComplexFrameFunction& f,
                              const IsotropicFrame& x, double h,
                              const std::vector<ComplexMatrix>& Ws) {
  check_generator_args(h, static_cast<std::int64_t>(Ws.size()));
  Complex acc = 0.0;
  for (const auto& W : Ws) acc += second_difference(f, x, model.perturbation(W), h);
  return acc / static_cast<double>(Ws.size());
}

Complex averaged_generator_fixed(const WiresModel& model, const ComplexFrameFunction& f,
                                 const IsotropicFrame& x, double h,
                                 const std::vector<ComplexMatrix>& Ws, int min_nodes) {
  check_generator_args(h, static_cast<std::int64_t>(Ws.size()));
  const auto nodes = RotationGroup(model.k()).quadrature(4, min_nodes);
  Complex acc = 0.0;
  for (const auto& W : Ws) acc += rotation_averaged(model, f, x, h, model.perturbation(W), nodes);
  return acc / static_cast<double>(Ws.size());
}

ComplexMatrix upper_right(const ComplexMatrix& P) {
  const auto L = P.rows() / 2;
  return P.topRightCorner(L, L);
}

double divergence_dp(const IsotropicFrame& x, const ComplexMatrix& B, int L) {
  if (x.dim() != L || B.rows() != L || B.cols() != L) {
    throw DimensionError("divergence_dp: B must be L x L for an L-frame");
  }
  const ComplexMatrix M = x.U.adjoint() * B * x.V;
  double acc = 0.0;
  for (int j = 1; j <= L; ++j) acc += (2.0 * j - 1.0 - 2.0 * L) * M(j - 1, j - 1).real();
  return 2.0 * acc;
}

std::vector<std::pair<ComplexMatrix, ComplexMatrix>> horizontal_basis(int L) {
  const double r2 = 1.0 / std::sqrt(2.0);
  const ComplexMatrix Z = ComplexMatrix::Zero(L, L);
  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> out;
  for (int j = 0; j < L; ++j) {
    for (int k = j + 1; k < L; ++k) {
      ComplexMatrix a = Z, s = Z;
      a(j, k) = r2;
      a(k, j) = -r2;
      s(j, k) = kI * r2;
      s(k, j) = kI * r2;
      out.emplace_back(a, Z);
      out.emplace_back(s, Z);
      out.emplace_back(Z, a);
      out.emplace_back(Z, s);
    }
  }
  for (int j = 0; j < L; ++j) {
    ComplexMatrix d = Z;
    d(j, j) = kI * r2;
    out.emplace_back(d, -d);
  }
  return out;
}

RealVector tangent_coordinates(const ComplexMatrix& X, const IsotropicFrame& x, double h) {
  const int L = x.dim();
  const IsotropicFrame xp = act(expm(h * X), x);
  const IsotropicFrame xm = act(expm(-h * X), x);
  const ComplexMatrix u = x.U.adjoint() * (xp.U - xm.U) / (2.0 * h);
  const ComplexMatrix v = x.V.adjoint() * (xp.V - xm.V) / (2.0 * h);
  const auto basis = horizontal_basis(L);
  RealVector c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    c(static_cast<Eigen::Index>(i)) = (basis[i].first.adjoint() * u).trace().real() +
                                      (basis[i].second.adjoint() * v).trace().real();
  }
  return c;
}

double divergence_numeric(const ComplexMatrix& X, const IsotropicFrame& x, double h_inner,
                          double h_outer) {
  const auto basis = horizontal_basis(x.dim());
  double div = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& [u, v] = basis[i];
    auto shifted = [&](double s) {
      return IsotropicFrame{x.U * expm(s * u), x.V * expm(s * v)};
    };
    const auto idx = static_cast<Eigen::Index>(i);
    const double cp = tangent_coordinates(X, shifted(h_outer), h_inner)(idx);
    const double cm = tangent_coordinates(X, shifted(-h_outer), h_inner)(idx);
    div += (cp - cm) / (2.0 * h_outer);
  }
  return div;
}

Estimate check_rho0_haar(const WiresModel& model, std::int64_t nsamples, std::uint64_t seed,
                         Exec exec, double h) {
  if (nsamples < 2) throw InputError("check_rho0_haar: nsamples must be >= 2");
  const int L = model.L();
  const auto nodes = RotationGroup(model.k()).quadrature(4, 16);
  auto sample = [&](Rng& rng) {
    const IsotropicFrame x = haar_frame(L, rng);
    const ComplexMatrix P = model.perturbation(model.sample_w(rng));
    double g = 0.0;
    for (double theta : nodes) {
      const ComplexMatrix R = rotation_matrix(L, theta);
      const ComplexMatrix X = R * P * R.adjoint();
      const ComplexMatrix B = upper_right(X);
      const double div = divergence_dp(x, B, L);
      const double dp = divergence_dp(act(expm(h * X), x), B, L);
      const double dm = divergence_dp(act(expm(-h * X), x), B, L);
      g += (dp - dm) / (2.0 * h) + div * div;
    }
    g /= static_cast<double>(nodes.size());
    const ComplexMatrix UV = x.U.adjoint() * x.V;
    return g * (UV * UV).trace().real();
  };
  return to_estimate(chunked_accumulate(nsamples, seed, Stream::divergence, sample, exec));
}

Estimate haar_expectation(int L, const FrameFunction& f, std::int64_t nsamples,
                          std::uint64_t seed, Exec exec) {
  if (nsamples < 2) throw InputError("haar_expectation: nsamples must be >= 2");
  auto sample = [&](Rng& rng) { return f(haar_frame(L, rng)); };
  return to_estimate(chunked_accumulate(nsamples, seed, Stream::haar, sample, exec));
}

}  // namespace flagwalk
