// SPDX-License-Identifier: Apache-2.0
//
// Second-order quantities of the weak-coupling expansion: the closed-form
// Lyapunov spectrum, the class function F_p, Fourier analysis along the
// rotation orbit, the generator applied by finite differences, and the
// divergence of the perturbation vector fields.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "flagwalk/dynamics.hpp"
#include "flagwalk/matrix_core.hpp"
#include "flagwalk/model_wires.hpp"
#include "flagwalk/parallel.hpp"
#include "flagwalk/stats.hpp"

namespace flagwalk {

using ComplexFrameFunction = std::function<Complex(const IsotropicFrame&)>;

/// lambda^2 (1 + 2(L - p)) / (8 sin^2 k). Throws BandEdgeError for |E| >= 2,
/// InputError unless 1 <= p <= L.
double gamma_perturbative(int L, int p, double E, double lambda);
/// gamma_1 + ... + gamma_p = lambda^2 p (2L - p) / (8 sin^2 k)
double gamma_partial_sum(int L, int p, double E, double lambda);
/// Constant gap gamma_p - gamma_{p+1} = lambda^2 / (4 sin^2 k).
double gamma_spacing(double E, double lambda);

struct PerturbativePrediction {
  int L = 1;
  double E = 0.0, lambda = 0.0;
  std::vector<double> exponents;     ///< gamma_1 > ... > gamma_L
  std::vector<double> partial_sums;  ///< gamma_1 + ... + gamma_p
};

PerturbativePrediction perturbative_prediction(int L, double E, double lambda);

/// Trace of the leading p x p block.
Complex trace_p(const ComplexMatrix& M, int p);

/// F_p = 2Lp + L Tr_p(V*U + U*V) + (Tr_p U*V)^2 / 2 + (Tr_p V*U)^2 / 2 - p^2.
/// Throws InputError unless 1 <= p <= L, or if the imaginary residue exceeds 1e-12.
double class_function_Fp(const IsotropicFrame& x, int p);

/// R_theta . (U, V) = (e^{-i theta} U, e^{i theta} V)
IsotropicFrame rotate(const IsotropicFrame& x, double theta);

/// Coefficients f_j, j = -J..J (index j + J), of theta -> f(R_theta . x) from a
/// grid-point trapezoidal rule. Throws InputError unless grid >= 4J + 1.
std::vector<Complex> fourier_coeffs(const ComplexFrameFunction& f, const IsotropicFrame& x, int J,
                                    int grid);
/// The frame function x -> f_j(x).
ComplexFrameFunction fourier_component(ComplexFrameFunction f, int j, int grid);

/// Central second difference of f along t -> exp(tX) . x.
Complex second_difference(const ComplexFrameFunction& f, const IsotropicFrame& x,
                          const ComplexMatrix& X, double h);

/// (L f)(x) = E_W d^2/dt^2 f(exp(t P(W)) . x) by Monte Carlo over W.
/// Throws InputError unless h is in [1e-4, 1e-2] and nsamples >= 2.
Estimate apply_generator(const WiresModel& model, const FrameFunction& f, const IsotropicFrame& x,
                         double h, std::int64_t nsamples, Rng& rng);

/// Averaged generator: additionally averages over conjugates R_theta P R_theta^{-1}
/// with the rotation group's Haar measure (exact nodes; `min_nodes` uniform
/// nodes when the group is the full circle).
Estimate averaged_generator(const WiresModel& model, const FrameFunction& f,
                            const IsotropicFrame& x, double h, std::int64_t nsamples, Rng& rng,
                            int min_nodes = 16);

/// Common-random-number form: a fixed list of W draws, complex-valued f.
/// Returns the sample mean over `Ws`.
Complex averaged_generator_fixed(const WiresModel& model, const ComplexFrameFunction& f,
                                 const IsotropicFrame& x, double h,
                                 const std::vector<ComplexMatrix>& Ws, int min_nodes = 16);
Complex apply_generator_fixed(const WiresModel& model, const ComplexFrameFunction& f,
                              const IsotropicFrame& x, double h,
                              const std::vector<ComplexMatrix>& Ws);

/// Closed form 2 Re Tr(C U* B V) with C = diag(2j - 1 - 2L), j = 1..L.
double divergence_dp(const IsotropicFrame& x, const ComplexMatrix& B, int L);
/// Upper-right L x L block of a 2L x 2L matrix.
ComplexMatrix upper_right(const ComplexMatrix& P);

/// Orthonormal basis (u_i, v_i) of the complement of the gauge algebra
/// {(iD, iD)} in u(L) x u(L), under Re Tr(u* u') + Re Tr(v* v').
std::vector<std::pair<ComplexMatrix, ComplexMatrix>> horizontal_basis(int L);

/// Coordinates of the tangent vector d/dt|0 exp(tX) . x in `horizontal_basis`,
/// by a central difference of step h.
RealVector tangent_coordinates(const ComplexMatrix& X, const IsotropicFrame& x, double h = 1e-5);

/// Divergence of the vector field x -> d/dt|0 exp(tX) . x with respect to the
/// Haar volume: sum_i delta_{S_i} <S_i, X_hat>, both derivatives by central
/// differences (inner step h_inner, outer step h_outer).
double divergence_numeric(const ComplexMatrix& X, const IsotropicFrame& x, double h_inner = 1e-5,
                          double h_outer = 1e-4);

/// Monte Carlo of E_x[ w(x) E_theta E_W (d_X div_X + div_X^2)(x) ] with
/// X = R_theta P(W) R_theta^{-1}, x Haar, and weight w = Re Tr((U*V)^2).
/// The unweighted Haar mean vanishes identically; the weight picks up the
/// frequency-4 part that survives only when E_theta e^{4 i theta} != 0.
Estimate check_rho0_haar(const WiresModel& model, std::int64_t nsamples, std::uint64_t seed,
                         Exec exec = Exec::parallel, double h = 1e-4);

/// E_Haar[f] over independent Haar (U, V).
Estimate haar_expectation(int L, const FrameFunction& f, std::int64_t nsamples,
                          std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace flagwalk
