// SPDX-License-Identifier: Apache-2.0
#include "flagwalk/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flagwalk/stats.hpp"

namespace flagwalk {

std::string to_string(EnsembleKind kind) {
  return kind == EnsembleKind::gaussian ? "gaussian" : "rademacher";
}

EnsembleKind ensemble_from_string(const std::string& name) {
  if (name == "gaussian") return EnsembleKind::gaussian;
  if (name == "rademacher") return EnsembleKind::rademacher;
  throw InputError("unknown ensemble '" + name + "' (expected gaussian|rademacher)");
}

void sample_w_into(const WignerSpec& spec, Rng& rng, ComplexMatrix& W) {
  W.resize(spec.L, spec.L);
  sample_w_fill(spec, rng, W);
}

ComplexMatrix sample_w(const WignerSpec& spec, Rng& rng) {
  ComplexMatrix W;
  sample_w_into(spec, rng, W);
  return W;
}

namespace {

constexpr std::int64_t kChunks = 64;

// Entrywise accumulators for a fixed list of complex-valued quantities.
struct EntryStats {
  std::vector<Accumulator> re, im;
  explicit EntryStats(std::size_t n = 0) : re(n), im(n) {}
  void add(std::size_t i, Complex z) {
    re[i].add(z.real());
    im[i].add(z.imag());
  }
  void merge(const EntryStats& o) {
    for (std::size_t i = 0; i < re.size(); ++i) {
      re[i].merge(o.re[i]);
      im[i].merge(o.im[i]);
    }
  }
};

void record(IdentityDeviation& d, double dev, double se) {
  const double a = std::abs(dev);
  double sigma = 0.0;
  if (se > 0.0) {
    sigma = a / se;
  } else if (a > 1e-13) {
    sigma = std::numeric_limits<double>::infinity();
  }
  if (sigma > d.max_sigma || (sigma == d.max_sigma && a > d.max_abs_deviation)) {
    d.max_sigma = sigma;
  }
  if (a > d.max_abs_deviation) {
    d.max_abs_deviation = a;
    d.stderr_at_max = se;
  }
}

template <class SampleFn>
EntryStats run_chunks(std::size_t entries, std::int64_t nsamples, std::uint64_t seed, Exec exec,
                      SampleFn&& fn) {
  const auto parts = map_replicas(
      kChunks,
      [&](std::int64_t c) {
        Rng rng = make_stream(seed, Stream::ensemble, static_cast<std::uint64_t>(c));
        const std::int64_t begin = nsamples * c / kChunks;
        const std::int64_t end = nsamples * (c + 1) / kChunks;
        EntryStats st(entries);
        ComplexMatrix W;
        for (std::int64_t s = begin; s < end; ++s) fn(rng, W, st);
        return st;
      },
      exec);
  EntryStats total(entries);
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace

bool MomentReport::passes(double sigma) const {
  return std::all_of(identities.begin(), identities.end(),
                     [&](const IdentityDeviation& d) { return d.max_sigma <= sigma; });
}

MomentReport verify_w_identities(const WignerSpec& spec, const ComplexMatrix& P,
                                 const ComplexMatrix& Q, std::int64_t nsamples,
                                 std::uint64_t seed, Exec exec) {
  const int L = spec.L;
  if (P.rows() != L || P.cols() != L || Q.rows() != L || Q.cols() != L) {
    throw DimensionError("verify_w_identities: P and Q must be L x L");
  }
  const std::size_t LL = static_cast<std::size_t>(L) * static_cast<std::size_t>(L);
  // Layout: [W | W^2 | scalar | WPW | WQ conj(W)]
  const std::size_t off_w2 = LL, off_tr = 2 * LL, off_wpw = 2 * LL + 1, off_wqw = 3 * LL + 1;
  const std::size_t entries = 4 * LL + 1;

  const EntryStats st = run_chunks(entries, nsamples, seed, exec,
                                   [&](Rng& rng, ComplexMatrix& W, EntryStats& s) {
                                     sample_w_into(spec, rng, W);
                                     const ComplexMatrix W2 = W * W;
                                     const ComplexMatrix WPW = W * P * W;
                                     const ComplexMatrix WQW = W * Q * W.conjugate();
                                     const Complex tr = (P * W).trace() * (Q * W).trace();
                                     for (int j = 0; j < L; ++j)
                                       for (int i = 0; i < L; ++i) {
                                         const std::size_t e = static_cast<std::size_t>(j * L + i);
                                         s.add(e, W(i, j));
                                         s.add(off_w2 + e, W2(i, j));
                                         s.add(off_wpw + e, WPW(i, j));
                                         s.add(off_wqw + e, WQW(i, j));
                                       }
                                     s.add(off_tr, tr);
                                   });

  MomentReport rep;
  rep.nsamples = nsamples;
  IdentityDeviation dw{"E(W) = 0"}, dw2{"E(W^2) = L 1"}, dtr{"E(Tr(PW) Tr(QW)) = Tr(PQ)"},
      dwpw{"E(W P W) = Tr(P) 1"}, dwqw{"E(W Q conj(W)) = Q^t"};
  const Complex trP = P.trace();
  const Complex trPQ = (P * Q).trace();
  auto check = [&](IdentityDeviation& d, std::size_t e, Complex target) {
    record(d, st.re[e].mean - target.real(), st.re[e].stderr_of_mean());
    record(d, st.im[e].mean - target.imag(), st.im[e].stderr_of_mean());
  };
  for (int j = 0; j < L; ++j)
    for (int i = 0; i < L; ++i) {
      const std::size_t e = static_cast<std::size_t>(j * L + i);
      const double delta = i == j ? 1.0 : 0.0;
      check(dw, e, 0.0);
      check(dw2, off_w2 + e, static_cast<double>(L) * delta);
      check(dwpw, off_wpw + e, trP * delta);
      check(dwqw, off_wqw + e, Q(j, i));
    }
  check(dtr, off_tr, trPQ);
  rep.identities = {dw, dw2, dtr, dwpw, dwqw};
  return rep;
}

MomentReport verify_variance_conditions(const WignerSpec& spec, std::int64_t nsamples,
                                        std::uint64_t seed, Exec exec) {
  const int L = spec.L;
  const std::size_t npairs = static_cast<std::size_t>(L * (L - 1) / 2);
  // Layout: [W_ij^2 (i<j) | |W_ij|^2 (i<j) | W_kk^2]
  const std::size_t entries = 2 * npairs + static_cast<std::size_t>(L);
  const EntryStats st = run_chunks(entries, nsamples, seed, exec,
                                   [&](Rng& rng, ComplexMatrix& W, EntryStats& s) {
                                     sample_w_into(spec, rng, W);
                                     std::size_t e = 0;
                                     for (int i = 0; i < L; ++i)
                                       for (int j = i + 1; j < L; ++j, ++e) {
                                         s.add(e, W(i, j) * W(i, j));
                                         s.add(npairs + e, std::norm(W(i, j)));
                                       }
                                     for (int k = 0; k < L; ++k)
                                       s.add(2 * npairs + static_cast<std::size_t>(k),
                                             W(k, k) * W(k, k));
                                   });
  MomentReport rep;
  rep.nsamples = nsamples;
  IdentityDeviation d_sq{"E(W_ij^2) = 0"}, d_abs{"E(|W_ij|^2) = 1"}, d_diag{"E(W_kk^2) = 1"};
  auto check = [&](IdentityDeviation& d, std::size_t e, double target) {
    record(d, st.re[e].mean - target, st.re[e].stderr_of_mean());
    record(d, st.im[e].mean, st.im[e].stderr_of_mean());
  };
  for (std::size_t e = 0; e < npairs; ++e) {
    check(d_sq, e, 0.0);
    check(d_abs, npairs + e, 1.0);
  }
  for (int k = 0; k < L; ++k) check(d_diag, 2 * npairs + static_cast<std::size_t>(k), 1.0);
  rep.identities = {d_sq, d_abs, d_diag};
  return rep;
}

WhiteningResult whiten(const RealMatrix& cov, const WhitenOptions& opts) {
  const auto n = cov.rows();
  if (cov.cols() != n || n == 0) throw InputError("whiten: covariance must be square and nonempty");
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InputError("whiten: covariance is not symmetric");
  }
  const RealMatrix sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(sym, Eigen::EigenvaluesOnly);
  const double emin = eig.eigenvalues().minCoeff();
  const double emax = eig.eigenvalues().maxCoeff();
  if (emin < -1e-10 * std::max(1.0, emax)) {
    throw InputError("whiten: covariance is not positive semidefinite (min eigenvalue " +
                     std::to_string(emin) + ")");
  }

  WhiteningResult out;
  out.covariance = sym;
  const double cutoff = opts.rank_cutoff * std::max(emax, 0.0);

  // Coordinates are scanned in order; a_k is kept when its residual variance
  // after projection on the kept predecessors exceeds the cutoff.
  std::vector<int> kept;
  for (int k = 0; k < n; ++k) {
    double resid = sym(k, k);
    if (!kept.empty()) {
      const auto r = static_cast<Eigen::Index>(kept.size());
      RealMatrix S(r, r);
      RealVector c(r);
      for (Eigen::Index a = 0; a < r; ++a) {
        c(a) = sym(kept[static_cast<std::size_t>(a)], k);
        for (Eigen::Index b = 0; b < r; ++b)
          S(a, b) = sym(kept[static_cast<std::size_t>(a)], kept[static_cast<std::size_t>(b)]);
      }
      resid -= c.dot(S.ldlt().solve(c));
    }
    if (resid > cutoff) kept.push_back(k);
  }
  if (kept.empty()) throw InputError("whiten: covariance is numerically zero");
  const auto r = static_cast<Eigen::Index>(kept.size());

  RealMatrix Skk(r, r), Snk(n, r);
  for (Eigen::Index b = 0; b < r; ++b) {
    for (Eigen::Index a = 0; a < r; ++a)
      Skk(a, b) = sym(kept[static_cast<std::size_t>(a)], kept[static_cast<std::size_t>(b)]);
    for (Eigen::Index i = 0; i < n; ++i) Snk(i, b) = sym(i, kept[static_cast<std::size_t>(b)]);
  }
  // Skk = Lk D Lk^t with Lk unit lower triangular.
  Eigen::LLT<RealMatrix> llt(Skk);
  const RealMatrix C = llt.matrixL();
  const RealVector d = C.diagonal().array().square();
  RealMatrix Lk = C;
  for (Eigen::Index j = 0; j < r; ++j) Lk.col(j) /= C(j, j);
  const RealMatrix Lambda =
      Lk.triangularView<Eigen::UnitLower>().solve(RealMatrix::Identity(r, r));

  // Dropped coordinates are linear in the kept ones: a = M a_kept.
  const RealMatrix M = llt.solve(Snk.transpose()).transpose();
  RealMatrix B = M * Lk;
  RealMatrix map = RealMatrix::Zero(r, n);
  for (Eigen::Index b = 0; b < r; ++b) map.col(kept[static_cast<std::size_t>(b)]) = Lambda.col(b);

  out.variances = d;
  if (opts.unit_variance) {
    for (Eigen::Index i = 0; i < r; ++i) {
      const double s = std::sqrt(d(i));
      B.col(i) *= s;
      map.row(i) /= s;
    }
    out.variances = RealVector::Ones(r);
  }
  out.vectors = std::move(B);
  out.coefficient_map = std::move(map);
  out.kept = std::move(kept);
  out.lambda = Lambda;
  return out;
}

WhiteningResult whiten_samples(const std::vector<RealVector>& samples, const WhitenOptions& opts) {
  if (samples.size() < 2) throw InputError("whiten: need at least two samples");
  const auto n = samples.front().size();
  RealMatrix cov = RealMatrix::Zero(n, n);
  for (const auto& a : samples) {
    if (a.size() != n) throw InputError("whiten: samples have inconsistent dimension");
    cov.noalias() += a * a.transpose();
  }
  cov /= static_cast<double>(samples.size());
  return whiten(cov, opts);
}

}  // namespace flagwalk
