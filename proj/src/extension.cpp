#include "sepgram/errors.hpp"
#include "sepgram/states.hpp"
#include "sepgram/twoxn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace sepgram {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ComplexMatrix pad_cols(const ComplexMatrix& m, Eigen::Index cols) {
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), cols);
  out.leftCols(m.cols()) = m;
  return out;
}

ComplexMatrix pad_rows(const ComplexMatrix& m, Eigen::Index rows) {
  ComplexMatrix out = ComplexMatrix::Zero(rows, m.cols());
  out.topRows(m.rows()) = m;
  return out;
}

// Least squares over real unknowns x for min || r0 + sum_j x_j cols_j ||,
// complex vectors realified.
struct RealLs {
  Eigen::VectorXd x;
  double residual = 0.0;
};

RealLs real_least_squares(const ComplexVector& r0, const std::vector<ComplexVector>& cols) {
  const Eigen::Index rows = r0.size();
  Eigen::MatrixXd a(2 * rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    a.col(static_cast<Eigen::Index>(j)).head(rows) = cols[j].real();
    a.col(static_cast<Eigen::Index>(j)).tail(rows) = cols[j].imag();
  }
  Eigen::VectorXd rhs(2 * rows);
  rhs.head(rows) = -r0.real();
  rhs.tail(rows) = -r0.imag();
  RealLs out;
  out.x = a.colPivHouseholderQr().solve(rhs);
  out.residual = (a * out.x - rhs).norm();
  return out;
}

// ---------------------------------------------------------------------------
// p = p~ = 1

struct PhaseFit {
  double theta = 0.0;
  cplx s;
  double residual = 0.0;
};

PhaseFit fit_phase(const ExtensionProblem& ep, double theta) {
  const ComplexVector lam = ep.lam.col(0);
  const ComplexVector lt = std::polar(1.0, theta) * ep.lam_tilde0.row(0).adjoint();
  const ComplexVector r0 = ep.b * lt - ep.b.adjoint() * lam;
  const RealLs ls = real_least_squares(r0, {lam - lt, cplx(0.0, -1.0) * (lt + lam)});
  return {theta, cplx(ls.x[0], ls.x[1]), ls.residual};
}

PhaseFit golden_phase(const ExtensionProblem& ep, double lo, double hi) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  PhaseFit f1 = fit_phase(ep, x1);
  PhaseFit f2 = fit_phase(ep, x2);
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    if (f1.residual <= f2.residual) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = fit_phase(ep, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = fit_phase(ep, x2);
    }
  }
  return f1.residual <= f2.residual ? f1 : f2;
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt over (U, S) for || [M, M^H] ||_F^2.

struct LmState {
  ComplexMatrix u;  // q x q
  ComplexMatrix s;  // q x q
};

struct LmProblem {
  ComplexMatrix b;
  ComplexMatrix lam;   // N x q
  ComplexMatrix lt0;   // q x N
  Eigen::Index n = 0;
  Eigen::Index q = 0;

  explicit LmProblem(const ExtensionProblem& ep) {
    n = ep.b.rows();
    q = ep.q();
    b = ep.b;
    lam = pad_cols(ep.lam, q);
    lt0 = pad_rows(ep.lam_tilde0, q);
  }

  ComplexMatrix assemble(const LmState& st) const {
    ComplexMatrix m(n + q, n + q);
    m.topLeftCorner(n, n) = b;
    m.topRightCorner(n, q) = lam;
    m.bottomLeftCorner(q, n) = st.u * lt0;
    m.bottomRightCorner(q, q) = st.s;
    return m;
  }
};

ComplexMatrix comm(const ComplexMatrix& m) { return m * m.adjoint() - m.adjoint() * m; }

// Upper triangle of a Hermitian matrix as a real vector with Frobenius weights.
Eigen::VectorXd pack(const ComplexMatrix& c) {
  const Eigen::Index k = c.rows();
  Eigen::VectorXd out(k * k);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < k; ++j) {
    out[idx++] = c(j, j).real();
    for (Eigen::Index i = 0; i < j; ++i) {
      out[idx++] = std::sqrt(2.0) * c(i, j).real();
      out[idx++] = std::sqrt(2.0) * c(i, j).imag();
    }
  }
  return out;
}

// Hermitian generator for parameter index t of the U block.
ComplexMatrix generator(Eigen::Index q, Eigen::Index t) {
  ComplexMatrix h = ComplexMatrix::Zero(q, q);
  if (t < q) {
    h(t, t) = 1.0;
    return h;
  }
  t -= q;
  Eigen::Index pair = t / 2;
  Eigen::Index i = 0;
  Eigen::Index j = 1;
  for (Eigen::Index count = 0; count < pair; ++count) {
    if (++j == q) {
      ++i;
      j = i + 1;
    }
  }
  if (t % 2 == 0) {
    h(i, j) = h(j, i) = 1.0;
  } else {
    h(i, j) = cplx(0.0, 1.0);
    h(j, i) = cplx(0.0, -1.0);
  }
  return h;
}

ExtensionSolution to_solution(const ExtensionProblem& ep, const LmProblem& lp, const LmState& st) {
  ExtensionSolution sol;
  sol.b = ep.b;
  sol.lam = lp.lam;
  sol.lam_tilde = st.u * lp.lt0;
  sol.s = st.s;
  sol.mixing = st.u;
  sol.residual = normality_residual(sol.mhat());
  return sol;
}

LmState run_lm(const LmProblem& lp, LmState st, int max_iterations) {
  const Eigen::Index n = lp.n;
  const Eigen::Index q = lp.q;
  const Eigen::Index params = 3 * q * q;
  if (q == 0) return st;

  ComplexMatrix m = lp.assemble(st);
  Eigen::VectorXd r = pack(comm(m));
  double cost = r.squaredNorm();
  double mu = -1.0;
  const double scale4 = std::pow(std::max(m.squaredNorm(), 1e-300), 2);

  for (int it = 0; it < max_iterations; ++it) {
    if (cost <= 1e-32 * scale4) break;
    Eigen::MatrixXd jac(r.size(), params);
    for (Eigen::Index t = 0; t < params; ++t) {
      ComplexMatrix dm = ComplexMatrix::Zero(n + q, n + q);
      if (t < 2 * q * q) {
        const Eigen::Index e = t % (q * q);
        dm(n + e % q, n + e / q) = t < q * q ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
      } else {
        dm.bottomLeftCorner(q, n) = cplx(0.0, 1.0) * st.u * generator(q, t - 2 * q * q) * lp.lt0;
      }
      const ComplexMatrix dc = dm * m.adjoint() + m * dm.adjoint() - dm.adjoint() * m - m.adjoint() * dm;
      jac.col(t) = pack(dc);
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (mu < 0.0) mu = 1e-3 * std::max(jtj.diagonal().maxCoeff(), 1e-300);

    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += mu;
      const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      LmState trial = st;
      for (Eigen::Index e = 0; e < q * q; ++e) {
        trial.s(e % q, e / q) += cplx(step[e], step[q * q + e]);
      }
      ComplexMatrix h = ComplexMatrix::Zero(q, q);
      for (Eigen::Index t = 0; t < q * q; ++t) h += step[2 * q * q + t] * generator(q, t);
      trial.u = st.u * expi_hermitian(h);
      const ComplexMatrix tm = lp.assemble(trial);
      const Eigen::VectorXd tr = pack(comm(tm));
      const double tcost = tr.squaredNorm();
      if (tcost < cost) {
        const double drop = cost - tcost;
        st = trial;
        m = tm;
        r = tr;
        cost = tcost;
        mu = std::max(mu / 3.0, 1e-300);
        accepted = true;
        if (drop <= 1e-16 * cost && cost > 0.0) it = max_iterations;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
  }
  return st;
}

LmState random_start(const LmProblem& lp, std::uint64_t seed) {
  Rng rng(seed);
  LmState st;
  const double norm = std::max(lp.b.norm(), 1.0) / std::sqrt(static_cast<double>(lp.n));
  st.u = rng.haar_unitary(static_cast<int>(lp.q));
  st.s = norm * rng.gaussian_matrix(static_cast<int>(lp.q), static_cast<int>(lp.q));
  return st;
}

std::uint64_t start_seed(std::uint64_t seed, int index) {
  return seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(index) * 0xBF58476D1CE4E5B9ull + 1;
}

}  // namespace

ExtensionResult solve_extension_55(const ExtensionProblem& ep, double tol) {
  if (ep.p != 1 || ep.p_tilde != 1) throw Error(ErrorCode::RankMismatch, "the (5,5) solver needs p = p~ = 1");
  const double denom = std::max(ep.b.norm() * (ep.lam.norm() + ep.lam_tilde0.norm()), 1e-300);

  constexpr int kGrid = 720;
  std::vector<PhaseFit> grid;
  grid.reserve(kGrid);
  for (int i = 0; i < kGrid; ++i) grid.push_back(fit_phase(ep, kTwoPi * i / kGrid));

  std::vector<int> minima;
  for (int i = 0; i < kGrid; ++i) {
    const double here = grid[i].residual;
    if (here <= grid[(i + kGrid - 1) % kGrid].residual && here <= grid[(i + 1) % kGrid].residual) minima.push_back(i);
  }
  std::stable_sort(minima.begin(), minima.end(), [&](int x, int y) { return grid[x].residual < grid[y].residual; });
  if (minima.size() > 8) minima.resize(8);

  PhaseFit best = grid[minima.front()];
  const double step = kTwoPi / kGrid;
  for (int i : minima) {
    const PhaseFit refined = golden_phase(ep, grid[i].theta - step, grid[i].theta + step);
    if (refined.residual < best.residual) best = refined;
  }

  ExtensionResult out;
  out.method = "phase_search";
  out.residual = best.residual / denom;
  ExtensionSolution& sol = out.solution;
  sol.b = ep.b;
  sol.lam = ep.lam;
  sol.lam_tilde = std::polar(1.0, -best.theta) * ep.lam_tilde0;
  sol.s = ComplexMatrix::Constant(1, 1, best.s);
  sol.mixing = ComplexMatrix::Constant(1, 1, std::polar(1.0, -best.theta));
  sol.params = {std::remainder(best.theta, kTwoPi), best.s.real(), best.s.imag()};
  sol.residual = normality_residual(sol.mhat());
  out.status = out.residual <= tol ? ExtensionStatus::Solved : ExtensionStatus::NoSolution;
  return out;
}

ExtensionResult solve_extension_56(const ExtensionProblem& ep, double tol) {
  if (ep.p != 1 || ep.p_tilde != 2) throw Error(ErrorCode::RankMismatch, "the (5,6) solver needs p = 1, p~ = 2");
  const LmProblem lp(ep);
  const Eigen::Index n = lp.n;
  const ComplexMatrix lt0 = lp.lt0;

  // Inner problem: the upper-right block of [M, M^H] is real-linear in S.
  auto inner = [&](double theta, double phi, double chi, LmState* state) {
    ComplexMatrix u(2, 2);
    u(0, 0) = std::polar(std::cos(theta), chi);
    u(0, 1) = std::polar(std::sin(theta), chi + phi);
    u(1, 0) = -std::polar(std::sin(theta), -phi);
    u(1, 1) = std::cos(theta);
    const ComplexMatrix lt = u * lt0;
    const ComplexMatrix r0m = ep.b * lt.adjoint() - ep.b.adjoint() * lp.lam;
    const ComplexVector r0 = Eigen::Map<const ComplexVector>(r0m.data(), r0m.size());
    std::vector<ComplexVector> cols;
    for (int t = 0; t < 8; ++t) {
      ComplexMatrix e = ComplexMatrix::Zero(2, 2);
      e((t % 4) % 2, (t % 4) / 2) = t < 4 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
      const ComplexMatrix lin = lp.lam * e.adjoint() - lt.adjoint() * e;
      cols.emplace_back(Eigen::Map<const ComplexVector>(lin.data(), lin.size()));
    }
    const RealLs ls = real_least_squares(r0, cols);
    if (state) {
      state->u = u;
      state->s.resize(2, 2);
      for (int t = 0; t < 4; ++t) state->s(t % 2, t / 2) = cplx(ls.x[t], ls.x[t + 4]);
    }
    return ls.residual;
  };

  struct Candidate {
    double residual;
    double theta, phi, chi;
  };
  constexpr int kTheta = 32, kPhi = 32, kChi = 16;
  std::vector<Candidate> cands;
  cands.reserve(kTheta * kPhi * kChi);
  for (int i = 0; i < kTheta; ++i) {
    const double theta = 0.5 * std::numbers::pi * (i + 0.5) / kTheta;
    for (int j = 0; j < kPhi; ++j) {
      const double phi = kTwoPi * j / kPhi;
      for (int l = 0; l < kChi; ++l) {
        const double chi = kTwoPi * l / kChi;
        cands.push_back({inner(theta, phi, chi, nullptr), theta, phi, chi});
      }
    }
  }
  const std::size_t keep = std::min<std::size_t>(8, cands.size());
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                    [](const Candidate& x, const Candidate& y) {
                      if (x.residual != y.residual) return x.residual < y.residual;
                      return std::tie(x.theta, x.phi, x.chi) < std::tie(y.theta, y.phi, y.chi);
                    });

  ExtensionResult out;
  out.method = "mixing_grid+lm";
  out.residual = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < keep; ++c) {
    LmState st;
    inner(cands[c].theta, cands[c].phi, cands[c].chi, &st);
    st = run_lm(lp, st, 300);
    ExtensionSolution sol = to_solution(ep, lp, st);
    sol.params = {cands[c].theta, cands[c].phi, cands[c].chi};
    ++out.starts;
    if (sol.residual < out.residual) {
      out.residual = sol.residual;
      out.solution = sol;
    }
    if (out.residual <= 1e-12) break;
  }
  (void)n;
  out.status = out.residual <= tol ? ExtensionStatus::Solved : ExtensionStatus::NoSolution;
  return out;
}

ExtensionSolution polish_extension(const ExtensionProblem& ep, const ExtensionSolution& start, int max_iterations) {
  const LmProblem lp(ep);
  LmState st{start.mixing, start.s};
  if (st.u.rows() != lp.q || st.s.rows() != lp.q) throw Error(ErrorCode::SizeMismatch, "start does not match the problem width");
  ExtensionSolution sol = to_solution(ep, lp, run_lm(lp, st, max_iterations));
  sol.params = start.params;
  return sol;
}

ExtensionResult solve_extension_general(const ExtensionProblem& ep, const GeneralOptions& options) {
  const LmProblem lp(ep);
  ExtensionResult out;
  out.method = "lm_multistart";
  if (lp.q == 0) {
    ExtensionSolution& sol = out.solution;
    sol.b = ep.b;
    sol.lam = ComplexMatrix(ep.b.rows(), 0);
    sol.lam_tilde = ComplexMatrix(0, ep.b.rows());
    sol.s = ComplexMatrix(0, 0);
    sol.mixing = ComplexMatrix(0, 0);
    sol.residual = normality_residual(ep.b);
    out.residual = sol.residual;
    out.status = sol.residual <= options.accept ? ExtensionStatus::Solved : ExtensionStatus::Undecided;
    return out;
  }

  const int budget = std::max(options.budget, 1);
  const int jobs = std::clamp(options.jobs, 1, budget);
  std::vector<ExtensionSolution> results(static_cast<std::size_t>(budget));
  auto run = [&](int index) {
    const LmState st = run_lm(lp, random_start(lp, start_seed(options.seed, index)), options.max_iterations);
    results[static_cast<std::size_t>(index)] = to_solution(ep, lp, st);
  };

  // Batches keep the choice independent of `jobs`: the lowest-index start
  // that converges wins.
  int best = -1;
  for (int first = 0; first < budget; first += jobs) {
    const int last = std::min(budget, first + jobs);
    if (last - first == 1) {
      run(first);
    } else {
      std::vector<std::thread> pool;
      for (int i = first; i < last; ++i) pool.emplace_back(run, i);
      for (std::thread& t : pool) t.join();
    }
    out.starts = last;
    for (int i = first; i < last; ++i) {
      if (best < 0 || results[i].residual < results[best].residual) best = i;
      if (results[i].residual <= options.accept) {
        best = i;
        break;
      }
    }
    if (results[best].residual <= options.accept) break;
  }
  out.solution = results[best];
  out.residual = out.solution.residual;
  out.status = out.residual <= options.accept ? ExtensionStatus::Solved : ExtensionStatus::Undecided;
  return out;
}

}  // namespace sepgram
