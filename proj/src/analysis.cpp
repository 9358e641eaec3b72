#include "sepgram/analysis.hpp"

#include "sepgram/errors.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace sepgram {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::SeparableCertified: return "separable_certified";
    case Verdict::EntangledNpt: return "entangled_npt";
    case Verdict::EntangledRange: return "entangled_range";
    case Verdict::PptUndecided: return "ppt_undecided";
  }
  return "unknown";
}

AnalysisOptions strict(AnalysisOptions o) {
  o.tol *= 0.5;
  o.cert_tol *= 0.5;
  o.tol_55 *= 0.5;
  o.tol_56 *= 0.5;
  o.general.accept *= 0.5;
  return o;
}

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  explicit Stopwatch(AnalysisReport& r) : report_(r), last_(Clock::now()) {}
  void lap(const char* stage) {
    const auto now = Clock::now();
    report_.timings.emplace_back(stage, std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  AnalysisReport& report_;
  Clock::time_point last_;
};

// rho = sigma (x) tau with one factor pure.
std::optional<SeparableDecomposition> product_decomposition(const DensityMatrix& rho, double tol) {
  const Dims dims = rho.dims();
  const HermitianEigen ea = hermitian_eigen(reduce_to_a(rho.mat(), dims));
  const HermitianEigen eb = hermitian_eigen(reduce_to_b(rho.mat(), dims));
  auto rank_of = [&](const RealVector& v) {
    int r = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) r += v[i] > tol * v[0] ? 1 : 0;
    return r;
  };
  const int ra = rank_of(ea.values);
  const int rb = rank_of(eb.values);
  if (ra != 1 && rb != 1) return std::nullopt;
  SeparableDecomposition sd;
  sd.dims = dims;
  if (ra == 1) {
    sd.phi = ea.vectors.col(0).replicate(1, rb);
    sd.psi.resize(dims.n, rb);
    for (int l = 0; l < rb; ++l) sd.psi.col(l) = std::sqrt(eb.values[l]) * eb.vectors.col(l);
  } else {
    sd.psi = eb.vectors.col(0).replicate(1, ra);
    sd.phi.resize(dims.m, ra);
    for (int l = 0; l < ra; ++l) sd.phi.col(l) = std::sqrt(ea.values[l]) * ea.vectors.col(l);
  }
  if (max_abs(sd.density() - rho.mat()) > 1e3 * tol * std::max(1.0, max_abs(rho.mat()))) return std::nullopt;
  return sd;
}

ComplexMatrix rotation(double theta) {
  ComplexMatrix g(2, 2);
  g << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return g;
}

double condition_of_c(const ComplexMatrix& mat, int n) {
  const RealVector v = hermitian_eigen(mat.bottomRightCorner(n, n)).values;
  return v[0] > 0.0 ? v[n - 1] / v[0] : 0.0;
}

SolverOutcome outcome(const std::string& name, const ExtensionResult& r) {
  return {name, std::string(to_string(r.status)), r.method, r.residual, r.starts};
}

}  // namespace

AnalysisReport analyze(const DensityMatrix& rho, const AnalysisOptions& options) {
  AnalysisReport report;
  Stopwatch watch(report);
  report.dims = rho.dims();
  const Dims dims = rho.dims();

  report.rank = numeric_rank(rho.mat(), options.tol).rank;
  const ComplexMatrix pt = partial_transpose(rho, Subsystem::A);
  report.rank_pt = numeric_rank(pt, options.tol).rank;
  report.case_label = "(" + std::to_string(report.rank) + "," + std::to_string(report.rank_pt) + ")";
  const PptReport ppt = is_ppt(rho, options.tol);
  report.ppt = ppt.ppt;
  report.min_eigenvalue_pt = ppt.min_eigenvalue;
  watch.lap("ppt");
  if (!ppt.ppt) {
    report.verdict = Verdict::EntangledNpt;
    return report;
  }

  auto certify = [&](const SeparableDecomposition& sd) {
    try {
      const DiagonalGramCertificate cert = certificate_with_nonsingular_d(sd);
      const CertificateCheck check = verify_certificate(cert, rho.mat(), options.cert_tol);
      report.residuals.emplace_back("certificate", check.residual);
      if (check.pass) {
        report.verdict = Verdict::SeparableCertified;
        report.certificate = cert;
      } else {
        report.notes.push_back("certificate failed verification");
      }
    } catch (const Error& e) {
      report.notes.push_back(std::string("certificate extraction failed: ") + e.what());
    }
    watch.lap("certificate");
  };

  if (const auto product = product_decomposition(rho, options.tol)) {
    report.solver = SolverOutcome{"product", "solved", "reduced_states", 0.0, 0};
    certify(*product);
    return report;
  }
  if (dims.m != 2) {
    report.notes.push_back("no decision procedure for M >= 3");
    return report;
  }

  // Deflate B to the support of the reduced state.
  const HermitianEigen eb = hermitian_eigen(reduce_to_b(rho.mat(), dims));
  int support = 0;
  while (support < dims.n && eb.values[support] > options.tol * eb.values[0]) ++support;
  const ComplexMatrix p = eb.vectors.leftCols(support);
  const ComplexMatrix lift = kron(ComplexMatrix::Identity(2, 2), p);
  ComplexMatrix work = lift.adjoint() * rho.mat() * lift;
  const int n = support;
  if (n < dims.n) report.notes.push_back("deflated B to dimension " + std::to_string(n));

  // A-basis rotation when the lower-right block is singular.
  ComplexMatrix g = ComplexMatrix::Identity(2, 2);
  if (condition_of_c(work, n) <= 1e-10) {
    double best = -1.0;
    ComplexMatrix best_work;
    for (int k = 1; k <= 10; ++k) {
      const ComplexMatrix gk = rotation(0.3 * k);
      const ComplexMatrix lk = kron(gk, ComplexMatrix::Identity(n, n));
      const ComplexMatrix wk = lk.adjoint() * work * lk;
      const double c = condition_of_c(wk, n);
      if (c > best) {
        best = c;
        g = gk;
        best_work = wk;
      }
    }
    if (best <= 1e-10) {
      report.notes.push_back("lower-right block singular in every tried A basis");
      return report;
    }
    work = best_work;
    report.notes.push_back("rotated the A basis to make the lower-right block invertible");
  }

  const CanonicalForm2xN cf = canonical_form(work, n, options.tol);
  report.residuals.emplace_back("canonical_ppt_block_min_eigenvalue", cf.min_eig_ppt_block / cf.scale);
  watch.lap("canonical_form");
  if (!cf.ppt) {
    // The state passed PPT at the input tolerance; the canonical block is
    // only marginally negative.
    report.notes.push_back("canonical PPT block marginally negative");
    return report;
  }

  std::optional<ExtensionSolution> solution;
  const ExtensionProblem ep = ExtensionProblem::from(cf);
  const bool hermitian_b = max_abs(cf.b - cf.b.adjoint()) <= options.tol * cf.scale;

  if (cf.p == 0 && cf.p_tilde == 0) {
    const RankNResult rn = rank_n_test(cf, options.tol);
    report.solver = SolverOutcome{"rank_n", rn.separable ? "solved" : "undecided", "commutator", rn.residual, 0};
    if (rn.separable) {
      ExtensionSolution s;
      s.b = cf.b;
      s.lam = ComplexMatrix(n, 0);
      s.lam_tilde = ComplexMatrix(0, n);
      s.s = ComplexMatrix(0, 0);
      s.mixing = ComplexMatrix(0, 0);
      s.residual = rn.residual;
      solution = s;
    }
  } else if (hermitian_b) {
    const ExtensionResult r = self_pt_extension(cf, options.tol);
    report.solver = outcome("self_pt", r);
    if (r.status == ExtensionStatus::Solved) solution = r.solution;
  } else if (cf.p == 1 && cf.p_tilde == 1) {
    const ExtensionResult r = solve_extension_55(ep, options.tol_55);
    report.solver = outcome("extension_55", r);
    if (r.status == ExtensionStatus::Solved) {
      solution = r.solution;
    } else if (n == 4) {
      report.verdict = Verdict::EntangledRange;
    }
  } else if (n == 4 && cf.p == 1 && cf.p_tilde == 2) {
    const ExtensionResult r = solve_extension_56(ep, options.tol_56);
    report.solver = outcome("extension_56", r);
    if (r.status == ExtensionStatus::Solved) {
      solution = r.solution;
    } else {
      report.verdict = Verdict::EntangledRange;
    }
  }
  if (!solution && report.verdict == Verdict::PptUndecided) {
    const ExtensionResult r = solve_extension_general(ep, options.general);
    report.solver = outcome("extension_general", r);
    if (r.status == ExtensionStatus::Solved) solution = r.solution;
  }
  if (report.solver) report.residuals.emplace_back("extension", report.solver->residual);
  watch.lap("extension");
  if (!solution) return report;

  SeparableDecomposition sd;
  try {
    sd = decomposition_from_extension(*solution);
  } catch (const Error& e) {
    report.notes.push_back(std::string("decomposition from extension failed: ") + e.what());
    return report;
  }
  // Undo the canonical map, the A rotation and the deflation.
  sd.psi = p * (cf.t_inv * sd.psi);
  sd.phi = g * sd.phi;
  sd.dims = dims;
  certify(sd);
  return report;
}

io::json report_to_json(const AnalysisReport& r, bool with_timings) {
  io::json out{{"input_digest", r.input_digest},
               {"m", r.dims.m},
               {"n", r.dims.n},
               {"rank", r.rank},
               {"rank_pt", r.rank_pt},
               {"ppt", r.ppt},
               {"min_eigenvalue_pt", r.min_eigenvalue_pt},
               {"case", r.case_label},
               {"verdict", std::string(to_string(r.verdict))}};
  if (r.solver) {
    out["solver"] = {{"name", r.solver->name},
                     {"status", r.solver->status},
                     {"method", r.solver->method},
                     {"residual", r.solver->residual},
                     {"starts", r.solver->starts}};
  } else {
    out["solver"] = io::json::object();
  }
  io::json residuals = io::json::object();
  for (const auto& [name, value] : r.residuals) residuals[name] = value;
  out["residuals"] = residuals;
  if (!r.notes.empty()) out["notes"] = r.notes;
  if (r.certificate) out["certificate"] = io::certificate_to_json(*r.certificate);
  if (with_timings) {
    io::json t = io::json::object();
    for (const auto& [stage, seconds] : r.timings) t[stage] = seconds;
    out["timings"] = t;
  }
  return out;
}

}  // namespace sepgram
