#pragma once

// The end-to-end decision pipeline behind `sepgram analyze`: PPT test, 2 x N
// canonical form, case dispatch to an extension solver, certificate
// extraction and verification.

#include "sepgram/io.hpp"
#include "sepgram/twoxn.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sepgram {

enum class Verdict { SeparableCertified, EntangledNpt, EntangledRange, PptUndecided };
std::string_view to_string(Verdict v);

struct AnalysisOptions {
  double tol = kDefaultTol;    // validation, ranks, PPT
  double cert_tol = 1e-8;      // certificate verification
  double tol_55 = 1e-8;
  double tol_56 = 1e-6;
  GeneralOptions general;
};

// Halves every tolerance.
AnalysisOptions strict(AnalysisOptions o);

struct SolverOutcome {
  std::string name;
  std::string status;
  std::string method;
  double residual = 0.0;
  int starts = 0;
};

struct AnalysisReport {
  std::string input_digest;
  Dims dims;
  int rank = 0;
  int rank_pt = 0;
  bool ppt = false;
  double min_eigenvalue_pt = 0.0;
  std::string case_label;
  std::optional<SolverOutcome> solver;
  Verdict verdict = Verdict::PptUndecided;
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<std::string> notes;
  std::optional<DiagonalGramCertificate> certificate;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
};

AnalysisReport analyze(const DensityMatrix& rho, const AnalysisOptions& options = {});

io::json report_to_json(const AnalysisReport& r, bool with_timings = false);

}  // namespace sepgram
