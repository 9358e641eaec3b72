#include "sepgram/analysis.hpp"
#include "sepgram/states.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

using namespace sepgram;

TEST_CASE("verdicts on named states") {
  for (double p : {0.0, 0.2, 1.0 / 3.0 - 1e-6}) {
    const AnalysisReport r = analyze(werner(p));
    CHECK(r.verdict == Verdict::SeparableCertified);
    REQUIRE(r.certificate.has_value());
    CHECK(max_abs(fixtures::certificate_density(r.certificate->d, r.certificate->v,
                                                r.certificate->a_basis ? &*r.certificate->a_basis : nullptr) -
                  werner(p).mat()) < 1e-8);
  }
  const AnalysisReport npt = analyze(werner(0.5));
  CHECK(npt.verdict == Verdict::EntangledNpt);
  CHECK(npt.min_eigenvalue_pt == doctest::Approx(-0.125));
  CHECK_FALSE(npt.ppt);

  for (double b : {0.3, 0.7}) {
    const AnalysisReport r = analyze(horodecki97(b));
    CHECK(r.verdict == Verdict::EntangledRange);
    CHECK(r.case_label == "(5,5)");
  }
  CHECK(analyze(horodecki97(1.0)).verdict == Verdict::SeparableCertified);
}

TEST_CASE("random separable states are certified") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const SeparableSample s = random_separable(2, n, 1 + static_cast<int>(seed % 5), seed);
    const AnalysisReport r = analyze(s.rho);
    CHECK(r.verdict == Verdict::SeparableCertified);
  }
  const AnalysisReport m3 = analyze(random_separable(3, 3, 4, 1).rho);
  CHECK(m3.verdict == Verdict::PptUndecided);
  CHECK_FALSE(m3.notes.empty());
}

TEST_CASE("report JSON") {
  const AnalysisReport r = analyze(werner(0.2));
  const io::json j = report_to_json(r);
  for (const char* key : {"input_digest", "m", "n", "rank", "rank_pt", "ppt", "min_eigenvalue_pt", "case", "verdict",
                          "solver", "residuals"})
    CHECK(j.contains(key));
  CHECK_FALSE(j.contains("timings"));
  CHECK(report_to_json(r, true).contains("timings"));

  const AnalysisOptions s = strict({});
  CHECK(s.tol == doctest::Approx(0.5 * AnalysisOptions{}.tol));
  CHECK(s.cert_tol == doctest::Approx(0.5e-8));
}
