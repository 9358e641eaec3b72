#include "sepgram/errors.hpp"
#include "sepgram/io.hpp"
#include "sepgram/states.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

using namespace sepgram;
using io::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("sepgram_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, const fs::path& out = {}) {
  std::string cmd = std::string(SEPGRAM_CLI) + " " + args;
  cmd += out.empty() ? " > /dev/null" : " > " + out.string();
  cmd += " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load(const fs::path& p) { return io::parse(io::read_file(p.string())); }

}  // namespace

TEST_CASE("JSON encoding of matrices and states") {
  CHECK(io::complex_from_json(json::array({1.5, -2.0})) == cplx(1.5, -2.0));
  CHECK(io::complex_from_json(json(3.0)) == cplx(3.0, 0.0));
  CHECK_THROWS_WITH_AS(io::complex_from_json(json::array({1.0})), doctest::Contains("ParseError"), Error);
  CHECK_THROWS_WITH_AS(io::matrix_from_json(json::parse("[[1, 2], [3]]")), doctest::Contains("ParseError"), Error);

  const DensityMatrix r = random_density(2, 3, 4, 1);
  const DensityMatrix back = io::state_from_json(io::parse(io::state_to_json(r).dump()));
  CHECK(back.dims() == r.dims());
  CHECK(max_abs(back.mat() - r.mat()) == 0.0);

  json nonsquare = io::state_to_json(werner(0.1));
  nonsquare["data"].erase(0);
  CHECK_THROWS_AS(io::state_from_json(nonsquare), Error);
  CHECK_THROWS_WITH_AS(io::parse("{not json"), doctest::Contains("ParseError"), Error);

  const DiagonalGramCertificate c = decomposition_to_certificate(random_separable(2, 3, 4, 2).decomposition);
  const DiagonalGramCertificate c2 = io::certificate_from_json(io::parse(io::certificate_to_json(c).dump()));
  CHECK(max_abs(c2.d - c.d) == 0.0);
  CHECK(max_abs(c2.v - c.v) == 0.0);
  CHECK_FALSE(c2.a_basis.has_value());

  CHECK(io::digest("") == "cbf29ce484222325");
  CHECK(io::digest("a") != io::digest("b"));
  CHECK(io::digest("abc").size() == 16);
}

TEST_CASE("command line interface") {
  const fs::path dir = scratch();
  const fs::path w = dir / "w.json", w6 = dir / "w6.json", h = dir / "h.json", s = dir / "s.json";
  REQUIRE(run("gen werner --p 0.2", w) == 0);
  REQUIRE(run("gen werner --p 0.6", w6) == 0);
  REQUIRE(run("gen horodecki --b 0.5", h) == 0);
  REQUIRE(run("gen random-separable --m 2 --n 3 --k 4 --seed 3", s) == 0);

  const fs::path rep = dir / "rep.json";
  CHECK(run("analyze " + w.string(), rep) == 0);
  json j = load(rep);
  CHECK(j["verdict"] == "separable_certified");
  CHECK(j["ppt"] == true);
  CHECK(j["rank"] == 4);
  CHECK(j.contains("certificate"));
  CHECK_FALSE(j.contains("timings"));

  CHECK(run("analyze " + w6.string(), rep) == 0);
  j = load(rep);
  CHECK(j["verdict"] == "entangled_npt");
  CHECK(j["min_eigenvalue_pt"].get<double>() == doctest::Approx(-0.2));

  CHECK(run("analyze " + h.string(), rep) == 0);
  CHECK(load(rep)["verdict"] == "entangled_range");
  CHECK(load(rep)["case"] == "(5,5)");

  CHECK(run("analyze " + s.string(), rep) == 0);
  CHECK(load(rep)["verdict"] == "separable_certified");

  // Reports are byte-identical across runs.
  const fs::path rep2 = dir / "rep2.json";
  CHECK(run("analyze " + s.string(), rep2) == 0);
  CHECK(io::read_file(rep.string()) == io::read_file(rep2.string()));
  CHECK(run("analyze --timings " + s.string(), rep2) == 0);
  CHECK(load(rep2).contains("timings"));

  const fs::path cert = dir / "cert.json", out = dir / "out.json";
  REQUIRE(run("analyze " + w.string(), rep) == 0);
  io::write_file(cert.string(), load(rep)["certificate"].dump());
  CHECK(run("ffcnm-verify " + cert.string() + " " + w.string(), out) == 0);
  CHECK(load(out)["pass"] == true);
  CHECK(run("ffcnm-verify " + cert.string() + " " + w6.string(), out) == 0);
  CHECK(load(out)["pass"] == false);

  CHECK(run("provec " + h.string(), out) == 0);
  CHECK(load(out)["hits"].empty());
  CHECK(run("gram " + w.string(), out) == 0);
  CHECK(load(out)["k"] == 4);
  CHECK(run("canonical " + h.string(), out) == 0);

  const fs::path bad = dir / "bad.json";
  io::write_file(bad.string(), "{\"m\": 2, \"n\": 2, \"data\": [[1]]}");
  CHECK(run("analyze " + bad.string()) == 1);
  io::write_file(bad.string(), "not json");
  CHECK(run("analyze " + bad.string()) == 1);
  CHECK(run("analyze " + (dir / "missing.json").string()) == 1);
  CHECK(run("no-such-command") == 1);
  CHECK(run("provec " + w6.string()) != 0);

  fs::remove_all(dir);
}
