#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vacrabi/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "vacrabi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = vacrabi::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kConfig = std::string(VACRABI_CONFIG_DIR) + "/reference.cfg";

}  // namespace

TEST_CASE("simulate writes the curve") {
  const auto path = std::filesystem::temp_directory_path() / "vacrabi_curve.csv";
  const Result r = run({"--config", kConfig, "--out", path.string(), "simulate", "--points", "21"});
  CHECK(r.code == 0);
  const std::string csv = slurp(path);
  CHECK(csv.rfind("t_s,t_eff_s,p_g\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 22);

  // Byte-identical on repetition.
  const Result again = run({"--config", kConfig, "--out", path.string(), "simulate", "--points", "21"});
  CHECK(again.code == 0);
  CHECK(slurp(path) == csv);
  std::filesystem::remove(path);
}

TEST_CASE("simulate options") {
  CHECK(run({"simulate", "--points", "5", "--mode", "raw"}).code == 0);
  CHECK(run({"simulate", "--points", "5", "--doublets", "3", "--initial", "thermal"}).code == 0);
  const Result bad = run({"simulate", "--mode", "sideways"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("--mode") != std::string::npos);
}

TEST_CASE("compare passes on the reference configuration") {
  const Result r = run({"--config", kConfig, "compare", "--points", "7", "--tmax", "60e-6"});
  CHECK(r.code == 0);
  CHECK(r.out.find("pass,1") != std::string::npos);
}

TEST_CASE("compare reports a tolerance failure with exit code 2") {
  const Result r = run({"compare", "--points", "3", "--tmax", "10e-6", "--tolerance", "1e-30"});
  CHECK(r.code == 2);
  CHECK(r.err.find("exceeds") != std::string::npos);
}

TEST_CASE("spectrum and generator dumps") {
  const Result s = run({"spectrum"});
  CHECK(s.code == 0);
  CHECK(s.out.rfind("mode_id,type,re_lambda,im_lambda", 0) == 0);
  std::size_t population = 0, coherence = 0;
  for (std::size_t pos = 0; (pos = s.out.find(",population,", pos)) != std::string::npos; ++pos) ++population;
  for (std::size_t pos = 0; (pos = s.out.find(",coherence,", pos)) != std::string::npos; ++pos) ++coherence;
  CHECK(population == 5);
  CHECK(coherence == 20);

  const Result g = run({"generator", "--doublets", "1"});
  CHECK(g.code == 0);
  CHECK(g.out.rfind("row,col,re,im\n", 0) == 0);
  CHECK(std::count(g.out.begin(), g.out.end(), '\n') == 1 + 81);
}

TEST_CASE("thermal table") {
  const Result r = run({"thermal"});
  CHECK(r.code == 0);
  CHECK(r.out.find("p_0,9.523809523810e-01") != std::string::npos);
  CHECK(r.out.find("p_2,2.159593996329e-03") != std::string::npos);
  CHECK(r.out.find("boltzmann_2g,") != std::string::npos);
}

TEST_CASE("fit on a missing file names the path") {
  const Result r = run({"fit", "--data", "missing.csv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("missing.csv") != std::string::npos);
}

TEST_CASE("synth then fit") {
  const auto path = std::filesystem::temp_directory_path() / "vacrabi_synth.csv";
  const Result s = run({"--seed", "3", "--out", path.string(), "synth", "--tmax", "0.05", "--points", "200"});
  REQUIRE(s.code == 0);
  const Result f = run({"fit", "--data", path.string(), "--free", "gamma_cavity"});
  CHECK(f.code == 0);
  CHECK(f.out.find("gamma_cavity,1.7") != std::string::npos);
  CHECK(f.out.find("Q_field,") != std::string::npos);

  const Result synthetic = run({"--seed", "3", "fit", "--synthetic", "--tmax", "0.05", "--points", "200"});
  CHECK(synthetic.code == 0);
  CHECK(synthetic.out.find("gamma_cavity,1.7") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("usage errors") {
  const Result none = run({});
  CHECK(none.code == 1);
  CHECK(none.err.find("simulate") != std::string::npos);
  CHECK(run({"dance"}).code == 1);
  CHECK(run({"simulate", "--bogus"}).code == 1);
  CHECK(run({"--config", "/nonexistent.cfg", "simulate"}).code == 1);
  CHECK(run({"fit", "--free", "gamma9", "--synthetic"}).code == 1);
  CHECK(run({"fit"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}
