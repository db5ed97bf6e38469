#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = spolight::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("spolight_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("moments: pinned display row") {
  const CliRun r = run({"moments", "--s", "1", "--lambda", "1", "--x", "5"});
  CHECK(r.code == 0);
  CHECK(r.out == "mean,variance,fano,R\n0.9567,0.9130,0.9543,-0.0478\n");
}

TEST_CASE("moments: eta mode and precision flag") {
  const CliRun r = run({"moments", "--s", "1", "--eta", "0.6", "--x", "30",
                        "--precision", "6"});
  CHECK(r.code == 0);
  CHECK(r.out.find("17.761761") != std::string::npos);  // 0.986764492 * 18
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"moments", "--s", "1", "--lambda", "1"}).code == 2);  // missing --x
  CHECK(run({"moments", "--s", "1", "--x", "5"}).code == 2);       // no lambda/eta
  CHECK(run({"moments", "--s", "1", "--lambda", "1", "--eta", "0.5", "--x", "5"}).code == 2);
  CHECK(run({"moments", "--s", "-1", "--lambda", "1", "--x", "5"}).code == 2);
  CHECK(run({"moments", "--s", "1", "--lambda", "1", "--x", "5", "--bogus", "3"}).code == 2);
  CHECK(run({}).code == 2);  // a subcommand is required
  CHECK(run({"frobnicate"}).code == 2);
  const CliRun r = run({"moments", "--s", "1", "--lambda", "1"});
  CHECK(r.err.find("--x") != std::string::npos);
}

TEST_CASE("help exits 0") {
  const CliRun r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Usage") != std::string::npos);
}

TEST_CASE("plasmon table") {
  const CliRun r = run({"plasmon"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Lsp") != std::string::npos);
  CHECK(r.out.find("38075") != std::string::npos);
  CHECK(r.out.find("theta_c") != std::string::npos);
  CHECK(r.out.find("42.8512") != std::string::npos);
  // unphysical stack is a runtime failure, not a usage error
  CHECK(run({"plasmon", "--eps-r", "0.5"}).code == 1);
}

TEST_CASE("dist rows") {
  const CliRun r = run({"dist", "--s", "1", "--lambda", "1", "--x", "5", "--n-max", "3"});
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 5);  // header + n = 0..3
  CHECK(r.out.find("0,0.376674777\n") != std::string::npos);
  CHECK(r.out.find("1,0.374136762\n") != std::string::npos);

  const CliRun full = run({"dist", "--s", "1", "--lambda", "1", "--x", "5"});
  double sum = 0.0;
  std::istringstream in(full.out);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) sum += std::stod(line.substr(line.find(',') + 1));
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sweep to file with svg") {
  const fs::path csv = temp_file("sweep.csv");
  const fs::path svg = temp_file("sweep.svg");
  const CliRun r = run({"sweep", "--quantity", "fano", "--s-list", "0.1,1", "--lambda", "1",
                        "--x-min", "0.5", "--x-max", "5", "--x-steps", "4", "--log", "--out",
                        csv.string(), "--svg", svg.string()});
  CHECK(r.code == 0);
  const std::string text = slurp(csv);
  CHECK(text.find("s,lambda,x,value\n") == 0);
  CHECK(count_lines(text) == 9);  // header + 2 s-values x 4 steps
  CHECK(slurp(svg).find("<svg") == 0);
  fs::remove(csv);
  fs::remove(svg);
}

TEST_CASE("simulate then analyze round trip") {
  const fs::path csv = temp_file("run.csv");
  const CliRun sim = run({"simulate", "--flux", "2e5", "--duration-s", "0.005", "--bin-ns",
                          "12.5", "--dead-time-ns", "63.5", "--topology", "beam_splitter",
                          "--split-ratio", "0.5", "--seed", "7", "--out", csv.string()});
  CHECK(sim.code == 0);
  const std::string header = slurp(csv).substr(0, 21);
  CHECK(header == "# spolight-binned v1\n");

  const CliRun an = run({"analyze", "--in", csv.string(), "--mode", "cross", "--max-delay",
                         "80", "--runs", "10"});
  CHECK(an.code == 0);
  CHECK(an.out.find("delay_bins,delay_ns,K,R,stderr_R\n") == 0);
  CHECK(count_lines(an.out) == 82);  // header + delays 0..80

  // determinism: byte-identical rerun
  const fs::path csv2 = temp_file("run2.csv");
  run({"simulate", "--flux", "2e5", "--duration-s", "0.005", "--bin-ns", "12.5",
       "--dead-time-ns", "63.5", "--topology", "beam_splitter", "--split-ratio", "0.5",
       "--seed", "7", "--out", csv2.string()});
  CHECK(slurp(csv) == slurp(csv2));

  fs::remove(csv);
  fs::remove(csv2);
}

TEST_CASE("analyze: auto mode defaults start at delay 1") {
  const fs::path csv = temp_file("auto.csv");
  run({"simulate", "--duration-s", "0.002", "--topology", "single_detector", "--seed", "3",
       "--out", csv.string()});
  const CliRun an = run({"analyze", "--in", csv.string(), "--mode", "auto", "--max-delay",
                         "10", "--runs", "1"});
  CHECK(an.code == 0);
  CHECK(an.out.find("\n1,") != std::string::npos);
  CHECK(an.out.find("\n0,") == std::string::npos);
  // d = 0 available on request, flagged on stderr
  const CliRun an0 = run({"analyze", "--in", csv.string(), "--mode", "auto", "--min-delay",
                          "0", "--max-delay", "2", "--runs", "1"});
  CHECK(an0.code == 0);
  CHECK(an0.err.find("self-product") != std::string::npos);
  fs::remove(csv);
}

TEST_CASE("analyze: distinguishes missing file from malformed CSV") {
  const CliRun missing = run({"analyze", "--in", "/nonexistent/x.csv"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  const fs::path bad = temp_file("bad.csv");
  std::ofstream(bad) << "not a binned csv\n";
  const CliRun malformed = run({"analyze", "--in", bad.string()});
  CHECK(malformed.code == 1);
  CHECK(malformed.err.find("malformed") != std::string::npos);
  fs::remove(bad);
}

TEST_CASE("--out writes the same bytes that stdout would carry") {
  const fs::path p = temp_file("moments.txt");
  const CliRun to_file =
      run({"moments", "--s", "1", "--lambda", "1", "--x", "5", "--out", p.string()});
  const CliRun to_stdout = run({"moments", "--s", "1", "--lambda", "1", "--x", "5"});
  CHECK(to_file.code == 0);
  CHECK(to_file.out.empty());
  CHECK(slurp(p) == to_stdout.out);
  fs::remove(p);

  CHECK(run({"moments", "--s", "1", "--lambda", "1", "--x", "5", "--out",
             "/nonexistent/dir/out.txt"})
            .code == 1);
}

TEST_CASE("simulate rejects degenerate splitter ratio as usage") {
  CHECK(run({"simulate", "--split-ratio", "1.5", "--duration-s", "0.001"}).code == 2);
  // ratio 1.0 passes flag validation but is a configuration error
  CHECK(run({"simulate", "--split-ratio", "1.0", "--duration-s", "0.001"}).code == 1);
}
