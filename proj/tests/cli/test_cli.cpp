#include <cmath>
#include <complex>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "holo/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "holo");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = holo::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    std::vector<double> r;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("analyze labels the three-node cubic") {
  auto r = run({"analyze", "z*(z-1)*(z-2)"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["classification"]["label"] == "c2");
  CHECK(j["classification"]["confidence"] == "Exact");
  int nodes = 0;
  for (auto& e : j["equilibria"]) nodes += e["kind"].get<std::string>().rfind("Node", 0) == 0;
  CHECK(nodes == 3);
  CHECK(j["infinity"]["points"].size() == 4);
}

TEST_CASE("analyze moebius fields report the pole at the origin") {
  // A = i: one equilibrium at i besides the pole
  auto r = run({"analyze", "moebius(0+1i;1+0i;1+0i;0+0i)"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  bool pole0 = false;
  for (auto& e : j["equilibria"])
    if (e["pole"] && std::abs(e["z"][0].get<double>()) < 1e-12 && std::abs(e["z"][1].get<double>()) < 1e-12)
      pole0 = true;
  CHECK(pole0);
  CHECK(j["classification"]["label"] == "M8");

  r = run({"analyze", "moebius(0;1;1;0)"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  REQUIRE(j["equilibria"].size() == 1);
  CHECK(j["equilibria"][0]["pole"] == true);
  CHECK(j["classification"]["label"] == "M1");
}

TEST_CASE("analyze labels the quartic pole") {
  auto r = run({"analyze", "1/(z^4)"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["classification"]["label"] == "Sq1");
}

TEST_CASE("exit codes") {
  auto r = run({"analyze", "z*(z-"});
  CHECK(r.code == 2);
  // caret under the end of input
  CHECK(r.err.find("\n  z*(z-\n       ^") != std::string::npos);

  CHECK(run({"analyze", "z+1/z"}).code == 2);
  CHECK(run({"analyze", "moebius(1;2;2;4)"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"integrate", "z", "--from", "1;0"}).code == 2);
  CHECK(run({"integrate", "1/z", "--from", "0,0", "--t", "1"}).code == 3);
  CHECK(run({"portrait", "z^2", "--svg", "/nonexistent-dir/p.svg"}).code == 4);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("portrait of two centers") {
  auto r = run({"portrait", "z^2+1", "--seed", "7"});
  REQUIRE(r.code == 0);
  CHECK(count(r.out, "class=\"eq Center\"") == 2);
  CHECK(count(r.out, "class=\"inf Saddle\"") == 2);
  CHECK(count(r.out, "class=\"equator\"") == 1);
  CHECK(count(r.out, "class=\"separatrix") >= 1);
}

TEST_CASE("portrait bytes are reproducible for a fixed seed") {
  for (const char* f : {"z^2+1", "(-1+2i)*z*(z-3)*(z-2i)*(z-(3+2i))", "1/(z*(z-1)*(z-i))", "conj(z^3-1)"}) {
    auto a = run({"portrait", f, "--seed", "7"});
    auto b = run({"portrait", f, "--seed", "7"});
    auto c = run({"portrait", f, "--seed", "8"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
  }
}

TEST_CASE("level curves of the conjugate square follow the stream function") {
  auto r = run({"portrait", "conj(z^2)", "--levels", "12"});
  REQUIRE(r.code == 0);
  std::regex level_re("data-level=\"([^\"]+)\" d=\"([^\"]+)\"");
  std::regex pt_re("[ML]([-0-9.]+) ([-0-9.]+)");
  int levels = 0;
  double worst = 0;
  for (auto it = std::sregex_iterator(r.out.begin(), r.out.end(), level_re); it != std::sregex_iterator(); ++it) {
    ++levels;
    const double k = std::stod((*it)[1]);
    const std::string d = (*it)[2];
    for (auto p = std::sregex_iterator(d.begin(), d.end(), pt_re); p != std::sregex_iterator(); ++p) {
      // 600 px window, half width 3
      const double x = (std::stod((*p)[1]) - 300.0) / 100.0;
      const double y = (300.0 - std::stod((*p)[2])) / 100.0;
      worst = std::max(worst, std::abs(x * x * y - y * y * y / 3.0 - k));
    }
  }
  CHECK(levels == 12);
  CHECK(worst < 5e-3);
  CHECK(count(r.out, "class=\"eq SaddleConjugate\"") == 1);
}

TEST_CASE("integrate the spiral to the first axis crossing") {
  auto r = run({"integrate", "(-1+1i)*z", "--from", "1,0", "--t", "3.14159265"});
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() > 2);
  CHECK(rows.front()[0] == 0.0);
  CHECK(rows.back()[0] == doctest::Approx(3.14159265).epsilon(1e-12));
  CHECK(std::abs(rows.back()[1] + std::exp(-3.14159265)) < 1e-6);
  CHECK(std::abs(rows.back()[2]) < 1e-6);
}

TEST_CASE("integrate the rotation for one period") {
  auto r = run({"integrate", "1i*z", "--from", "1,0", "--t", "6.2831853"});
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  CHECK(std::abs(rows.back()[1] - 1.0) < 1e-6);
  CHECK(std::abs(rows.back()[2]) < 1e-6);
}

TEST_CASE("H column is conserved along polynomial runs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v;
    return os.str();
  };
  for (int trial = 0; trial < 20; ++trial) {
    const int deg = 2 + trial % 3;
    std::string expr = "(" + num(0.5 + std::abs(u(rng))) + "+" + num(u(rng)) + "i)";
    std::vector<std::complex<double>> roots;
    for (int k = 0; k < deg; ++k) {
      const std::string re = num(2 * u(rng)), im = num(2 * u(rng));
      roots.emplace_back(std::stod(re), std::stod(im));
      expr += "*(z-(" + re + "+" + im + "i))";
    }
    const std::string from = num(2 * u(rng)) + "," + num(2 * u(rng));
    auto r = run({"integrate", expr, "--from", from, "--t", "2"});
    REQUIRE(r.code == 0);
    auto rows = csv_rows(r.out);
    const double h0 = rows.front()[3];
    double dev = 0;
    int used = 0;
    for (auto& row : rows) {
      // H has log singularities at the roots; compare on the safe part of the run
      double d = 1e300;
      for (auto root : roots) d = std::min(d, std::abs(std::complex<double>(row[1], row[2]) - root));
      if (d < 1e-3) break;
      dev = std::max(dev, std::abs(row[3] - h0));
      ++used;
    }
    INFO(expr << " from " << from);
    CHECK(used > 10);
    CHECK(dev < 1e-6 * (1 + std::abs(h0)));
  }
}

TEST_CASE("integrate backward runs in negative time") {
  auto r = run({"integrate", "z", "--from", "1,0", "--t", "1", "--backward"});
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  CHECK(rows.back()[0] == doctest::Approx(-1.0));
  CHECK(rows.back()[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("potential grid of the conjugate square") {
  auto r = run({"potential", "conj(z^2)", "--grid", "7", "--window", "2", "--center", "0.5,-0.25"});
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 49);
  for (auto& row : rows) {
    const double x = row[0], y = row[1];
    CHECK(std::abs(row[2] - (x * x * y - y * y * y / 3.0)) < 1e-8);
  }
  auto j = nlohmann::json::parse(run({"potential", "conj(z^2)", "--json", "--grid", "3"}).out);
  CHECK(j["quantity"] == "psi");
  CHECK(j["grid"]["values"].size() == 3);
}

TEST_CASE("catalog listing sizes") {
  const std::vector<std::pair<std::string, int>> sizes = {{"Quad", 3},    {"Cubic", 9},      {"Quartic", 29},
                                                          {"InvQuad", 3}, {"InvCubic", 4},   {"InvQuartic", 11},
                                                          {"Moebius", 9}};
  auto all = run({"catalog"});
  REQUIRE(all.code == 0);
  for (auto& [fam, n] : sizes) {
    CHECK(count("\n" + all.out, "\n" + fam + "\t") == n);
    auto j = nlohmann::json::parse(run({"catalog", fam, "--json"}).out);
    CHECK(j[0]["entries"].size() == static_cast<std::size_t>(n));
  }
}
