#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "delaysir/io.hpp"

using namespace delaysir;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("delaysir_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}
}  // namespace

TEST_CASE("format_number round-trips") {
  CHECK(io::format_number(0.5) == "0.5");
  CHECK(io::format_number(20) == "20");
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 500; ++i) {
    double v = u(rng) * std::pow(10.0, i % 7 - 3);
    CHECK(std::stod(io::format_number(v)) == v);
  }
}

TEST_CASE("csv quoting") {
  CHECK(io::csv_escape("plain") == "plain");
  CHECK(io::csv_escape("a,b") == "\"a,b\"");
  CHECK(io::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(io::csv_line({"x", "1,2", ""}) == "x,\"1,2\",\n");
}

TEST_CASE("field CSV layout and round trip") {
  auto dir = scratch("csv");
  Field f(3, 2);
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t k = 0; k < 3; ++k) f(k, l) = 10.0 * l + k + 0.125;
  io::write_field_csv(dir / "f.csv", f);
  CHECK(slurp(dir / "f.csv") == "0.125,1.125,2.125\n10.125,11.125,12.125\n");
  CHECK(io::read_field_csv(dir / "f.csv") == f);

  std::mt19937 rng(4);
  std::normal_distribution<double> n(0, 1e3);
  Field g(7, 5);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = n(rng);
  io::write_field_csv(dir / "g.csv", g);
  CHECK(io::read_field_csv(dir / "g.csv") == g);
}

TEST_CASE("PGM heatmap") {
  auto dir = scratch("pgm");
  Field f(4, 3);
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t k = 0; k < 4; ++k) f(k, l) = static_cast<double>(l);  // brighter upward
  io::write_pgm(dir / "f.pgm", f, {0.0, 2.0});
  const std::string pgm = slurp(dir / "f.pgm");
  const std::string header = "P5\n4 3\n255\n";
  REQUIRE(pgm.size() == header.size() + 12);
  CHECK(pgm.substr(0, header.size()) == header);
  // Top image row is y = B.
  CHECK(static_cast<unsigned char>(pgm[header.size()]) == 255);
  CHECK(static_cast<unsigned char>(pgm[header.size() + 8]) == 0);
  CHECK(static_cast<unsigned char>(pgm[header.size() + 4]) == 128);

  const std::string side = slurp(dir / "f.pgm.txt");
  CHECK(side.find("scale_min") != std::string::npos);
  CHECK(side.find("scale_max") != std::string::npos);

  // Values outside the scale clamp.
  io::write_pgm(dir / "c.pgm", Field(2, 2, 50.0), {0.0, 20.0});
  CHECK(static_cast<unsigned char>(slurp(dir / "c.pgm").back()) == 255);

  auto flat = io::min_max_scale(Field(2, 2, 0.0));
  CHECK(flat.max > flat.min);
}

TEST_CASE("write_text reports failures") {
  CHECK_THROWS(io::write_text("/nonexistent-dir/x/y.txt", "z"));
}
