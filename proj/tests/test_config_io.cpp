#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "swingid/config.hpp"
#include "swingid/csv.hpp"
#include "swingid/errors.hpp"

using namespace swingid;

TEST_CASE("config parses key-value lines with comments and prefixes") {
  auto cfg = Config::from_string(
      "# comment line\n"
      "model.thigh.mass = 6.5\n"
      "model.thigh.length = 0.42   # trailing comment\n"
      "run.label = trial_a\n"
      "run.full = true\n"
      "\n");
  CHECK(cfg.get_double("model.thigh.mass") == 6.5);
  CHECK(cfg.get_double("model.thigh.length") == 0.42);
  CHECK(cfg.get_string("run.label") == "trial_a");
  CHECK(cfg.get_bool("run.full") == true);
  CHECK(cfg.get_double("absent", 1.25) == 1.25);
  CHECK_THROWS_AS(cfg.get_double("absent"), ConfigError);
  CHECK_THROWS_AS(cfg.get_double("run.label"), ConfigError);

  auto keys = cfg.keys_with_prefix("model.");
  REQUIRE(keys.size() == 2);
  CHECK(keys[0] == "model.thigh.length");
  CHECK(keys[1] == "model.thigh.mass");
}

TEST_CASE("config rejects malformed lines") {
  CHECK_THROWS_AS(Config::from_string("novalue\n"), ConfigError);
  CHECK_THROWS_AS(Config::from_string("= 3\n"), ConfigError);
}

TEST_CASE("config serialization is canonical and fingerprint is stable") {
  auto a = Config::from_string("b = 2\na = 1\n");
  auto b = Config::from_string("a = 1\n# x\nb = 2\n");
  CHECK(a.serialize() == "a = 1\nb = 2\n");
  CHECK(a.serialize() == b.serialize());
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint().size() == 16);
  b.set("c", "3");
  CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("csv round trip preserves values and header") {
  namespace fs = std::filesystem;
  const auto path = fs::temp_directory_path() / "swingid_test_roundtrip.csv";
  CsvTable t;
  t.header = {"t", "value"};
  t.cols = {{0.0, 0.0078125, 0.015625}, {1.5, -2.25e-7, 3.0}};
  write_csv(path.string(), t);
  auto back = read_csv(path.string());
  REQUIRE(back.header == t.header);
  REQUIRE(back.rows() == 3);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(back.cols[j][i] == doctest::Approx(t.cols[j][i]).epsilon(1e-12));
  fs::remove(path);
}

TEST_CASE("csv loader reports schema problems") {
  namespace fs = std::filesystem;
  const auto path = fs::temp_directory_path() / "swingid_test_bad.csv";
  {
    std::ofstream out(path);
    out << "a,b\n1.0\n";
  }
  CHECK_THROWS_AS(read_csv(path.string()), IoError);
  {
    std::ofstream out(path);
    out << "a,b\n1.0,nan\n";
  }
  CHECK_THROWS_AS(read_csv(path.string()), ValidationError);
  {
    std::ofstream out(path);
    out << "a,b\n1.0,zzz\n";
  }
  CHECK_THROWS_AS(read_csv(path.string()), IoError);
  fs::remove(path);
  CHECK_THROWS_AS(read_csv((fs::temp_directory_path() / "swingid_missing.csv").string()),
                  IoError);
}
