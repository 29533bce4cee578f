#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "horizonlaw/csv.hpp"

namespace hl = horizonlaw;

namespace {

std::string temp_path(const char* stem) {
  return std::string("csv_test_") + stem + ".csv";
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("csv") {

TEST_CASE("header detection and synthesized names") {
  const hl::Table with = hl::parse_table("x,y\n1,2\n3,4\n");
  CHECK(with.had_header);
  REQUIRE(with.column_names.size() == 2);
  CHECK(with.column_names[0] == "x");
  CHECK(with.column_names[1] == "y");
  CHECK(with.values.rows() == 2);
  CHECK(with.values(1, 1) == 4.0);

  const hl::Table without = hl::parse_table("1,2\n3,4\n");
  CHECK_FALSE(without.had_header);
  CHECK(without.column_names[0] == "c1");
  CHECK(without.column_names[1] == "c2");
  CHECK(without.values.rows() == 2);
}

TEST_CASE("forced header modes override detection") {
  hl::CsvOptions opt;
  opt.header = hl::CsvOptions::Header::no;
  // "x,y" is not numeric, so forcing header=no must fail on the first row.
  CHECK_THROWS_AS(hl::parse_table("x,y\n1,2\n", opt), hl::parse_error);

  opt.header = hl::CsvOptions::Header::yes;
  const hl::Table t = hl::parse_table("1,2\n3,4\n", opt);
  CHECK(t.had_header);
  CHECK(t.column_names[0] == "1");
  CHECK(t.values.rows() == 1);
  CHECK(t.values(0, 0) == 3.0);
}

TEST_CASE("whitespace trimming, blank lines, CRLF") {
  const hl::Table t = hl::parse_table(" a , b \r\n 1 ,\t2\r\n\n  \n3,4\n");
  CHECK(t.had_header);
  CHECK(t.column_names[0] == "a");
  CHECK(t.values.rows() == 2);
  CHECK(t.values(0, 1) == 2.0);
  CHECK(t.values(1, 0) == 3.0);
}

TEST_CASE("errors carry 1-based positions and exact messages") {
  try {
    hl::parse_table("x,y\n1,2\n3\n");
    FAIL("expected parse_error");
  } catch (const hl::parse_error& e) {
    CHECK(std::string(e.what()) == "row 2 has 1 cells, expected 2");
    CHECK(e.row == 2);
  }

  try {
    hl::parse_table("x,y\n1,oops\n");
    FAIL("expected parse_error");
  } catch (const hl::parse_error& e) {
    CHECK(std::string(e.what()) == "cannot parse 'oops' at row 1, column 2");
    CHECK(e.row == 1);
    CHECK(e.col == 2);
  }

  CHECK_THROWS_WITH_AS(hl::parse_table(""), "empty input", hl::parse_error);
  CHECK_THROWS_WITH_AS(hl::parse_table("x,y\n"), "no data rows", hl::parse_error);
}

TEST_CASE("gap policy: reject") {
  try {
    hl::parse_table("x,y\n1,\n");
    FAIL("expected parse_error");
  } catch (const hl::parse_error& e) {
    CHECK(std::string(e.what()) == "missing value at row 1, column 2");
    CHECK(e.row == 1);
    CHECK(e.col == 2);
  }
  // "NaN" in any case counts as a gap.
  CHECK_THROWS_AS(hl::parse_table("x,y\n1,NaN\n"), hl::parse_error);
  CHECK_THROWS_AS(hl::parse_table("x,y\n1,nan\n"), hl::parse_error);
}

TEST_CASE("gap policy: drop_row keeps only complete rows") {
  hl::CsvOptions opt;
  opt.gaps = hl::GapPolicy::drop_row;
  const hl::Table t = hl::parse_table("x,y\n1,2\n3,\n5,6\n", opt);
  REQUIRE(t.values.rows() == 2);
  CHECK(t.values(0, 0) == 1.0);
  CHECK(t.values(1, 0) == 5.0);

  // Dropping every row leaves nothing.
  CHECK_THROWS_WITH_AS(hl::parse_table("x,y\n1,\n,2\n", opt), "no data rows",
                       hl::parse_error);
}

TEST_CASE("gap policy: interpolate fills interior and extends edges") {
  hl::CsvOptions opt;
  opt.gaps = hl::GapPolicy::interpolate;
  // Blank lines are skipped outright, so single-column gaps spell out "nan".
  const hl::Table t = hl::parse_table("v\nnan\n10\nnan\nnan\n40\nnan\n", opt);
  REQUIRE(t.values.rows() == 6);
  CHECK(t.values(0, 0) == 10.0);  // leading gap copies first known value
  CHECK(t.values(1, 0) == 10.0);
  CHECK(t.values(2, 0) == doctest::Approx(20.0));  // linear in row index
  CHECK(t.values(3, 0) == doctest::Approx(30.0));
  CHECK(t.values(4, 0) == 40.0);
  CHECK(t.values(5, 0) == 40.0);  // trailing gap copies last known value

  try {
    hl::parse_table("a,b\n1,\n2,\n", opt);
    FAIL("expected parse_error");
  } catch (const hl::parse_error& e) {
    CHECK(std::string(e.what()) == "column 2 has no values");
    CHECK(e.col == 2);
  }
}

TEST_CASE("scientific notation and signs parse exactly") {
  const hl::Table t = hl::parse_table("v\n-1.5e-3\n+2\n6.02e23\n");
  CHECK(t.values(0, 0) == -1.5e-3);
  CHECK(t.values(1, 0) == 2.0);
  CHECK(t.values(2, 0) == 6.02e23);
}

TEST_CASE("write_table round trip preserves values to 15 digits") {
  FileGuard guard{temp_path("roundtrip")};
  Eigen::MatrixXd m(2, 3);
  m << 1.0, 1.0 / 3.0, -2.718281828459045, 1e-12, 6.02e23, 0.1;
  hl::write_table(guard.path, {"a", "b", "c"}, m);

  const hl::Table t = hl::load_table(guard.path);
  REQUIRE(t.values.rows() == 2);
  REQUIRE(t.values.cols() == 3);
  CHECK(t.column_names[2] == "c");
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(t.values(r, c) == doctest::Approx(m(r, c)).epsilon(1e-14));
}

TEST_CASE("write_table validates column name count") {
  CHECK_THROWS_AS(hl::write_table(temp_path("never"), {"only_one"},
                                  Eigen::MatrixXd::Zero(1, 2)),
                  std::invalid_argument);
}

TEST_CASE("load_table missing file raises io_error") {
  CHECK_THROWS_AS(hl::load_table("definitely_absent_9a1b.csv"), hl::io_error);
}

TEST_CASE("format_double emits %.15g") {
  CHECK(hl::format_double(0.1) == "0.1");
  CHECK(hl::format_double(1.0 / 3.0) == "0.333333333333333");
  CHECK(hl::format_double(-2.5e-8) == "-2.5e-08");
}

}  // TEST_SUITE
