#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "csbound/errors.hpp"
#include "csbound/run_record.hpp"
#include "support.hpp"

using namespace csbound;

namespace {

TEST(Floor6, RoundsDown) {
  EXPECT_EQ(floor6(0.7272727272), "0.727272");
  EXPECT_EQ(floor6(0.6666666666), "0.666666");
  EXPECT_EQ(floor6(0.785841), "0.785841");
  EXPECT_EQ(floor6(0.5), "0.500000");
  EXPECT_EQ(floor6(0.0), "0.000000");
  EXPECT_EQ(floor6(0.1999999999), "0.199999");
  // Values just at a six-decimal step stay on it.
  for (int k = 0; k < 1000000; k += 997) {
    const double v = k / 1e6;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    EXPECT_EQ(floor6(v), buf) << k;
  }
}

TEST(Csv, HeaderAndRow) {
  EXPECT_STREQ(kCsvHeader, "sigma,d,ell,iterations,r,epsilon,lower_bound,wall_seconds,threads,mode");
  TripletResult t;
  t.r = 0.375;
  t.epsilon = 0.0;
  t.lower_bound = 0.75;
  t.iterations_run = 12;
  const auto rec = make_record(2, 2, 3, t, 1.5, 4, "disk", 4);
  EXPECT_EQ(csv_row(rec), "2,2,3,12,0.375,0,0.75,1.5,4,disk");
  EXPECT_EQ(rec.element_width, 4u);
}

TEST(Csv, AppendWritesHeaderOnce) {
  csbound::testing::TempDir dir("csv");
  const auto path = dir.path() / "runs.csv";
  RunRecord r;
  r.lower_bound = 0.1;
  append_csv(path, r);
  append_csv(path, r);
  std::ifstream in(path);
  std::string line;
  int lines = 0, headers = 0;
  while (std::getline(in, line)) {
    ++lines;
    headers += line == kCsvHeader;
  }
  EXPECT_EQ(lines, 3);
  EXPECT_EQ(headers, 1);
  EXPECT_THROW(append_csv(dir.path() / "no" / "such" / "dir.csv", r), IoError);
}

TEST(ParseSize, Units) {
  EXPECT_EQ(parse_size("1048576"), 1048576u);
  EXPECT_EQ(parse_size("16MiB"), 16u << 20);
  EXPECT_EQ(parse_size("64k"), 64u << 10);
  EXPECT_EQ(parse_size("2GiB"), 2ull << 30);
  EXPECT_EQ(parse_size("1TB"), 1ull << 40);
  EXPECT_THROW(parse_size("MiB"), InvalidInput);
  EXPECT_THROW(parse_size("12 parsecs"), InvalidInput);
  EXPECT_THROW(parse_size("99999999999999999999"), InvalidInput);
  EXPECT_THROW(parse_size("20000000000TiB"), InvalidInput);
}

}  // namespace
