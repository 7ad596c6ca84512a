#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "dsvnlms/trace_io.hpp"
#include "hand_traces.hpp"

using namespace dsvnlms;

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-1.0 / 3.0), "-0.33333333333333331");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  EXPECT_EQ(std::stod(format_double(std::nextafter(0.3, 1.0))), std::nextafter(0.3, 1.0));
}

TEST(TraceCsv, RoundTripIsLossless) {
  auto records = hand::run_three_step();
  records[0].n = 0.1;
  records[0].e = std::nextafter(1.0, 2.0);
  std::stringstream ss;
  write_trace_csv(ss, records);
  const auto back = read_trace_csv(ss);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back[i].k, records[i].k);
    EXPECT_EQ(back[i].e, records[i].e);
    EXPECT_EQ(back[i].e_tilde, records[i].e_tilde);
    EXPECT_EQ(back[i].n, records[i].n);
    EXPECT_EQ(back[i].updated, records[i].updated);
    EXPECT_EQ(back[i].mu_bar, records[i].mu_bar);
    EXPECT_EQ(back[i].alpha, records[i].alpha);
    EXPECT_EQ(back[i].gamma_used, records[i].gamma_used);
    EXPECT_EQ(back[i].wtilde_sq_before, records[i].wtilde_sq_before);
    EXPECT_EQ(back[i].wtilde_sq_after, records[i].wtilde_sq_after);
    EXPECT_EQ(back[i].lhs, records[i].lhs);
    EXPECT_EQ(back[i].rhs, records[i].rhs);
  }
}

TEST(TraceCsv, HeaderAndLineEndings) {
  std::stringstream ss;
  write_trace_csv(ss, hand::run_single_step());
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kTraceHeader);
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(TraceCsv, MalformedInputs) {
  const std::string header = std::string(kTraceHeader) + "\n";
  std::istringstream empty("");
  EXPECT_THROW(read_trace_csv(empty), std::runtime_error);
  std::istringstream bad_header("k,e\n");
  EXPECT_THROW(read_trace_csv(bad_header), std::runtime_error);
  std::istringstream short_row(header + "0,1,2\n");
  EXPECT_THROW(read_trace_csv(short_row), std::runtime_error);
  std::istringstream bad_number(header + "0,x,1,0,1,0.5,1,0.5,1,0.25,0.75,1\n");
  EXPECT_THROW(read_trace_csv(bad_number), std::runtime_error);
  std::istringstream bad_flag(header + "0,1,1,0,2,0.5,1,0.5,1,0.25,0.75,1\n");
  EXPECT_THROW(read_trace_csv(bad_flag), std::runtime_error);
  try {
    std::istringstream s(header + "0,1,1,0,1,0.5,1,0.5,1,0.25,0.75,1\n1,oops,1,0,1,0.5,1,0.5,1,0.25,0.75,1\n");
    read_trace_csv(s);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(TraceCsv, CrlfAccepted) {
  std::istringstream s(std::string(kTraceHeader) + "\r\n0,1,1,0,1,0.5,1,0.5,1,0.25,0.75,1\r\n");
  EXPECT_EQ(read_trace_csv(s).size(), 1u);
}

TEST(CheckTrace, CleanAndCorrupted) {
  auto records = hand::run_three_step();
  EXPECT_TRUE(check_trace(records).ok());
  records[2].lhs = records[2].rhs + 0.1;
  const TraceCheck c = check_trace(records);
  EXPECT_FALSE(c.ok());
  EXPECT_EQ(c.local_violations, 1u);
  ASSERT_EQ(c.violating_rows.size(), 1u);
  EXPECT_EQ(c.violating_rows[0], 2u);
  EXPECT_EQ(check_trace({}).rows, 0u);
}

TEST(CurveCsv, Format) {
  std::ostringstream os;
  const std::vector<double> v{1.0, 0.5};
  write_curve_csv(os, "l", v);
  EXPECT_EQ(os.str(), "k,l\n0,1\n1,0.5\n");
}
