#include "tvgs/error.hpp"
#include "tvgs/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace tvgs;

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, -0.0}) {
    const std::string s = format_double(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(MatrixCsv, RoundTripBitExact) {
  Eigen::MatrixXd m(3, 4);
  m << 1.0 / 3, -2, 1e-17, 5, 0.1, 0.2, 0.3, 7e200, -1, 0, 2, 3;
  std::stringstream ss;
  write_matrix_csv(ss, m);
  std::istringstream in(ss.str());
  EXPECT_EQ(parse_matrix_csv(in), m);
}

TEST(MatrixCsv, Rejections) {
  std::istringstream ragged("1,2,3\n4,5\n");
  EXPECT_THROW(parse_matrix_csv(ragged), Error);
  std::istringstream empty("\n\n");
  EXPECT_THROW(parse_matrix_csv(empty), Error);
  std::istringstream text("1,x\n");
  EXPECT_THROW(parse_matrix_csv(text), Error);
  std::istringstream nonfinite("1,inf\n");
  EXPECT_THROW(parse_matrix_csv(nonfinite), Error);
  std::istringstream ok(" 1 , 2 \r\n\n3,4\n");
  EXPECT_EQ(parse_matrix_csv(ok).rows(), 2);
}

TEST(EdgeList, RoundTripAndValidation) {
  const VertexGraph g(4, {{0, 1, 0.5}, {2, 3, 1.25}});
  std::stringstream ss;
  write_edge_list_csv(ss, g);
  std::istringstream in(ss.str());
  const VertexGraph back = parse_edge_list_csv(in);
  ASSERT_EQ(back.num_edges(), 2);
  EXPECT_EQ(back.num_vertices(), 4);
  EXPECT_EQ(back.edges()[1].weight, 1.25);

  std::istringstream isolated("u,v,weight\n0,1,1\n");
  EXPECT_EQ(parse_edge_list_csv(isolated, Index{5}).num_vertices(), 5);
  std::istringstream header("a,b,c\n0,1,1\n");
  EXPECT_THROW(parse_edge_list_csv(header), Error);
  std::istringstream loop("u,v,weight\n1,1,1\n");
  EXPECT_THROW(parse_edge_list_csv(loop), Error);
  std::istringstream negative("u,v,weight\n0,1,-1\n");
  EXPECT_THROW(parse_edge_list_csv(negative), Error);
}

TEST(Fields, StrictParsing) {
  EXPECT_EQ(parse_double_field("2.5"), 2.5);
  EXPECT_EQ(parse_double_field("-1e-3"), -1e-3);
  EXPECT_THROW(parse_double_field("2.5x"), Error);
  EXPECT_THROW(parse_double_field(""), Error);
  const auto f = split_csv_line(" a, b ,c");
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[1], "b");
}

TEST(Files, MissingFileIsDataError) {
  try {
    read_text_file("/nonexistent/tvgs/file.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Data);
  }
}
