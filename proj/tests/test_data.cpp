#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <map>
#include <sstream>

#include "dpautogan/data/csv.hpp"
#include "dpautogan/data/dataset.hpp"
#include "dpautogan/data/schema.hpp"

using namespace dpag;
using namespace dpag::data;

namespace {

Schema toy_schema() {
  Schema s;
  s.columns.push_back({"color", ColumnKind::Categorical, {"a", "b", "c"}, 0, 0});
  s.columns.push_back({"flag", ColumnKind::BinaryLabel, {"no", "yes"}, 0, 0});
  s.columns.push_back({"level", ColumnKind::Continuous, {}, 0.0, 10.0});
  return s;
}

RawDataset toy_data(const std::string& csv) {
  std::istringstream in(csv);
  return parse_rows(read_csv(in), toy_schema());
}

}  // namespace

TEST_CASE("csv parsing handles quoting and padding") {
  std::istringstream in("a, b ,\"c,d\"\n\"x\"\"y\",2, 3 \n");
  auto rows = read_csv(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b", "c,d"});
  CHECK(rows[1] == std::vector<std::string>{"x\"y", "2", "3"});
}

TEST_CASE("two row file loads into typed rows") {
  RawDataset ds = toy_data("color,flag,level\na,yes,5\nc,no,0\n");
  REQUIRE(ds.rows == 2);
  CHECK(ds.cat[0][0] == 0);
  CHECK(ds.cat[0][1] == 2);
  CHECK(ds.cat[1][0] == 1);
  CHECK(ds.num[2][0] == 5.0);
}

TEST_CASE("unknown category names the row and column") {
  CHECK_THROWS_WITH_AS(toy_data("color,flag,level\nfoo,yes,5\n"),
                       doctest::Contains("column color"), DataError);
  try {
    toy_data("color,flag,level\na,yes,5\nb,maybe,2\n");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    CHECK(std::string(e.what()).find("flag") != std::string::npos);
  }
}

TEST_CASE("out of bounds continuous value is rejected") {
  CHECK_THROWS_AS(toy_data("color,flag,level\na,yes,11\n"), DataError);
}

TEST_CASE("dropped columns are ignored, unknown ones rejected") {
  Schema s = toy_schema();
  s.drop.push_back("junk");
  std::istringstream in("color,junk,flag,level\na,zzz,yes,5\n");
  RawDataset ds = parse_rows(read_csv(in), s);
  CHECK(ds.rows == 1);

  std::istringstream in2("color,surprise,flag,level\na,zzz,yes,5\n");
  CHECK_THROWS(parse_rows(read_csv(in2), toy_schema()));
}

TEST_CASE("preprocess encodes one-hot, binary, and scaled continuous") {
  RawDataset ds = toy_data("color,flag,level\nb,yes,5\na,no,0\nc,no,10\n");
  EncodedMatrix enc = preprocess(ds);
  REQUIRE(enc.values.cols() == 5);  // 3 + 1 + 1
  // one-hot of 'b'
  CHECK(enc.values(0, 0) == 0.0);
  CHECK(enc.values(0, 1) == 1.0);
  CHECK(enc.values(0, 2) == 0.0);
  CHECK(enc.values(0, 3) == 1.0);  // yes
  CHECK(enc.values(0, 4) == 0.5);  // (5-0)/10
  CHECK(enc.values(1, 4) == 0.0);  // min -> 0
  CHECK(enc.values(2, 4) == 1.0);  // max -> 1
}

TEST_CASE("offset table covers the encoded width without gaps") {
  Schema s = toy_schema();
  auto off = s.offsets();
  REQUIRE(off.size() == 4);
  CHECK(off[0] == 0);
  CHECK(off[1] == 3);
  CHECK(off[2] == 4);
  CHECK(off[3] == 5);
  CHECK(off.back() == s.encoded_width());
}

TEST_CASE("postprocess decodes argmax, threshold, and clamp") {
  Schema s = toy_schema();
  Matrix m = Matrix::from_rows({{0.1, 0.7, 0.2, 0.9, 1.3},
                                {0.4, 0.4, 0.2, 0.5, -0.5}});
  RawDataset ds = postprocess(m, s);
  CHECK(ds.cell(0, 0) == "b");   // argmax
  CHECK(ds.cell(0, 1) == "yes");
  CHECK(ds.num[2][0] == 10.0);   // clamped above
  CHECK(ds.cell(1, 0) == "a");   // tie breaks to the lowest index
  CHECK(ds.cell(1, 1) == "no");  // 0.5 is not > 0.5
  CHECK(ds.num[2][1] == 0.0);    // clamped below
}

TEST_CASE("postprocess then preprocess round trips in-bounds data") {
  RawDataset ds = toy_data("color,flag,level\nb,yes,5\na,no,0\nc,no,10\n");
  EncodedMatrix enc = preprocess(ds);
  RawDataset back = postprocess(enc.values, ds.schema);
  for (std::size_t r = 0; r < ds.rows; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(back.cell(r, c) == ds.cell(r, c));
}

TEST_CASE("split sizes, determinism, and multiset preservation") {
  std::ostringstream csv;
  csv << "color,flag,level\n";
  for (int i = 0; i < 300; ++i)
    csv << "abc"[i % 3] << ",yes," << (i % 11) << "\n";
  RawDataset ds = toy_data(csv.str());

  SplitResult sp = split(ds, 2.0 / 3.0, 99);
  CHECK(sp.train.rows == 200);
  CHECK(sp.test.rows == 100);

  SplitResult sp2 = split(ds, 2.0 / 3.0, 99);
  CHECK(sp2.train.cat[0] == sp.train.cat[0]);
  CHECK(sp2.test.num[2] == sp.test.num[2]);

  // Union of the parts is the original multiset.
  std::map<std::string, int> counts;
  for (std::size_t r = 0; r < ds.rows; ++r)
    counts[ds.cell(r, 0) + "|" + ds.cell(r, 1) + "|" + ds.cell(r, 2)]++;
  for (std::size_t r = 0; r < sp.train.rows; ++r)
    counts[sp.train.cell(r, 0) + "|" + sp.train.cell(r, 1) + "|" +
           sp.train.cell(r, 2)]--;
  for (std::size_t r = 0; r < sp.test.rows; ++r)
    counts[sp.test.cell(r, 0) + "|" + sp.test.cell(r, 1) + "|" +
           sp.test.cell(r, 2)]--;
  for (const auto& [key, n] : counts) CHECK(n == 0);
}

TEST_CASE("paper split sizes on the canonical row count") {
  std::ostringstream csv;
  csv << "color,flag,level\n";
  for (int i = 0; i < 48842; ++i) csv << "a,yes,1\n";
  RawDataset ds = toy_data(csv.str());
  SplitResult sp = split(ds, 2.0 / 3.0, 1);
  CHECK(sp.train.rows == 32561);
  CHECK(sp.test.rows == 16281);
}

TEST_CASE("csv write/read round trip") {
  RawDataset ds = toy_data("color,flag,level\nb,yes,5.25\na,no,0\n");
  write_csv(ds, "/tmp/dpag_test_roundtrip.csv");
  RawDataset back = load_csv("/tmp/dpag_test_roundtrip.csv", ds.schema);
  REQUIRE(back.rows == ds.rows);
  for (std::size_t r = 0; r < ds.rows; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(back.cell(r, c) == ds.cell(r, c));
}

TEST_CASE("schema json round trip and validation") {
  Schema s = toy_schema();
  s.drop.push_back("fnlwgt");
  Schema back = Schema::from_json(s.to_json());
  CHECK(back.columns.size() == 3);
  CHECK(back.encoded_width() == 5);
  CHECK(back.drop == std::vector<std::string>{"fnlwgt"});

  Schema dup = toy_schema();
  dup.columns.push_back(dup.columns.front());
  CHECK_THROWS(dup.validate());

  Schema bad_bounds = toy_schema();
  bad_bounds.columns[2].min = 11.0;
  CHECK_THROWS(bad_bounds.validate());
}

TEST_CASE("schema inference finds kinds, categories, and bounds") {
  {
    std::ofstream out("/tmp/dpag_test_infer.csv");
    out << "x,y,z\n1.5,a,yes\n2.5,b,no\n0.5,a,yes\n";
  }
  Schema s = infer_schema("/tmp/dpag_test_infer.csv");
  REQUIRE(s.columns.size() == 3);
  CHECK(s.columns[0].kind == ColumnKind::Continuous);
  CHECK(s.columns[0].min == 0.5);
  CHECK(s.columns[0].max == 2.5);
  CHECK(s.columns[1].kind == ColumnKind::BinaryLabel);
  CHECK(s.columns[1].categories == std::vector<std::string>{"a", "b"});
  CHECK(s.columns[2].kind == ColumnKind::BinaryLabel);
}
