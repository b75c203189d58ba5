#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dpautogan/data/schema.hpp"
#include "dpautogan/matrix.hpp"

namespace dpag::data {

// Data error carrying 1-based row and the column name.
struct DataError : std::runtime_error {
  DataError(std::size_t row, const std::string& column,
            const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ", column " +
                           column + ": " + what) {}
};

// Typed column-major storage. Categorical and binary columns hold category
// indices; continuous columns hold raw (unscaled) values.
struct RawDataset {
  Schema schema;
  std::vector<std::vector<std::int32_t>> cat;  // per column; empty for cont
  std::vector<std::vector<double>> num;        // per column; empty for cat
  std::size_t rows = 0;

  std::string cell(std::size_t row, std::size_t col) const;
};

RawDataset load_csv(const std::string& path, const Schema& schema);
RawDataset parse_rows(const std::vector<std::vector<std::string>>& rows,
                      const Schema& schema);
void write_csv(const RawDataset& ds, const std::string& path);

// Encoded matrix in [0,1]^n with the schema's column offset table.
struct EncodedMatrix {
  Matrix values;
  std::vector<std::size_t> offsets;
};

EncodedMatrix preprocess(const RawDataset& raw);

// Inverse map for arbitrary finite real matrices: one-hot blocks decode by
// argmax (ties to the lowest index), binary columns by threshold at 0.5,
// continuous columns clamp to [0,1] before unscaling.
RawDataset postprocess(const Matrix& values, const Schema& schema);

struct SplitResult {
  RawDataset train;
  RawDataset test;
};

// Seeded shuffle split; preserve_order keeps file order instead (first
// fraction goes to train), for datasets with canonical splits.
SplitResult split(const RawDataset& ds, double train_fraction,
                  std::uint64_t seed, bool preserve_order = false);

RawDataset take_rows(const RawDataset& ds,
                     const std::vector<std::size_t>& indices);

// Scans a CSV and derives a schema: numeric columns become continuous with
// observed bounds, everything else categorical with categories in order of
// first appearance. Inferred bounds technically leak; callers must opt in.
Schema infer_schema(const std::string& path);

}  // namespace dpag::data
