#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dpag::data {

// categorical  -> one-hot block of |categories| columns
// binary_label -> single 0/1 column (1 means the second category)
// continuous   -> single column min-max scaled into [0,1]
enum class ColumnKind { Categorical, BinaryLabel, Continuous };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Categorical;
  std::vector<std::string> categories;  // categorical / binary_label
  double min = 0.0;                     // continuous
  double max = 0.0;

  std::size_t encoded_width() const;
  bool is_binary() const {
    return kind == ColumnKind::BinaryLabel ||
           (kind == ColumnKind::Categorical && categories.size() == 2);
  }
};

struct Schema {
  std::vector<ColumnSpec> columns;
  std::vector<std::string> drop;  // input columns to ignore

  std::size_t encoded_width() const;
  // Start offset of each column's encoded slice, plus a final sentinel at
  // encoded_width(); length columns.size() + 1.
  std::vector<std::size_t> offsets() const;
  std::size_t column_index(const std::string& name) const;

  void validate() const;
  std::string to_json() const;
  static Schema from_json(const std::string& text);
  static Schema load(const std::string& path);
  void save(const std::string& path) const;
};

}  // namespace dpag::data
