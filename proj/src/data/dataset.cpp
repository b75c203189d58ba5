#include "dpautogan/data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "dpautogan/data/csv.hpp"
#include "dpautogan/rng.hpp"

namespace dpag::data {

namespace {

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [p, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && p == end;
}

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace

std::string RawDataset::cell(std::size_t row, std::size_t col) const {
  const ColumnSpec& c = schema.columns[col];
  if (c.kind == ColumnKind::Continuous) return format_double(num[col][row]);
  return c.categories[cat[col][row]];
}

RawDataset parse_rows(const std::vector<std::vector<std::string>>& rows,
                      const Schema& schema) {
  schema.validate();
  if (rows.empty()) throw std::runtime_error("empty csv");
  const std::vector<std::string>& header = rows.front();

  // Map each schema column to its position in the file; dropped columns are
  // ignored, anything else unknown is treated as a schema mismatch.
  std::vector<std::size_t> pos(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    auto it = std::find(header.begin(), header.end(), schema.columns[c].name);
    if (it == header.end())
      throw std::runtime_error("csv header is missing column " +
                               schema.columns[c].name);
    pos[c] = static_cast<std::size_t>(it - header.begin());
  }
  for (const std::string& h : header) {
    const bool kept = std::any_of(
        schema.columns.begin(), schema.columns.end(),
        [&](const ColumnSpec& c) { return c.name == h; });
    const bool dropped =
        std::find(schema.drop.begin(), schema.drop.end(), h) !=
        schema.drop.end();
    if (!kept && !dropped)
      throw std::runtime_error("csv column " + h +
                               " is neither in the schema nor dropped");
  }

  RawDataset ds;
  ds.schema = schema;
  ds.cat.resize(schema.columns.size());
  ds.num.resize(schema.columns.size());
  ds.rows = rows.size() - 1;

  // Category name -> index lookup per column.
  std::vector<std::map<std::string, std::int32_t>> lookup(
      schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const ColumnSpec& col = schema.columns[c];
    if (col.kind == ColumnKind::Continuous) {
      ds.num[c].reserve(ds.rows);
    } else {
      ds.cat[c].reserve(ds.rows);
      for (std::size_t k = 0; k < col.categories.size(); ++k)
        lookup[c][col.categories[k]] = static_cast<std::int32_t>(k);
    }
  }

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::vector<std::string>& row = rows[r];
    if (row.size() != header.size())
      throw DataError(r, "<row>", "expected " + std::to_string(header.size()) +
                                      " fields, found " +
                                      std::to_string(row.size()));
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const ColumnSpec& col = schema.columns[c];
      const std::string& value = row[pos[c]];
      if (col.kind == ColumnKind::Continuous) {
        double v;
        if (!parse_double(value, v))
          throw DataError(r, col.name, "not a number: '" + value + "'");
        if (v < col.min || v > col.max)
          throw DataError(r, col.name,
                          "value " + value + " outside declared bounds [" +
                              format_double(col.min) + ", " +
                              format_double(col.max) + "]");
        ds.num[c].push_back(v);
      } else {
        auto it = lookup[c].find(value);
        if (it == lookup[c].end())
          throw DataError(r, col.name, "unknown category '" + value + "'");
        ds.cat[c].push_back(it->second);
      }
    }
  }
  return ds;
}

RawDataset load_csv(const std::string& path, const Schema& schema) {
  return parse_rows(read_csv_file(path), schema);
}

void write_csv(const RawDataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  std::vector<std::string> header;
  for (const ColumnSpec& c : ds.schema.columns) header.push_back(c.name);
  write_csv_row(out, header);
  std::vector<std::string> row(ds.schema.columns.size());
  for (std::size_t r = 0; r < ds.rows; ++r) {
    for (std::size_t c = 0; c < ds.schema.columns.size(); ++c)
      row[c] = ds.cell(r, c);
    write_csv_row(out, row);
  }
}

EncodedMatrix preprocess(const RawDataset& raw) {
  const Schema& schema = raw.schema;
  EncodedMatrix enc;
  enc.offsets = schema.offsets();
  enc.values = Matrix(raw.rows, schema.encoded_width());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const ColumnSpec& col = schema.columns[c];
    const std::size_t off = enc.offsets[c];
    switch (col.kind) {
      case ColumnKind::Categorical:
        for (std::size_t r = 0; r < raw.rows; ++r)
          enc.values(r, off + raw.cat[c][r]) = 1.0;
        break;
      case ColumnKind::BinaryLabel:
        for (std::size_t r = 0; r < raw.rows; ++r)
          enc.values(r, off) = raw.cat[c][r] == 1 ? 1.0 : 0.0;
        break;
      case ColumnKind::Continuous:
        for (std::size_t r = 0; r < raw.rows; ++r)
          enc.values(r, off) = (raw.num[c][r] - col.min) / (col.max - col.min);
        break;
    }
  }
  return enc;
}

RawDataset postprocess(const Matrix& values, const Schema& schema) {
  schema.validate();
  if (values.cols() != schema.encoded_width())
    throw std::invalid_argument("matrix width does not match schema");
  for (double v : values.data())
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite entry");

  RawDataset ds;
  ds.schema = schema;
  ds.rows = values.rows();
  ds.cat.resize(schema.columns.size());
  ds.num.resize(schema.columns.size());
  const std::vector<std::size_t> off = schema.offsets();

  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const ColumnSpec& col = schema.columns[c];
    switch (col.kind) {
      case ColumnKind::Categorical: {
        ds.cat[c].resize(ds.rows);
        const std::size_t width = col.categories.size();
        for (std::size_t r = 0; r < ds.rows; ++r) {
          std::size_t best = 0;
          for (std::size_t k = 1; k < width; ++k)
            if (values(r, off[c] + k) > values(r, off[c] + best)) best = k;
          ds.cat[c][r] = static_cast<std::int32_t>(best);
        }
        break;
      }
      case ColumnKind::BinaryLabel: {
        ds.cat[c].resize(ds.rows);
        for (std::size_t r = 0; r < ds.rows; ++r)
          ds.cat[c][r] = values(r, off[c]) > 0.5 ? 1 : 0;
        break;
      }
      case ColumnKind::Continuous: {
        ds.num[c].resize(ds.rows);
        for (std::size_t r = 0; r < ds.rows; ++r) {
          const double u = std::clamp(values(r, off[c]), 0.0, 1.0);
          ds.num[c][r] = col.min + u * (col.max - col.min);
        }
        break;
      }
    }
  }
  return ds;
}

RawDataset take_rows(const RawDataset& ds,
                     const std::vector<std::size_t>& indices) {
  RawDataset out;
  out.schema = ds.schema;
  out.rows = indices.size();
  out.cat.resize(ds.cat.size());
  out.num.resize(ds.num.size());
  for (std::size_t c = 0; c < ds.schema.columns.size(); ++c) {
    if (!ds.cat[c].empty()) {
      out.cat[c].reserve(indices.size());
      for (std::size_t i : indices) out.cat[c].push_back(ds.cat[c][i]);
    }
    if (!ds.num[c].empty()) {
      out.num[c].reserve(indices.size());
      for (std::size_t i : indices) out.num[c].push_back(ds.num[c][i]);
    }
  }
  return out;
}

SplitResult split(const RawDataset& ds, double train_fraction,
                  std::uint64_t seed, bool preserve_order) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train fraction must lie in (0,1)");
  std::vector<std::size_t> idx(ds.rows);
  std::iota(idx.begin(), idx.end(), 0);
  if (!preserve_order) {
    Rng rng(seed);
    for (std::size_t i = ds.rows; i > 1; --i)
      std::swap(idx[i - 1], idx[rng.below(i)]);
  }
  const std::size_t k = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(ds.rows)));
  SplitResult r;
  r.train = take_rows(ds, {idx.begin(), idx.begin() + k});
  r.test = take_rows(ds, {idx.begin() + k, idx.end()});
  return r;
}

Schema infer_schema(const std::string& path) {
  const auto rows = read_csv_file(path);
  if (rows.size() < 2) throw std::runtime_error("csv needs a header and data");
  const std::vector<std::string>& header = rows.front();

  Schema schema;
  for (std::size_t c = 0; c < header.size(); ++c) {
    bool numeric = true;
    for (std::size_t r = 1; r < rows.size() && numeric; ++r) {
      double v;
      if (!parse_double(rows[r].at(c), v)) numeric = false;
    }
    ColumnSpec col;
    col.name = header[c];
    if (numeric) {
      col.kind = ColumnKind::Continuous;
      col.min = std::numeric_limits<double>::infinity();
      col.max = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 1; r < rows.size(); ++r) {
        double v;
        parse_double(rows[r][c], v);
        col.min = std::min(col.min, v);
        col.max = std::max(col.max, v);
      }
      if (col.min == col.max) col.max = col.min + 1.0;  // degenerate column
    } else {
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string& v = rows[r][c];
        if (std::find(col.categories.begin(), col.categories.end(), v) ==
            col.categories.end())
          col.categories.push_back(v);
      }
      col.kind = col.categories.size() == 2 ? ColumnKind::BinaryLabel
                                            : ColumnKind::Categorical;
    }
    schema.columns.push_back(std::move(col));
  }
  schema.validate();
  return schema;
}

}  // namespace dpag::data
