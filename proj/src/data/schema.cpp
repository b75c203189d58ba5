#include "dpautogan/data/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dpag::data {

using nlohmann::json;

std::size_t ColumnSpec::encoded_width() const {
  switch (kind) {
    case ColumnKind::Categorical:
      return categories.size();
    case ColumnKind::BinaryLabel:
    case ColumnKind::Continuous:
      return 1;
  }
  return 0;
}

std::size_t Schema::encoded_width() const {
  std::size_t n = 0;
  for (const ColumnSpec& c : columns) n += c.encoded_width();
  return n;
}

std::vector<std::size_t> Schema::offsets() const {
  std::vector<std::size_t> off;
  off.reserve(columns.size() + 1);
  std::size_t n = 0;
  for (const ColumnSpec& c : columns) {
    off.push_back(n);
    n += c.encoded_width();
  }
  off.push_back(n);
  return off;
}

std::size_t Schema::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return i;
  throw std::invalid_argument("no such column: " + name);
}

void Schema::validate() const {
  if (columns.empty()) throw std::invalid_argument("schema has no columns");
  std::set<std::string> names;
  for (const ColumnSpec& c : columns) {
    if (c.name.empty()) throw std::invalid_argument("unnamed column");
    if (!names.insert(c.name).second)
      throw std::invalid_argument("duplicate column: " + c.name);
    switch (c.kind) {
      case ColumnKind::Categorical: {
        if (c.categories.empty())
          throw std::invalid_argument("column " + c.name +
                                      " has no categories");
        std::set<std::string> cats(c.categories.begin(), c.categories.end());
        if (cats.size() != c.categories.size())
          throw std::invalid_argument("column " + c.name +
                                      " has duplicate categories");
        break;
      }
      case ColumnKind::BinaryLabel:
        if (c.categories.size() != 2)
          throw std::invalid_argument("binary column " + c.name +
                                      " needs exactly two categories");
        if (c.categories[0] == c.categories[1])
          throw std::invalid_argument("binary column " + c.name +
                                      " has duplicate categories");
        break;
      case ColumnKind::Continuous:
        if (!(c.min < c.max))
          throw std::invalid_argument("column " + c.name +
                                      " needs min < max");
        break;
    }
  }
  for (const std::string& d : drop)
    if (names.count(d))
      throw std::invalid_argument("column " + d + " is both kept and dropped");
}

std::string Schema::to_json() const {
  json j;
  j["columns"] = json::array();
  for (const ColumnSpec& c : columns) {
    json e;
    e["name"] = c.name;
    switch (c.kind) {
      case ColumnKind::Categorical:
        e["kind"] = "categorical";
        e["categories"] = c.categories;
        break;
      case ColumnKind::BinaryLabel:
        e["kind"] = "binary_label";
        e["categories"] = c.categories;
        break;
      case ColumnKind::Continuous:
        e["kind"] = "continuous";
        e["min"] = c.min;
        e["max"] = c.max;
        break;
    }
    j["columns"].push_back(e);
  }
  j["drop"] = drop;
  return j.dump(2);
}

Schema Schema::from_json(const std::string& text) {
  json j = json::parse(text);
  Schema s;
  for (const json& e : j.at("columns")) {
    ColumnSpec c;
    c.name = e.at("name").get<std::string>();
    const std::string kind = e.at("kind").get<std::string>();
    if (kind == "categorical") {
      c.kind = ColumnKind::Categorical;
      c.categories = e.at("categories").get<std::vector<std::string>>();
    } else if (kind == "binary_label" || kind == "binary") {
      c.kind = ColumnKind::BinaryLabel;
      c.categories = e.at("categories").get<std::vector<std::string>>();
    } else if (kind == "continuous") {
      c.kind = ColumnKind::Continuous;
      c.min = e.at("min").get<double>();
      c.max = e.at("max").get<double>();
    } else {
      throw std::invalid_argument("unknown column kind: " + kind);
    }
    s.columns.push_back(std::move(c));
  }
  if (j.contains("drop"))
    s.drop = j["drop"].get<std::vector<std::string>>();
  s.validate();
  return s;
}

Schema Schema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void Schema::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write schema file " + path);
  out << to_json() << "\n";
}

}  // namespace dpag::data
