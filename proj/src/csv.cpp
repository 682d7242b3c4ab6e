#include "reps/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace reps {

namespace {

using nlohmann::json;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace

SchemaDecl SchemaDecl::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid schema JSON in '" + path + "': " + e.what());
  }
  SchemaDecl decl;
  try {
    for (const auto& col : j.at("columns")) {
      FeatureDescriptor f;
      f.name = col.at("name").get<std::string>();
      const auto kind = col.at("kind").get<std::string>();
      if (kind == "continuous") {
        f.kind = FeatureKind::kContinuous;
      } else if (kind == "categorical") {
        f.kind = FeatureKind::kCategorical;
        for (const auto& c : col.at("categories"))
          f.categories.push_back(c.get<std::string>());
      } else {
        throw ConfigError("unknown column kind '" + kind + "'");
      }
      decl.schema.features.push_back(std::move(f));
    }
    decl.schema.label_name = j.at("label").get<std::string>();
    for (const auto& c : j.at("label_classes"))
      decl.schema.label_classes.push_back(c.get<std::string>());
    decl.open_categories = j.value("open_categories", false);
  } catch (const json::exception& e) {
    throw ConfigError("schema JSON missing field: " + std::string(e.what()));
  }
  decl.schema.validate();
  return decl;
}

void SchemaDecl::to_json_file(const std::string& path) const {
  json j;
  j["columns"] = json::array();
  for (const auto& f : schema.features) {
    json col;
    col["name"] = f.name;
    if (f.kind == FeatureKind::kContinuous) {
      col["kind"] = "continuous";
    } else {
      col["kind"] = "categorical";
      col["categories"] = f.categories;
    }
    j["columns"].push_back(col);
  }
  j["label"] = schema.label_name;
  j["label_classes"] = schema.label_classes;
  j["open_categories"] = open_categories;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write schema file '" + path + "'");
  out << j.dump(2) << "\n";
}

void save_csv(const Dataset& dataset, const std::string& csv_path) {
  std::ofstream out(csv_path);
  if (!out) throw IoError("cannot write '" + csv_path + "'");
  out.precision(17);
  for (const auto& f : dataset.schema.features) out << f.name << ",";
  out << dataset.schema.label_name << "\n";
  for (const auto& row : dataset.rows) {
    std::size_t ci = 0, ki = 0;
    for (const auto& f : dataset.schema.features) {
      if (f.kind == FeatureKind::kContinuous)
        out << row.continuous_values[ci++] << ",";
      else
        out << f.categories[row.categorical_values[ki++]] << ",";
    }
    out << dataset.schema.label_classes[row.label] << "\n";
  }
  if (!out) throw IoError("write failed for '" + csv_path + "'");
}

Dataset load_csv(const std::string& csv_path, const SchemaDecl& decl) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open '" + csv_path + "'");

  Dataset out;
  out.schema = decl.schema;

  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatch("empty CSV file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_line(line);
  std::vector<std::string> expected;
  for (const auto& f : out.schema.features) expected.push_back(f.name);
  expected.push_back(out.schema.label_name);
  if (header != expected)
    throw SchemaMismatch("CSV header does not match schema declaration");

  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != expected.size())
      throw ParseError(row_no, cells.size(),
                       "expected " + std::to_string(expected.size()) +
                           " cells, got " + std::to_string(cells.size()));
    Record r;
    for (std::size_t c = 0; c < out.schema.features.size(); ++c) {
      auto& f = out.schema.features[c];
      const std::string& cell = cells[c];
      if (f.kind == FeatureKind::kContinuous) {
        double v = 0.0;
        const char* begin = cell.data();
        const char* end = begin + cell.size();
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc{} || ptr != end)
          throw ParseError(row_no, c + 1,
                           "non-numeric cell '" + cell + "'");
        r.continuous_values.push_back(v);
      } else {
        auto it = std::find(f.categories.begin(), f.categories.end(), cell);
        if (it == f.categories.end()) {
          if (!decl.open_categories)
            throw SchemaMismatch("row " + std::to_string(row_no) +
                                 ": unknown category '" + cell +
                                 "' for feature '" + f.name + "'");
          f.categories.push_back(cell);
          it = f.categories.end() - 1;
        }
        r.categorical_values.push_back(
            static_cast<int>(it - f.categories.begin()));
      }
    }
    const std::string& label_cell = cells.back();
    auto lit = std::find(out.schema.label_classes.begin(),
                         out.schema.label_classes.end(), label_cell);
    if (lit == out.schema.label_classes.end())
      throw ParseError(row_no, cells.size(),
                       "unknown label class '" + label_cell + "'");
    r.label = static_cast<int>(lit - out.schema.label_classes.begin());
    out.rows.push_back(std::move(r));
  }
  out.validate();
  return out;
}

}  // namespace reps
