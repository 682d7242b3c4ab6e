#pragma once

#include <string>

#include "reps/dataset.hpp"

namespace reps {

// Sidecar schema declaration for CSV ingestion. When `open_categories` is
// set, unseen categorical values are appended to the schema instead of
// failing with SchemaMismatch.
struct SchemaDecl {
  Schema schema;
  bool open_categories = false;

  static SchemaDecl from_json_file(const std::string& path);
  void to_json_file(const std::string& path) const;
};

// Header row, comma separated, "." decimal, UTF-8. Categorical cells and
// labels are written as their category/class names.
void save_csv(const Dataset& dataset, const std::string& csv_path);

Dataset load_csv(const std::string& csv_path, const SchemaDecl& decl);

}  // namespace reps
