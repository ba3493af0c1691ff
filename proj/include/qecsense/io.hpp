#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qecsense/bosonic.hpp"
#include "qecsense/dephasing.hpp"
#include "qecsense/model.hpp"

namespace qecsense::io {

using nlohmann::json;

// File-system failures; kept apart from model errors so the CLI can map
// them to a different exit status.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AnyModel = std::variant<model::LindbladModel, dephasing::CorrelationModel, bosonic::FockModel>;

// Accepts an optional "type" of "lindblad", "dephasing" or "bosonic"; otherwise
// the schema is inferred from "dimension", "C" or "M". Throws SchemaError with a
// JSON pointer, or the model's own invariant error.
AnyModel parse_model(const json& doc);
AnyModel parse_model(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);

json to_json(linalg::Complex z);
json to_json(const linalg::DenseMatrix& m);
json to_json(const linalg::RealMatrix& m);
json to_json(const std::vector<linalg::Complex>& v);
json to_json(const model::LindbladModel& m);
json to_json(const dephasing::CorrelationModel& m);
json to_json(const bosonic::FockModel& m);

linalg::DenseMatrix complex_matrix_from_json(const json& j, const std::string& pointer);
std::vector<linalg::Complex> complex_vector_from_json(const json& j, const std::string& pointer);

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes to a sibling temporary file, then renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qecsense::io
