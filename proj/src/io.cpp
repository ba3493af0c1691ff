#include "qecsense/io.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

namespace qecsense::io {

using linalg::Complex;
using linalg::DenseMatrix;
using linalg::RealMatrix;

namespace {

[[noreturn]] void schema(const std::string& pointer, const std::string& what) {
  throw Error(ErrorKind::SchemaError, (pointer.empty() ? "/" : pointer) + ": " + what);
}

const json& field(const json& obj, const std::string& pointer, const char* key) {
  if (!obj.contains(key)) schema(pointer + "/" + key, "missing required field");
  return obj.at(key);
}

double number(const json& j, const std::string& pointer) {
  if (!j.is_number()) schema(pointer, "expected a number");
  return j.get<double>();
}

long long integer(const json& j, const std::string& pointer) {
  if (!j.is_number_integer()) schema(pointer, "expected an integer");
  return j.get<long long>();
}

Complex complex_value(const json& j, const std::string& pointer) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  schema(pointer, "expected a number or [re, im]");
}

const json& array(const json& j, const std::string& pointer) {
  if (!j.is_array()) schema(pointer, "expected an array");
  return j;
}

std::vector<double> real_vector(const json& j, const std::string& pointer) {
  std::vector<double> out;
  const json& a = array(j, pointer);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(number(a[i], pointer + "/" + std::to_string(i)));
  return out;
}

RealMatrix real_matrix(const json& j, const std::string& pointer) {
  const json& rows = array(j, pointer);
  const std::size_t n = rows.size();
  RealMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string rp = pointer + "/" + std::to_string(r);
    const auto row = real_vector(rows[r], rp);
    if (row.size() != n) schema(rp, "expected " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = row[c];
  }
  return m;
}

std::string model_type(const json& doc) {
  if (doc.contains("type")) {
    if (!doc["type"].is_string()) schema("/type", "expected a string");
    const auto t = doc["type"].get<std::string>();
    if (t != "lindblad" && t != "dephasing" && t != "bosonic")
      schema("/type", "unknown model type \"" + t + "\"");
    return t;
  }
  if (doc.contains("dimension")) return "lindblad";
  if (doc.contains("C")) return "dephasing";
  if (doc.contains("M")) return "bosonic";
  schema("", "cannot infer model type; expected \"dimension\", \"C\" or \"M\"");
}

model::LindbladModel parse_lindblad(const json& doc) {
  model::LindbladModel m;
  const long long dim = integer(field(doc, "", "dimension"), "/dimension");
  if (dim < 1) schema("/dimension", "must be at least 1");
  m.dim = static_cast<std::size_t>(dim);
  m.hamiltonian = complex_matrix_from_json(field(doc, "", "hamiltonian"), "/hamiltonian");
  if (doc.contains("jumps")) {
    const json& js = array(doc["jumps"], "/jumps");
    for (std::size_t i = 0; i < js.size(); ++i)
      m.jumps.push_back(complex_matrix_from_json(js[i], "/jumps/" + std::to_string(i)));
  }
  if (doc.contains("rates")) m.rates = real_vector(doc["rates"], "/rates");
  m.validate();
  return m;
}

dephasing::CorrelationModel parse_dephasing(const json& doc) {
  dephasing::CorrelationModel m;
  m.h = real_vector(field(doc, "", "h"), "/h");
  m.c = real_matrix(field(doc, "", "C"), "/C");
  m.t2 = doc.contains("T2") ? number(doc["T2"], "/T2") : 1.0;
  if (doc.contains("N")) {
    const long long n = integer(doc["N"], "/N");
    if (n < 1 || static_cast<std::size_t>(n) != m.h.size())
      schema("/N", "N = " + std::to_string(n) + " disagrees with h of length " + std::to_string(m.h.size()));
  }
  m.validate();
  return m;
}

bosonic::FockModel parse_bosonic(const json& doc) {
  bosonic::FockModel m;
  m.m = static_cast<int>(integer(field(doc, "", "M"), "/M"));
  if (doc.contains("s")) m.s = static_cast<int>(integer(doc["s"], "/s"));
  if (doc.contains("kappa")) m.kappa = number(doc["kappa"], "/kappa");
  if (doc.contains("zeta")) m.zeta = real_vector(doc["zeta"], "/zeta");
  m.validate();
  return m;
}

}  // namespace

DenseMatrix complex_matrix_from_json(const json& j, const std::string& pointer) {
  const json& rows = array(j, pointer);
  const std::size_t n = rows.size();
  DenseMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string rp = pointer + "/" + std::to_string(r);
    const json& row = array(rows[r], rp);
    if (row.size() != n) schema(rp, "expected " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = complex_value(row[c], rp + "/" + std::to_string(c));
  }
  return m;
}

std::vector<Complex> complex_vector_from_json(const json& j, const std::string& pointer) {
  std::vector<Complex> out;
  const json& a = array(j, pointer);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(complex_value(a[i], pointer + "/" + std::to_string(i)));
  return out;
}

AnyModel parse_model(const json& doc) {
  if (!doc.is_object()) schema("", "expected a JSON object");
  const auto type = model_type(doc);
  if (type == "lindblad") return parse_lindblad(doc);
  if (type == "dephasing") return parse_dephasing(doc);
  return parse_bosonic(doc);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, "/: invalid JSON in " + path.string() + ": " + e.what());
  }
}

AnyModel parse_model(const std::filesystem::path& path) { return parse_model(read_json(path)); }

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const DenseMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const RealMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const std::vector<Complex>& v) {
  json out = json::array();
  for (const Complex& z : v) out.push_back(to_json(z));
  return out;
}

json to_json(const model::LindbladModel& m) {
  json out{{"type", "lindblad"}, {"dimension", m.dim}, {"hamiltonian", to_json(m.hamiltonian)}};
  out["jumps"] = json::array();
  for (const auto& l : m.jumps) out["jumps"].push_back(to_json(l));
  if (!m.rates.empty()) out["rates"] = m.rates;
  return out;
}

json to_json(const dephasing::CorrelationModel& m) {
  return {{"type", "dephasing"}, {"N", m.n()}, {"T2", m.t2}, {"h", m.h}, {"C", to_json(m.c)}};
}

json to_json(const bosonic::FockModel& m) {
  json out{{"type", "bosonic"}, {"M", m.m}, {"s", m.s}, {"kappa", m.kappa}};
  if (!m.zeta.empty()) out["zeta"] = m.zeta;
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw Error(ErrorKind::DimensionMismatch, "CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                                  std::to_string(header_.size()));
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

}  // namespace qecsense::io
