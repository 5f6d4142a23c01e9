#include "dicke/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "dicke/population.hpp"

namespace dicke::cli {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return csv_field(std::get<std::string>(c));
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  if (const long long* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? "," : "") << csv_field(t.columns[i]);
  }
  os << "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << "\r\n";
  }
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json j;
  j["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const Cell& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  os << j.dump(2) << "\n";
}

void write_table(const Table& t, const std::string& path,
                 const std::string& format, std::ostream& fallback) {
  auto emit = [&](std::ostream& os) {
    if (format == "json") {
      write_json(os, t);
    } else {
      write_csv(os, t);
    }
  };
  if (path.empty()) {
    emit(fallback);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + path + "'");
  emit(out);
  if (!out) throw Error("failed writing '" + path + "'");
}

void write_sidecar(const std::string& path, const nlohmann::ordered_json& cfg) {
  std::ofstream out(path + ".config.json", std::ios::binary);
  if (!out) throw Error("cannot open sidecar '" + path + ".config.json'");
  out << cfg.dump(2) << "\n";
}

}  // namespace dicke::cli
