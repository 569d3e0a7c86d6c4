#pragma once

// Deterministic CSV and JSON emission: stable key order, 17 significant
// digits for floats, exact values as strings.

#include <string>
#include <vector>

#include <json.hpp>

#include "nterm/spaces.hpp"

namespace nterm {

using Json = nlohmann::ordered_json;

std::string format_double(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Indented JSON; floats printed with 17 significant digits.
std::string dump_json(const Json& value);

Json to_json(const NormValue& value);

// "-" writes to stdout; otherwise the file is replaced atomically.
void write_output(const std::string& path, const std::string& content);

}  // namespace nterm
