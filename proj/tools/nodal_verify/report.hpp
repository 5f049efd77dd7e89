#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace verify {

using ojson = nlohmann::ordered_json;

struct Record {
  std::string id;
  std::string anchor;   // the checked statement, or "plumbing"
  std::string status;   // pass | fail | info
  ojson measured = ojson::object();
  std::optional<double> tolerance;
  std::optional<double> runtime_ms;
  std::string error;    // set when a numerical error stopped the check
};

struct Report {
  std::string suite;
  ojson config = ojson::object();
  std::vector<Record> records;

  int count(const std::string& status) const;
  int numerical_errors() const;
  ojson summary() const;
  ojson to_json() const;
};

// shortest text that keeps 17 significant digits; null for non-finite values
std::string format_number(double v);

// JSON with every floating value printed by format_number
void write_json(std::ostream& os, const ojson& j, int indent = 0);

void write_report_json(std::ostream& os, const Report& r);

// one row per record; measured keys become columns in order of first use
void write_report_csv(std::ostream& os, const Report& r);

std::string csv_field(const std::string& s);

}  // namespace verify
