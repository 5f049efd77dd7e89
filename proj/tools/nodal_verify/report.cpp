#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace verify {

int Report::count(const std::string& status) const {
  int c = 0;
  for (const auto& r : records) c += r.status == status;
  return c;
}

int Report::numerical_errors() const {
  int c = 0;
  for (const auto& r : records) c += !r.error.empty();
  return c;
}

ojson Report::summary() const {
  ojson s = ojson::object();
  s["records"] = records.size();
  s["pass"] = count("pass");
  s["fail"] = count("fail");
  s["info"] = count("info");
  s["numerical_errors"] = numerical_errors();
  return s;
}

ojson Report::to_json() const {
  ojson j = ojson::object();
  j["suite"] = suite;
  j["config"] = config;
  ojson recs = ojson::array();
  for (const auto& r : records) {
    ojson o = ojson::object();
    o["id"] = r.id;
    o["anchor"] = r.anchor;
    o["status"] = r.status;
    o["measured"] = r.measured;
    if (r.tolerance) o["tolerance"] = *r.tolerance;
    if (r.runtime_ms) o["runtime_ms"] = *r.runtime_ms;
    if (!r.error.empty()) o["error"] = r.error;
    recs.push_back(std::move(o));
  }
  j["records"] = std::move(recs);
  j["summary"] = summary();
  return j;
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  std::string s(buf, res.ptr);
  // keep the value recognisably floating
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write_json(std::ostream& os, const ojson& j, int indent) {
  const std::string pad(indent + 2, ' '), close(indent, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << ojson(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ", ";
        first = false;
        write_json(os, v, indent + 2);
      }
      os << "]";
      return;
    }
    case ojson::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

void write_report_json(std::ostream& os, const Report& r) {
  write_json(os, r.to_json());
  os << "\n";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string cell(const ojson& v) {
  switch (v.type()) {
    case ojson::value_t::number_float: {
      const std::string s = format_number(v.get<double>());
      return s == "null" ? "" : s;
    }
    case ojson::value_t::string: return csv_field(v.get<std::string>());
    case ojson::value_t::null: return "";
    case ojson::value_t::array:
    case ojson::value_t::object: {
      std::ostringstream os;
      write_json(os, v, 0);
      std::string s = os.str();
      for (auto& c : s)
        if (c == '\n') c = ' ';
      return csv_field(s);
    }
    default: return v.dump();
  }
}

}  // namespace

void write_report_csv(std::ostream& os, const Report& r) {
  std::vector<std::string> keys;
  for (const auto& rec : r.records)
    for (auto it = rec.measured.begin(); it != rec.measured.end(); ++it)
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) keys.push_back(it.key());
  bool timed = false;
  for (const auto& rec : r.records) timed |= rec.runtime_ms.has_value();
  os << "id,anchor,status,tolerance";
  for (const auto& k : keys) os << ',' << csv_field(k);
  if (timed) os << ",runtime_ms";
  os << ",error\r\n";
  for (const auto& rec : r.records) {
    os << csv_field(rec.id) << ',' << csv_field(rec.anchor) << ',' << rec.status << ','
       << (rec.tolerance ? format_number(*rec.tolerance) : "");
    for (const auto& k : keys) {
      os << ',';
      if (rec.measured.contains(k)) os << cell(rec.measured[k]);
    }
    if (timed) os << ',' << (rec.runtime_ms ? format_number(*rec.runtime_ms) : "");
    os << ',' << csv_field(rec.error) << "\r\n";
  }
}

}  // namespace verify
