#include "corelab/report.hpp"

#include <cstdio>
#include <sstream>

namespace corelab {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Report::Report(std::string version) : version_(std::move(version)) {}

void Report::meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void Report::begin_section(const std::string& name) {
  sections_.push_back(Section{name, {}, Json::object(), {}});
}

Report::Section& Report::current() {
  if (sections_.empty()) begin_section("general");
  return sections_.back();
}

void Report::item(const std::string& key, bool v) {
  Section& s = current();
  s.lines.push_back(key + ": " + (v ? "true" : "false"));
  s.items[key] = v;
}

void Report::item_int(const std::string& key, long long v) {
  Section& s = current();
  s.lines.push_back(key + ": " + std::to_string(v));
  s.items[key] = v;
}

void Report::item(const std::string& key, double v) {
  Section& s = current();
  s.lines.push_back(key + ": " + format_double(v));
  s.items[key] = v == 0.0 ? 0.0 : v;
}

void Report::item(const std::string& key, const std::string& v) {
  Section& s = current();
  s.lines.push_back(key + ": " + v);
  s.items[key] = v;
}

void Report::item(const std::string& key, const char* v) {
  item(key, std::string(v));
}

void Report::item_ints(const std::string& key,
                       const std::vector<Eigen::Index>& v) {
  Section& s = current();
  std::string line = key + ": [";
  Json arr = Json::array();
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) line += ", ";
    line += std::to_string(v[i]);
    arr.push_back(static_cast<long long>(v[i]));
  }
  line += "]";
  s.lines.push_back(std::move(line));
  s.items[key] = std::move(arr);
}

void Report::item_ints(const std::string& key, const std::vector<int>& v) {
  std::vector<Eigen::Index> w(v.begin(), v.end());
  item_ints(key, w);
}

void Report::matrix(const std::string& key, const ComplexMatrix& m) {
  Section& s = current();
  s.lines.push_back(key + ":");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::string line = "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) line += " ";
      line += "[" + format_double(m(r, c).real()) + ", " +
              format_double(m(r, c).imag()) + "]";
    }
    s.lines.push_back(std::move(line));
  }
  s.items[key] = matrix_to_json(m);
}

void Report::note(const std::string& text) {
  Section& s = current();
  s.lines.push_back("note: " + text);
  s.notes.push_back(text);
}

std::string Report::text() const {
  std::ostringstream out;
  out << version_ << "\n";
  for (const auto& [k, v] : meta_) out << k << ": " << v << "\n";
  for (const Section& s : sections_) {
    out << "\n[" << s.name << "]\n";
    for (const std::string& line : s.lines) out << line << "\n";
  }
  return out.str();
}

Json Report::json() const {
  Json j = Json::object();
  j["version"] = version_;
  for (const auto& [k, v] : meta_) j[k] = v;
  Json sections = Json::array();
  for (const Section& s : sections_) {
    Json sec = Json::object();
    sec["name"] = s.name;
    sec["items"] = s.items;
    sec["notes"] = s.notes;
    sections.push_back(std::move(sec));
  }
  j["sections"] = std::move(sections);
  return j;
}

}  // namespace corelab
