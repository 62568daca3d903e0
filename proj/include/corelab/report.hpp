#pragma once

#include <string>
#include <type_traits>
#include <vector>

#include "corelab/jsonio.hpp"
#include "corelab/numerics.hpp"

namespace corelab {

// %.12g with negative zero normalized; used everywhere a report prints a
// floating value so text output is byte-stable.
std::string format_double(double v);

// Deterministic two-format report: plain text with [section] headers and
// key: value lines, plus a structurally identical JSON twin.
class Report {
 public:
  explicit Report(std::string version = "corelab 0.1.0");

  void meta(const std::string& key, const std::string& value);
  void begin_section(const std::string& name);

  void item(const std::string& key, bool v);
  void item(const std::string& key, double v);
  void item(const std::string& key, const std::string& v);
  void item(const std::string& key, const char* v);
  template <typename T,
            std::enable_if_t<std::is_integral_v<T> && !std::is_same_v<T, bool>,
                             int> = 0>
  void item(const std::string& key, T v) {
    item_int(key, static_cast<long long>(v));
  }
  // "[a, b, ...]" in text, array in JSON.
  void item_ints(const std::string& key, const std::vector<Eigen::Index>& v);
  void item_ints(const std::string& key, const std::vector<int>& v);
  void matrix(const std::string& key, const ComplexMatrix& m);
  void note(const std::string& text);

  std::string text() const;
  Json json() const;

 private:
  void item_int(const std::string& key, long long v);
  struct Section {
    std::string name;
    std::vector<std::string> lines;
    Json items = Json::object();
    std::vector<std::string> notes;
  };
  Section& current();
  std::string version_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<Section> sections_;
};

}  // namespace corelab
