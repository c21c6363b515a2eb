#pragma once

// Report rows and their CSV / JSON serialization.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace srgb {

enum class Tolerance { Absolute, Relative, None };

struct Row {
  std::string suite, fixture, quantity;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  Tolerance kind = Tolerance::Absolute;
  long nodes = 0;
  double millis = 0.0;
  std::string note;

  double absErr() const;
  double relErr() const;
  bool asserted() const { return kind != Tolerance::None; }
  bool pass() const;
};

/// Asserted row; `relative` compares rel_err with the tolerance.
Row makeRow(std::string quantity, double value, double reference, double tolerance, bool relative = false);
/// Informational row, never fails.
Row infoRow(std::string quantity, double value, double reference = 0.0, std::string note = {});

struct Report {
  nlohmann::json config;
  std::vector<Row> rows;

  bool allPass() const;
  int failures() const;
};

/// Shortest string that reads back to exactly `v`; "nan", "inf", "-inf".
std::string formatNumber(double v);

extern const char* const kCsvHeader;
void writeCsv(const Report& report, std::ostream& out);
std::string toCsv(const Report& report);
nlohmann::json toJson(const Report& report);

}  // namespace srgb
