#include "srgb/report.hpp"

#include <cmath>
#include <charconv>
#include <ostream>
#include <sstream>

namespace srgb {

double Row::absErr() const { return std::abs(value - reference); }

// With a zero reference the relative error degenerates to the absolute one.
double Row::relErr() const { return reference == 0.0 ? absErr() : absErr() / std::abs(reference); }

bool Row::pass() const {
  switch (kind) {
    case Tolerance::Absolute: return std::isfinite(value) && absErr() <= tolerance;
    case Tolerance::Relative: return std::isfinite(value) && relErr() <= tolerance;
    case Tolerance::None: return true;
  }
  return false;
}

Row makeRow(std::string quantity, double value, double reference, double tolerance, bool relative) {
  Row r;
  r.quantity = std::move(quantity);
  r.value = value;
  r.reference = reference;
  r.tolerance = tolerance;
  r.kind = relative ? Tolerance::Relative : Tolerance::Absolute;
  return r;
}

Row infoRow(std::string quantity, double value, double reference, std::string note) {
  Row r;
  r.quantity = std::move(quantity);
  r.value = value;
  r.reference = reference;
  r.kind = Tolerance::None;
  r.note = std::move(note);
  return r;
}

bool Report::allPass() const { return failures() == 0; }

int Report::failures() const {
  int n = 0;
  for (const Row& r : rows) n += r.pass() ? 0 : 1;
  return n;
}

const char* const kCsvHeader = "suite,fixture,quantity,value,reference,abs_err,rel_err,tolerance,pass,nodes,millis";

// Shortest round-trip representation: exact and stable across runs.
std::string formatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

const char* passText(const Row& r) {
  if (!r.asserted()) return "info";
  return r.pass() ? "pass" : "fail";
}

}  // namespace

void writeCsv(const Report& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const Row& r : report.rows) {
    out << quoted(r.suite) << ',' << quoted(r.fixture) << ',' << quoted(r.quantity) << ',' << formatNumber(r.value) << ','
        << formatNumber(r.reference) << ',' << formatNumber(r.absErr()) << ',' << formatNumber(r.relErr()) << ','
        << (r.asserted() ? formatNumber(r.tolerance) : std::string()) << ',' << passText(r) << ',' << r.nodes << ','
        << formatNumber(r.millis) << '\n';
  }
}

std::string toCsv(const Report& report) {
  std::ostringstream s;
  writeCsv(report, s);
  return s.str();
}

nlohmann::json toJson(const Report& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const Row& r : report.rows) {
    nlohmann::json j{{"suite", r.suite},     {"fixture", r.fixture},   {"quantity", r.quantity},
                     {"value", r.value},     {"reference", r.reference}, {"abs_err", r.absErr()},
                     {"rel_err", r.relErr()}, {"pass", passText(r)},     {"nodes", r.nodes},
                     {"millis", r.millis}};
    if (r.asserted()) {
      j["tolerance"] = r.tolerance;
      j["tolerance_kind"] = r.kind == Tolerance::Relative ? "relative" : "absolute";
    }
    if (!r.note.empty()) j["note"] = r.note;
    rows.push_back(std::move(j));
  }
  return {{"config", report.config}, {"rows", rows}, {"failures", report.failures()}};
}

}  // namespace srgb
