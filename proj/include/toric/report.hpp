// Verification report: one record per check, rendered for humans and as
// tab-separated lines for machines. Both renderings print the same digits.
#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace toric {

struct CheckRecord {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  std::size_t samples = 1;
  std::uint64_t seed = 0;

  bool pass() const { return residual <= tolerance; }
};

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct VerificationReport {
  std::vector<CheckRecord> records;

  void add(std::string name, double residual, double tolerance, std::size_t samples = 1, std::uint64_t seed = 0) {
    records.push_back({std::move(name), residual, tolerance, samples, seed});
  }
  void append(const VerificationReport& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
  }

  bool pass() const {
    for (const auto& r : records)
      if (!r.pass()) return false;
    return true;
  }

  /// name \t residual \t tolerance \t pass|fail
  void write_machine(std::ostream& out) const {
    for (const auto& r : records)
      out << r.name << '\t' << format_number(r.residual) << '\t' << format_number(r.tolerance) << '\t'
          << (r.pass() ? "pass" : "fail") << '\n';
  }

  void write_human(std::ostream& out) const {
    for (const auto& r : records) {
      out << (r.pass() ? "PASS  " : "FAIL  ") << r.name << "  residual " << format_number(r.residual) << " <= "
          << format_number(r.tolerance) << "  (samples " << r.samples << ", seed " << r.seed << ")\n";
    }
    out << (pass() ? "overall: pass" : "overall: fail") << '\n';
  }
};

}  // namespace toric
