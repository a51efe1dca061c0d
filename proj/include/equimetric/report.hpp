#pragma once

#include <optional>
#include <string>
#include <vector>

namespace equimetric {

enum class Status { Pass, Fail, Advisory };

std::string_view to_string(Status status);

struct Check {
  std::string name;
  Status status = Status::Pass;
  double max_residual = 0.0;
  std::vector<std::string> witnesses;
};

/// Ordered list of uniquely named checks.
class VerificationReport {
 public:
  /// Throws std::logic_error on a duplicate name or a negative residual.
  void add(Check check);
  /// Convenience: pass iff `violations` is empty, witnesses are the violations.
  void add_exhaustive(std::string name, std::vector<std::string> violations, double residual = 0.0);
  void merge(const VerificationReport& other);

  const std::vector<Check>& checks() const noexcept { return checks_; }
  const Check* find(std::string_view name) const;
  std::size_t count(Status status) const;
  bool all_pass() const { return count(Status::Fail) == 0; }

  /// One line per check: NAME\tSTATUS\tRESIDUAL\tWITNESS.
  static std::string format_line(const Check& check);

 private:
  std::vector<Check> checks_;
};

/// Fixed 9-significant-digit formatting; "inf" for +infinity.
std::string format_real(double value);

}  // namespace equimetric
