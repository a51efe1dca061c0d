#include "equimetric/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace equimetric {

namespace {
constexpr std::size_t kMaxWitnessesShown = 8;
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Advisory: return "advisory";
  }
  return "?";
}

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void VerificationReport::add(Check check) {
  if (find(check.name)) throw std::logic_error("duplicate check name: " + check.name);
  if (!(check.max_residual >= 0.0)) throw std::logic_error("negative residual in check " + check.name);
  checks_.push_back(std::move(check));
}

void VerificationReport::add_exhaustive(std::string name, std::vector<std::string> violations, double residual) {
  Check c;
  c.name = std::move(name);
  c.status = violations.empty() ? Status::Pass : Status::Fail;
  c.max_residual = residual;
  c.witnesses = std::move(violations);
  add(std::move(c));
}

void VerificationReport::merge(const VerificationReport& other) {
  for (const auto& c : other.checks_) add(c);
}

const Check* VerificationReport::find(std::string_view name) const {
  auto it = std::find_if(checks_.begin(), checks_.end(), [&](const Check& c) { return c.name == name; });
  return it == checks_.end() ? nullptr : &*it;
}

std::size_t VerificationReport::count(Status status) const {
  return static_cast<std::size_t>(
      std::count_if(checks_.begin(), checks_.end(), [&](const Check& c) { return c.status == status; }));
}

std::string VerificationReport::format_line(const Check& check) {
  std::string witness;
  const std::size_t shown = std::min(check.witnesses.size(), kMaxWitnessesShown);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) witness += "; ";
    witness += check.witnesses[i];
  }
  if (check.witnesses.size() > shown) {
    witness += "; (+" + std::to_string(check.witnesses.size() - shown) + " more)";
  }
  if (witness.empty()) witness = "-";
  return check.name + "\t" + std::string(to_string(check.status)) + "\t" + format_real(check.max_residual) + "\t" +
         witness;
}

}  // namespace equimetric
