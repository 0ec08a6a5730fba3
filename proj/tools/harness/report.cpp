#include "harness/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace kelab::harness {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Measured:
      return "measured";
  }
  return "unknown";
}

bool SuiteReport::hard_checks_pass() const {
  for (const auto& c : checks)
    if (c.status == Status::Fail) return false;
  return true;
}

const CheckEntry* SuiteReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const CheckEntry& c) {
  nlohmann::json values = nlohmann::json::object();
  for (const auto& m : c.values) {
    // JSON has no NaN; keep the slot and say so.
    if (std::isfinite(m.value))
      values[m.name] = m.value;
    else
      values[m.name] = format_number(m.value);
  }
  nlohmann::json j{{"id", c.id}, {"title", c.title}, {"status", to_string(c.status)}, {"values", values}};
  if (c.time_limit > 0.0) j["time_limit_seconds"] = c.time_limit;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

nlohmann::json summary_json(const SuiteReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  nlohmann::json criteria = nlohmann::json::object();
  for (const auto& c : r.checks) {
    checks.push_back(to_json(c));
    if (c.id.rfind("AC-", 0) == 0) criteria[c.id] = to_string(c.status);
  }
  return {{"suite", r.suite},         {"seed", r.seed},     {"hard_checks_pass", r.hard_checks_pass()},
          {"criteria", criteria},     {"checks", checks},   {"artifacts", r.artifacts}};
}

nlohmann::json timings_json(const SuiteReport& r) {
  nlohmann::json t = nlohmann::json::object();
  for (const auto& c : r.checks) t[c.id] = c.seconds;
  t["total"] = r.seconds;
  return t;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void ArtifactWriter::csv(const std::string& name, const std::vector<std::string>& header,
                         const std::vector<std::vector<double>>& rows) {
  std::ofstream out(dir_ / name);
  if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  written_.push_back(name);
}

void ArtifactWriter::json(const std::string& name, const nlohmann::json& doc) {
  std::ofstream out(dir_ / name);
  if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
  out << doc.dump(2) << '\n';
  written_.push_back(name);
}

}  // namespace kelab::harness
