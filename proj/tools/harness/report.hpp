#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kelab::harness {

enum class Status { Pass, Fail, Measured };

std::string to_string(Status s);

struct Measurement {
  std::string name;
  double value;
};

// One line of a suite report. Hard checks are Pass or Fail; report-only
// entries are Measured and never affect the exit status.
struct CheckEntry {
  std::string id;
  std::string title;
  Status status = Status::Measured;
  std::vector<Measurement> values;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 when the check has no runtime bound
  std::string note;

  bool hard() const noexcept { return status != Status::Measured; }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 42;
  std::vector<CheckEntry> checks;
  std::vector<std::string> artifacts;
  double seconds = 0.0;

  bool hard_checks_pass() const;
  const CheckEntry* find(const std::string& id) const;
};

// Timings are left out so that equal configurations give equal files.
nlohmann::json to_json(const CheckEntry& c);
nlohmann::json summary_json(const SuiteReport& r);
nlohmann::json timings_json(const SuiteReport& r);

// Writes data files below one output directory and remembers their names.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir);

  const std::filesystem::path& directory() const noexcept { return dir_; }
  const std::vector<std::string>& written() const noexcept { return written_; }

  void csv(const std::string& name, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows);
  void json(const std::string& name, const nlohmann::json& doc);

 private:
  std::filesystem::path dir_;
  std::vector<std::string> written_;
};

// Shortest round-trip text for a double; non-finite values print as nan/inf.
std::string format_number(double v);

}  // namespace kelab::harness
