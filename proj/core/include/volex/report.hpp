#pragma once

#include <optional>
#include <string>
#include <vector>

namespace volex::cli {

/// One judged or informational quantity. Judged entries carry the
/// tolerance they were compared against; informational entries do not.
struct Record {
  std::string name;
  double value = 0.0;
  std::optional<double> tolerance;
  std::optional<bool> pass;
  std::string note;

  static Record check(std::string name, double value, double tolerance, bool pass,
                      std::string note = {});
  static Record info(std::string name, double value, std::string note = {});
};

/// Per-sample row feeding the CSV table.
struct SampleRow {
  std::vector<double> point;
  std::string quantity;
  double value;
};

struct Report {
  std::string tool;      // "volex <version>"
  std::string scenario;
  std::string analysis;
  std::vector<int> grid;
  std::vector<Record> records;
  std::vector<std::string> notes;
  std::vector<SampleRow> samples;
  std::vector<std::string> point_labels;  // coordinate names for sample rows
  bool pass = true;

  void add(Record r);
};

/// Deterministic JSON serialization: fixed key order, shortest
/// round-trip number formatting; identical inputs give identical bytes.
std::string to_json(const Report& r);
/// Flat per-sample table: scenario, analysis, coordinates..., quantity, value.
std::string to_csv(const Report& r);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace volex::cli
