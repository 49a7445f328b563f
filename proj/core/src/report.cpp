#include "volex/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "volex/errors.hpp"

namespace volex::cli {

using ordered_json = nlohmann::ordered_json;

Record Record::check(std::string name, double value, double tolerance, bool pass,
                     std::string note) {
  Record r;
  r.name = std::move(name);
  r.value = value;
  r.tolerance = tolerance;
  r.pass = pass;
  r.note = std::move(note);
  return r;
}

Record Record::info(std::string name, double value, std::string note) {
  Record r;
  r.name = std::move(name);
  r.value = value;
  r.note = std::move(note);
  return r;
}

void Report::add(Record r) {
  if (r.pass && !*r.pass) pass = false;
  records.push_back(std::move(r));
}

std::string to_json(const Report& r) {
  ordered_json doc;
  doc["tool"] = r.tool;
  doc["scenario"] = r.scenario;
  doc["analysis"] = r.analysis;
  doc["grid"] = r.grid;
  doc["pass"] = r.pass;
  ordered_json records = ordered_json::array();
  for (const auto& rec : r.records) {
    ordered_json jr;
    jr["name"] = rec.name;
    jr["value"] = rec.value;
    if (rec.tolerance)
      jr["tolerance"] = *rec.tolerance;
    else
      jr["tolerance"] = nullptr;
    if (rec.pass) jr["pass"] = *rec.pass;
    if (!rec.note.empty()) jr["note"] = rec.note;
    records.push_back(std::move(jr));
  }
  doc["records"] = std::move(records);
  if (!r.notes.empty()) doc["notes"] = r.notes;
  doc["samples"] = r.samples.size();
  return doc.dump(2) + "\n";
}

std::string to_csv(const Report& r) {
  std::string out = "scenario,analysis";
  for (const auto& label : r.point_labels) out += "," + label;
  out += ",quantity,value\n";
  char buf[40];
  for (const auto& row : r.samples) {
    out += r.scenario + "," + r.analysis;
    for (double c : row.point) {
      std::snprintf(buf, sizeof(buf), "%.17g", c);
      out += ",";
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", row.value);
    out += "," + row.quantity + "," + buf + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace volex::cli
