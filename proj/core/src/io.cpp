#include "pacq/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pacq {

namespace {

std::vector<std::string> split_csv_row(const std::string& row) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : row) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Vec> read_points_csv(std::istream& in) {
  std::string row;
  std::size_t line = 0;
  std::size_t m = 0;
  std::vector<Vec> points;
  while (std::getline(in, row)) {
    ++line;
    if (trim(row).empty()) continue;
    const std::vector<std::string> fields = split_csv_row(row);
    if (m == 0) {
      // Header row: f1,...,fm.
      m = fields.size();
      for (std::size_t j = 0; j < m; ++j) {
        const std::string expect = "f" + std::to_string(j + 1);
        if (trim(fields[j]) != expect) {
          throw ParseError("expected header field " + expect, line);
        }
      }
      continue;
    }
    if (fields.size() != m) throw ParseError("wrong number of fields", line);
    Vec p(m);
    for (std::size_t j = 0; j < m; ++j) {
      const std::string f = trim(fields[j]);
      std::size_t consumed = 0;
      try {
        p[j] = std::stod(f, &consumed);
      } catch (const std::exception&) {
        throw ParseError("malformed number '" + f + "'", line);
      }
      if (consumed != f.size()) throw ParseError("malformed number '" + f + "'", line);
    }
    points.push_back(std::move(p));
  }
  if (m == 0) throw ParseError("missing header row", line == 0 ? 1 : line);
  return points;
}

std::vector<Vec> read_points_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open points file: " + path);
  return read_points_csv(in);
}

void write_points_csv(std::ostream& out, const std::vector<Vec>& points) {
  const std::size_t m = points.empty() ? 2 : points.front().size();
  for (std::size_t j = 0; j < m; ++j) {
    out << (j ? "," : "") << "f" << (j + 1);
  }
  out << "\n";
  for (const Vec& p : points) {
    for (std::size_t j = 0; j < m; ++j) {
      out << (j ? "," : "") << format_double(p[j]);
    }
    out << "\n";
  }
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  // Shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_vec_json(std::ostream& out, const Vec& v) {
  out << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << (i ? "," : "") << format_double(v[i]);
  }
  out << "]";
}

}  // namespace

void write_history_jsonl(std::ostream& out, const RunHistory& hist) {
  for (const auto& rec : hist.records) {
    out << "{\"iteration\":" << rec.iteration;
    out << ",\"design\":";
    write_vec_json(out, rec.design);
    out << ",\"objectives\":";
    write_vec_json(out, rec.objectives);
    if (!rec.achievements.empty()) {
      out << ",\"achievements\":";
      write_vec_json(out, rec.achievements);
    }
    out << ",\"envelope\":";
    write_vec_json(out, rec.envelope);
    out << ",\"acquisition\":" << format_double(rec.acquisition_value);
    out << ",\"discrete_r2\":" << format_double(rec.discrete_r2);
    out << ",\"exact_r2\":" << format_double(rec.exact_r2);
    out << ",\"hypervolume\":" << format_double(rec.hypervolume);
    out << "}\n";
  }
}

void write_summary_json(std::ostream& out, const RunHistory& hist) {
  const char* mode = hist.config.mode == RunMode::ehvi ? "ehvi"
                     : hist.config.mode == RunMode::discrete_er2i ? "discrete_er2i"
                                                                  : "quadrature_er2i";
  out << "{\n";
  out << "  \"mode\": \"" << mode << "\",\n";
  out << "  \"seed\": " << hist.config.seed << ",\n";
  out << "  \"budget\": " << hist.config.budget << ",\n";
  out << "  \"n_initial\": " << hist.config.n_initial << ",\n";
  out << "  \"evaluations\": " << hist.records.size() << ",\n";
  out << "  \"gp_failure\": " << (hist.gp_failure ? "true" : "false") << ",\n";
  if (!hist.records.empty()) {
    const auto& last = hist.records.back();
    out << "  \"final_discrete_r2\": " << format_double(last.discrete_r2) << ",\n";
    out << "  \"final_exact_r2\": " << format_double(last.exact_r2) << ",\n";
    out << "  \"final_hypervolume\": " << format_double(last.hypervolume) << "\n";
  } else {
    out << "  \"final_discrete_r2\": null,\n";
    out << "  \"final_exact_r2\": null,\n";
    out << "  \"final_hypervolume\": null\n";
  }
  out << "}\n";
}

void write_traces_csv(std::ostream& out, const RunHistory& hist) {
  out << "iteration,acquisition,discrete_r2,exact_r2,hypervolume\n";
  for (const auto& rec : hist.records) {
    out << rec.iteration << "," << format_double(rec.acquisition_value) << ","
        << format_double(rec.discrete_r2) << "," << format_double(rec.exact_r2) << ","
        << format_double(rec.hypervolume) << "\n";
  }
}

}  // namespace pacq
