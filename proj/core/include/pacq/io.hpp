#ifndef PACQ_IO_HPP
#define PACQ_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pacq/bo_driver.hpp"
#include "pacq/pareto_geometry.hpp"

namespace pacq {

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::size_t line)
      : std::runtime_error(message + " (line " + std::to_string(line) + ")"),
        line_number(line) {}
  std::size_t line_number;
};

/// Points CSV: mandatory header row f1,...,fm, one point per data row.
std::vector<Vec> read_points_csv(std::istream& in);
std::vector<Vec> read_points_csv_file(const std::string& path);
void write_points_csv(std::ostream& out, const std::vector<Vec>& points);

/// Shortest round-trip decimal; used wherever byte determinism matters.
std::string format_double(double v);

/// One JSON object per line; identical inputs give identical bytes.
void write_history_jsonl(std::ostream& out, const RunHistory& hist);
void write_summary_json(std::ostream& out, const RunHistory& hist);
void write_traces_csv(std::ostream& out, const RunHistory& hist);

}  // namespace pacq

#endif
