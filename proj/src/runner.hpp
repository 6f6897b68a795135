#pragma once

#include "config.hpp"
#include "estimators.hpp"

#include <string>
#include <utility>
#include <vector>

namespace perco {

// A result file: "# perco <subcommand> generated <timestamp>", then
// "# key = value" metadata lines, one header line naming the columns and
// comma-separated rows. Everything after the first line is deterministic.
struct ResultTable {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // Extra files written next to the table (name, content), e.g. graph dumps.
  std::vector<std::pair<std::string, std::string>> attachments;

  std::string body() const;
  std::string text(const std::string& timestamp) const;
};

const std::vector<std::string>& subcommand_names();

// Runs one subcommand on a config. `threads` only changes the schedule.
ResultTable run_subcommand(const std::string& subcommand, const Config& cfg, int threads = 1);

// Tidy "series,x,y,y_lo,y_hi" table from the text of a result file. Throws
// IoError on malformed input.
std::string plot_data(const std::string& result_text);

// "%.9g"
std::string format_real(double v);

} // namespace perco
