#pragma once

#include <fstream>
#include <string>

#include "nematic/diagnostics.hpp"

namespace nematic {

/// Shortest decimal that parses back to the same double.
std::string format_number(double x);

std::string trace_header();

struct TraceRow {
  EnergyLedger ledger;
  LengthStats length;
  double div_u_max = 0.0;
  double h2_d = 0.0;
};

std::string format_trace_row(const TraceRow& row);

/// Energy-trace CSV, flushed after every row.
class TraceWriter {
 public:
  explicit TraceWriter(const std::string& path);
  void append(const TraceRow& row);

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace nematic
