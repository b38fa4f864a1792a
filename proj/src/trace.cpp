#include "nematic/trace.hpp"

#include <charconv>

#include "nematic/errors.hpp"

namespace nematic {

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string trace_header() {
  return "step,time,E_total,E_elastic,E_well,E_kinetic,D_visc,D_friction,D_eps,J_grad,J_d,J_u,slack,"
         "picard_iters,picard_residual,min_len,max_len,div_u_max,h2_d";
}

std::string format_trace_row(const TraceRow& row) {
  const EnergyLedger& l = row.ledger;
  std::string s = std::to_string(l.step);
  for (double x : {l.time, l.current.total, l.current.elastic, l.current.well, l.current.kinetic, l.D_visc,
                   l.D_friction, l.D_eps, l.J_grad, l.J_d, l.J_u, l.slack}) {
    s += ',';
    s += format_number(x);
  }
  s += ',';
  s += std::to_string(l.picard_iters);
  for (double x : {l.picard_residual, row.length.min, row.length.max, row.div_u_max, row.h2_d}) {
    s += ',';
    s += format_number(x);
  }
  return s;
}

TraceWriter::TraceWriter(const std::string& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot open trace '" + path + "' for writing");
  out_ << trace_header() << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed for '" + path_ + "'");
}

void TraceWriter::append(const TraceRow& row) {
  out_ << format_trace_row(row) << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed for '" + path_ + "'");
}

}  // namespace nematic
