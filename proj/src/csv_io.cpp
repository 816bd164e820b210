#include "mdwarf/csv_io.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace mdwarf {

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << std::fixed << std::setprecision(6);
  return out;
}

void finish_csv(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

}  // namespace

void write_firings_csv(const std::string& path, const Trace& trace) {
  auto out = open_csv(path);
  out << "period,node,time_ms,phase_ms\n";
  for (const auto& f : trace.firings) {
    out << f.period << ',' << f.node << ',' << f.time_ms << ','
        << f.phase_ms << '\n';
  }
  finish_csv(out, path);
}

void write_metrics_csv(const std::string& path, const MetricsReport& report) {
  auto out = open_csv(path);
  out << "period,mean_err_ms,max_err_ms,collisions\n";
  for (const auto& row : report.per_period) {
    out << row.period << ',' << row.mean_err_ms << ',' << row.max_err_ms
        << ',' << row.collisions << '\n';
  }
  finish_csv(out, path);
}

void write_messages_csv(const std::string& path, const Trace& trace) {
  auto out = open_csv(path);
  out << "time_ms,sender,entry_count,entries\n";
  for (const auto& m : trace.messages) {
    out << m.time_ms << ',' << m.sender << ',' << m.entries.size() << ',';
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
      if (i) out << ';';
      out << m.entries[i].first << ':' << m.entries[i].second;
    }
    out << '\n';
  }
  finish_csv(out, path);
}

void write_collisions_csv(const std::string& path, const Trace& trace) {
  auto out = open_csv(path);
  out << "time_ms,receiver,sender,interferers\n";
  for (const auto& c : trace.collisions) {
    out << c.time_ms << ',' << c.receiver << ',' << c.sender << ',';
    for (std::size_t i = 0; i < c.interferers.size(); ++i) {
      if (i) out << ';';
      out << c.interferers[i];
    }
    out << '\n';
  }
  finish_csv(out, path);
}

}  // namespace mdwarf
