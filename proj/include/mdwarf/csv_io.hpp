#pragma once

#include <string>

#include "mdwarf/metrics.hpp"
#include "mdwarf/radio_sim.hpp"

namespace mdwarf {

// All writers emit a header row, LF line endings, '.' decimal separator and
// exactly six fractional digits, in a deterministic row order. I/O failures
// raise std::runtime_error with the offending path in the message.

// period,node,time_ms,phase_ms
void write_firings_csv(const std::string& path, const Trace& trace);

// period,mean_err_ms,max_err_ms,collisions
void write_metrics_csv(const std::string& path, const MetricsReport& report);

// time_ms,sender,entry_count,entries  (entries as id:rel pairs, ';'-joined)
void write_messages_csv(const std::string& path, const Trace& trace);

// time_ms,receiver,sender,interferers  (';'-joined ids)
void write_collisions_csv(const std::string& path, const Trace& trace);

}  // namespace mdwarf
