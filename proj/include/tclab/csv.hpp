#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tclab/localtime.hpp"
#include "tclab/path.hpp"

namespace tclab::csv {

// Numbers are written with 17 significant digits so files round-trip exactly.
std::string format_number(double v);

struct SampleRow {
  std::string experiment;
  std::string sampler_tag;
  double n = 0.0;  // +inf for limit samplers
  std::size_t replicate = 0;
  double t = 0.0;
  double value = 0.0;
};

// experiment,sampler_tag,n,replicate,t,value
void write_samples(std::ostream& os, std::span<const SampleRow> rows);

// replicate,k,t,value; paths[i] is replicate i.
void write_paths(std::ostream& os, std::span<const Path> paths);

struct TimeChangeRow {
  std::size_t replicate = 0;
  double t = 0.0;
  double tau = 0.0;         // tau_{nt}
  double observed = 0.0;    // Y_{nt} = B_{tau_{nt}}
  double normalized = 0.0;  // X_n(t)
};

// replicate,t,tau_t,Y_t,X_n(t)
void write_timechange(std::ostream& os, std::span<const TimeChangeRow> rows);

// replicate,bin_center,mass; profiles[i] is replicate i.
void write_profiles(std::ostream& os, std::span<const LocalTimeProfile> profiles);

}  // namespace tclab::csv
