#include "tclab/csv.hpp"

#include <cmath>
#include <cstdio>

namespace tclab::csv {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_samples(std::ostream& os, std::span<const SampleRow> rows) {
  os << "experiment,sampler_tag,n,replicate,t,value\n";
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.sampler_tag << ',' << format_number(r.n) << ',' << r.replicate
       << ',' << format_number(r.t) << ',' << format_number(r.value) << '\n';
  }
}

void write_paths(std::ostream& os, std::span<const Path> paths) {
  os << "replicate,k,t,value\n";
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = paths[i];
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      os << i << ',' << k << ',' << format_number(p.time(k)) << ',' << format_number(p.values[k])
         << '\n';
    }
  }
}

void write_timechange(std::ostream& os, std::span<const TimeChangeRow> rows) {
  os << "replicate,t,tau_t,Y_t,X_n(t)\n";
  for (const auto& r : rows) {
    os << r.replicate << ',' << format_number(r.t) << ',' << format_number(r.tau) << ','
       << format_number(r.observed) << ',' << format_number(r.normalized) << '\n';
  }
}

void write_profiles(std::ostream& os, std::span<const LocalTimeProfile> profiles) {
  os << "replicate,bin_center,mass\n";
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const LocalTimeProfile& p = profiles[i];
    for (std::size_t j = 0; j < p.masses.size(); ++j) {
      if (p.masses[j] == 0.0) continue;
      os << i << ',' << format_number(p.center(j)) << ',' << format_number(p.masses[j]) << '\n';
    }
  }
}

}  // namespace tclab::csv
