#pragma once

#include <iosfwd>
#include <string>

#include "rpslab/coeff_samplers.hpp"

namespace rpslab {

/// CSV with header `k,re,im`, one row per coefficient, shortest round-trip floats.
void write_series_csv(std::ostream& out, const SampleSeries& series);

/// Binary dump layout (all integers and floats little-endian):
///
///   bytes 0..7    magic "RPSSER01"
///   u64           seed
///   u64           n_terms
///   u64           model_id length L, followed by L bytes of UTF-8
///   n_terms x 3   f64 triples (re, im, ln|xi|)
void write_series_binary(std::ostream& out, const SampleSeries& series);
SampleSeries read_series_binary(std::istream& in);

inline constexpr char series_magic[9] = "RPSSER01";

}  // namespace rpslab
