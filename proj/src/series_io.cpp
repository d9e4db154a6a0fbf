#include "rpslab/series_io.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "rpslab/errors.hpp"
#include "rpslab/format.hpp"

namespace rpslab {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    fail(ErrorKind::validation, "truncated series dump");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_series_csv(std::ostream& out, const SampleSeries& series) {
  out << "k,re,im\n";
  for (std::size_t k = 0; k < series.n_terms(); ++k) {
    out << k << ',' << shortest(series.coefficients[k].real()) << ','
        << shortest(series.coefficients[k].imag()) << '\n';
  }
}

void write_series_binary(std::ostream& out, const SampleSeries& series) {
  out.write(series_magic, 8);
  put_u64(out, series.seed);
  put_u64(out, series.n_terms());
  put_u64(out, series.model_id.size());
  out.write(series.model_id.data(), static_cast<std::streamsize>(series.model_id.size()));
  for (std::size_t k = 0; k < series.n_terms(); ++k) {
    put_f64(out, series.coefficients[k].real());
    put_f64(out, series.coefficients[k].imag());
    put_f64(out, series.log_abs[k]);
  }
}

SampleSeries read_series_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, series_magic, 8) != 0) {
    fail(ErrorKind::validation, "not a series dump (bad magic)");
  }
  SampleSeries series;
  series.seed = get_u64(in);
  const std::uint64_t n = get_u64(in);
  const std::uint64_t id_length = get_u64(in);
  if (id_length > (1u << 20)) fail(ErrorKind::validation, "model id length out of range");
  series.model_id.resize(id_length);
  if (!in.read(series.model_id.data(), static_cast<std::streamsize>(id_length))) {
    fail(ErrorKind::validation, "truncated series dump");
  }
  series.coefficients.reserve(n);
  series.log_abs.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    series.coefficients.emplace_back(re, im);
    series.log_abs.push_back(get_f64(in));
  }
  return series;
}

}  // namespace rpslab
