#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rpslab/errors.hpp"

namespace testing {

inline std::string source_path(const std::string& rel) { return std::string(RPSLAB_SOURCE_DIR) + "/" + rel; }

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::path(RPSLAB_TEST_TMP) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

/// Kind of the rpslab::Error thrown by f, or nullopt if none.
template <class F>
std::optional<rpslab::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const rpslab::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

/// Message of the rpslab::Error thrown by f, or "" if none.
template <class F>
std::string error_message(F&& f) {
  try {
    f();
  } catch (const rpslab::Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace testing
