#pragma once

#include <string>
#include <string_view>

namespace rpslab {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// SHA-256 of a file's bytes; throws Error(argument) if it cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace rpslab
