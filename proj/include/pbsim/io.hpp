// Byte-stable numeric formatting and small file helpers for task output.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace pbsim {

/// Locale-independent decimal formatting with 17 significant digits, the
/// shortest form that round-trips any double bit pattern.
std::string format_double(double value);

std::string format_int(long long value);

/// FNV-1a 64-bit.
std::uint64_t fnv1a64(std::string_view data);

/// Writes content atomically enough for our purposes ('\n' endings are the
/// caller's responsibility; this does binary writes, no translation).
void write_file(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace pbsim
