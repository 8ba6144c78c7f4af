#pragma once
// Small I/O helpers shared across modules: shortest round-trip double
// formatting (deterministic output bytes), naive CSV splitting for the
// comma-free token formats used here, atomic file writes, and FNV digests
// of files for manifests and determinism checks.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace repsig::io {

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// Split one CSV line on commas. Fields in our formats are plain tokens
// (ids, labels, integers); quoting is not used.
std::vector<std::string> split_csv_line(std::string_view line);

// Write content to path atomically (temp file in the same directory, then
// rename over the target).
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

// FNV-1a over a file's bytes, rendered as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

// FNV-1a over a string, rendered as 16 hex digits.
std::string string_digest(std::string_view bytes);

}  // namespace repsig::io
