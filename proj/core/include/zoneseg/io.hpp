#pragma once

#include <string>
#include <string_view>

namespace zoneseg {

std::string read_file(const std::string& path);

// Writes to "<path>.tmp" in the same directory, then renames over path.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace zoneseg
