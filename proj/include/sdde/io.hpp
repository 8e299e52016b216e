#pragma once

#include <string>

#include "sdde/euler.hpp"
#include "sdde/oracle.hpp"

namespace sdde {

/// CSV with columns t, X1..Xd; the leading header line carries model label,
/// level and seed so a dump is self-describing.
std::string path_csv(const EulerPath& path);
std::string path_csv(const ReferencePath& ref);

void write_file(const std::string& file, const std::string& content);
std::string read_file(const std::string& file);

} // namespace sdde
