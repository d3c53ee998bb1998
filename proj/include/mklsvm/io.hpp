#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>

namespace mklsvm {

// Writes through a sibling temporary file and renames it into place, so a
// failed write never leaves a truncated file at `path`.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& writer);

}  // namespace mklsvm
