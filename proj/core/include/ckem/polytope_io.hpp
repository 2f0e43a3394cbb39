#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ckem/geometry.hpp"

namespace ckem {

// {"label": "...", "vertices": [[x, y], ...]}. Coordinates may be JSON numbers or strings such as
// "3/4"; numbers are taken exactly from their decimal text. Vertices may come in any order.
// Throws InputError (with line/column for syntax errors).
Polytope parse_polytope_json(std::string_view text);
Polytope load_polytope(const std::filesystem::path& path);

std::string polytope_to_json(const Polytope& P);

}  // namespace ckem
