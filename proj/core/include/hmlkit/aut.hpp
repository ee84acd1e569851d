#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hmlkit/lts.hpp"

namespace hmlkit {

// Aldebaran (.aut) format:
//
//   des (initial_state, num_transitions, num_states)
//   (source, "label", target)
//   ...
//
// Labels are read quoted (with \" and \\ escapes) or bare; they are interned
// in order of first appearance. Blank lines are ignored.
FiniteLts read_aut(std::string_view text);
FiniteLts load_aut(const std::filesystem::path& path);

// Writes transitions in (source, label id, target) order with quoted labels.
std::string write_aut(const FiniteLts& lts);
void save_aut(const std::filesystem::path& path, const FiniteLts& lts);

}  // namespace hmlkit
