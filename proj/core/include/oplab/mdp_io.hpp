#pragma once

#include "oplab/mdp.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace oplab {

inline constexpr int kMdpFormatVersion = 1;

// JSON document with fields version, n_states, n_actions, gamma, transition
// (nested [state][action][next]), reward ([state][action]), initial_dist and
// terminal. Reals are written with 17 significant digits, so a round trip is
// exact.
std::string mdp_to_json(const Mdp& mdp);
Mdp mdp_from_json(std::string_view text);

void save_mdp(const Mdp& mdp, const std::filesystem::path& path);
Mdp load_mdp(const std::filesystem::path& path);

// printf-style "%.17g".
std::string format_exact(double value);

}  // namespace oplab
