#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gw/game.hpp"

namespace gw {

inline constexpr int kGameFormatVersion = 1;

// Game files are JSON documents:
//
//   {
//     "format_version": 1,
//     "num_players": 2,
//     "actions": [2, 2],
//     "kind": "zero_sum",
//     "backend": "dense",
//     "layout": "cell_major_player_minor",
//     "payoffs": [1.0, -1.0, -1.0, 1.0, ...]
//   }
//
// Doubles are written in shortest round-trip form, so write/read reproduces
// every payoff bit for bit. Procedural games store "seed" instead of
// "payoffs". Unknown keys are rejected.
std::string game_to_json(const Game& game);
Game game_from_json(const std::string& text);

void write_game(const Game& game, const std::filesystem::path& path);
Game read_game(const std::filesystem::path& path);

}  // namespace gw
