#include "gw/game_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gw/error.hpp"
#include "json.hpp"

namespace gw {
namespace {

using nlohmann::json;

constexpr const char* kLayout = "cell_major_player_minor";

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : doc.items()) {
    require(allowed.count(key) == 1, ErrorCategory::config, "game file: unknown key '" + key + "'");
  }
}

const json& field(const json& doc, const char* key) {
  require(doc.contains(key), ErrorCategory::config,
          std::string("game file: missing key '") + key + "'");
  return doc.at(key);
}

}  // namespace

std::string game_to_json(const Game& game) {
  json doc;
  doc["format_version"] = kGameFormatVersion;
  doc["num_players"] = game.num_players();
  doc["actions"] = std::vector<int>(game.actions().begin(), game.actions().end());
  doc["kind"] = std::string(to_string(game.kind()));
  doc["backend"] = std::string(to_string(game.backend()));
  doc["layout"] = kLayout;
  if (game.is_dense()) {
    const auto payoffs = game.dense_payoffs();
    doc["payoffs"] = std::vector<double>(payoffs.begin(), payoffs.end());
  } else {
    doc["seed"] = game.seed();
  }
  return doc.dump();
}

Game game_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCategory::config, std::string("game file: ") + e.what());
  }
  require(doc.is_object(), ErrorCategory::config, "game file: top level must be an object");
  reject_unknown_keys(doc, {"format_version", "num_players", "actions", "kind", "backend",
                            "layout", "payoffs", "seed"});
  try {
    const int version = field(doc, "format_version").get<int>();
    require(version == kGameFormatVersion, ErrorCategory::config,
            "game file: unsupported format_version " + std::to_string(version));
    const int n = field(doc, "num_players").get<int>();
    auto actions = field(doc, "actions").get<std::vector<int>>();
    require(static_cast<int>(actions.size()) == n, ErrorCategory::config,
            "game file: actions list length differs from num_players");
    const GameKind kind = parse_game_kind(field(doc, "kind").get<std::string>());
    const std::string backend = field(doc, "backend").get<std::string>();
    require(field(doc, "layout").get<std::string>() == kLayout, ErrorCategory::config,
            "game file: unsupported layout");
    if (backend == "dense") {
      require(!doc.contains("seed"), ErrorCategory::config, "game file: dense games take no seed");
      return Game::dense(std::move(actions), field(doc, "payoffs").get<std::vector<double>>(),
                         kind);
    }
    require(backend == "procedural", ErrorCategory::config,
            "game file: unknown backend '" + backend + "'");
    require(!doc.contains("payoffs"), ErrorCategory::config,
            "game file: procedural games take no payoffs");
    return Game::procedural(std::move(actions), kind, field(doc, "seed").get<std::uint64_t>());
  } catch (const json::exception& e) {
    fail(ErrorCategory::config, std::string("game file: ") + e.what());
  }
}

void write_game(const Game& game, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCategory::io, "cannot open " + path.string());
  out << game_to_json(game) << '\n';
  require(static_cast<bool>(out), ErrorCategory::io, "failed writing " + path.string());
}

Game read_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCategory::io, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return game_from_json(buffer.str());
}

}  // namespace gw
