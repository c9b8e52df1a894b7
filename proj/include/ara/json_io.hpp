#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "ara/fams.hpp"
#include "ara/game.hpp"
#include "ara/tsg.hpp"

namespace ara {

using Json = nlohmann::json;

// Parses text, reporting syntax errors with line and column.
Json parse_json(std::string_view text, const std::string& source = "input");
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

enum class Domain { ara, fams, tsg };
const char* to_string(Domain d);

// Guesses the instance kind from its top-level keys.
Domain detect_domain(const Json& j);

// The from_json functions throw ParseError naming the offending field, e.g.
// "targets[2].u_def: expected a number".
AraGame game_from_json(const Json& j);
Json game_to_json(const AraGame& game);

FamsInstance fams_from_json(const Json& j);
Json fams_to_json(const FamsInstance& inst);

TsgInstance tsg_from_json(const Json& j);
Json tsg_to_json(const TsgInstance& inst);

}  // namespace ara
