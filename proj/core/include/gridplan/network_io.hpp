#pragma once

#include <filesystem>
#include <string>

#include "gridplan/network.hpp"

namespace gridplan {

/// Parses the JSON network file format. Strict: unknown keys are rejected
/// with a ParseError naming the key. Units as declared on the types
/// (kV, km, MW, MVar, MVA, percent).
Network load_network(const std::filesystem::path& path);
Network parse_network(const std::string& json_text);

void save_network(const Network& network, const std::filesystem::path& path);
std::string network_to_json(const Network& network);

}
