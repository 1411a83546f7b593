#pragma once

#include <string>

#include <json.hpp>

namespace cmhd {

std::string version();
/// Tool name, version, build type and compiler, written next to every output.
nlohmann::json version_stamp();

}  // namespace cmhd
