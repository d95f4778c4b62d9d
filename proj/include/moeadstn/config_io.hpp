#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "moeadstn/moead.hpp"

namespace moeadstn {

// TOML with one key per configuration field. Missing keys keep the values
// of `defaults`; unknown keys and bad values raise ConfigError.
Config parse_config_toml(std::string_view text, const Config& defaults = {});
Config read_config_toml(const std::filesystem::path& path, const Config& defaults = {});

std::string config_to_toml(const Config& config);
void write_config_toml(const std::filesystem::path& path, const Config& config);

} // namespace moeadstn
