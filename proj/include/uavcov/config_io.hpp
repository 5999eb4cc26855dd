#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "uavcov/model.hpp"

namespace uavcov {

// JSON form of NetworkConfig: one flat key per field, named as in the struct.
// "tx_power_dbm" is accepted in place of "tx_power_w" (but not together).

nlohmann::json config_to_json(const NetworkConfig& config);

/// Starts from `base` and applies every key present in `j`. Unknown keys and
/// wrongly typed values throw std::invalid_argument naming the key. The result
/// is validated.
NetworkConfig config_from_json(const nlohmann::json& j, const NetworkConfig& base = {});

NetworkConfig load_config(const std::filesystem::path& path, const NetworkConfig& base = {});

/// Compact single-line JSON, numbers printed round-trip exact.
std::string config_echo(const NetworkConfig& config);

}  // namespace uavcov
