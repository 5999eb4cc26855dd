#include "uavcov/config_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace uavcov {

namespace {

using nlohmann::json;

template <class T>
void read_field(const json& j, const char* key, T& field) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_same_v<T, int>) {
    if (!it->is_number_integer() && !(it->is_number() && it->get<double>() == std::floor(it->get<double>())))
      throw std::invalid_argument(std::string(key) + ": expected an integer");
    field = static_cast<int>(it->get<double>());
  } else {
    if (!it->is_number()) throw std::invalid_argument(std::string(key) + ": expected a number");
    field = it->get<double>();
  }
}

}  // namespace

#define UAVCOV_CONFIG_FIELDS(X)                                                              \
  X(n_uavs) X(altitude_m) X(radius_m) X(alpha) X(carrier_hz) X(nakagami_m) X(interferer_m) \
  X(shadow_q) X(shadow_gamma) X(tx_power_w) X(rf_dc_eff) X(slot_s) X(tau) X(noise_w)       \
  X(energy_threshold_j) X(sinr_threshold)

json config_to_json(const NetworkConfig& c) {
  json j;
#define X(name) j[#name] = c.name;
  UAVCOV_CONFIG_FIELDS(X)
#undef X
  return j;
}

NetworkConfig config_from_json(const json& j, const NetworkConfig& base) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  static const char* const known[] = {
#define X(name) #name,
      UAVCOV_CONFIG_FIELDS(X)
#undef X
          "tx_power_dbm"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw std::invalid_argument(item.key() + ": unknown config key");
  }
  if (j.contains("tx_power_w") && j.contains("tx_power_dbm"))
    throw std::invalid_argument("tx_power_dbm: conflicts with tx_power_w");

  NetworkConfig c = base;
#define X(name) read_field(j, #name, c.name);
  UAVCOV_CONFIG_FIELDS(X)
#undef X
  if (j.contains("tx_power_dbm")) {
    double dbm = 0.0;
    read_field(j, "tx_power_dbm", dbm);
    c.tx_power_w = dbm_to_watt(dbm);
  }
  c.validate();
  return c;
}

NetworkConfig load_config(const std::filesystem::path& path, const NetworkConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return config_from_json(j, base);
}

std::string config_echo(const NetworkConfig& config) { return config_to_json(config).dump(); }

}  // namespace uavcov
