#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "bpdo/grid.hpp"

namespace bpdo {

using SampledData = std::variant<SampledField, SampledSymbol>;

nlohmann::json grid_to_json(const GridSpec& g);
/// Validates through make_grid.
GridSpec grid_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SampledData& d);
SampledData data_from_json(const nlohmann::json& j);

/**
 * Binary container: the 4 bytes "BPDO", a little-endian u32 format version,
 * a u64 header length, the JSON header (everything except values) and then
 * the values as little-endian f64 (re, im) pairs.
 */
void write_binary(const std::filesystem::path& path, const SampledData& d);
void write_json(const std::filesystem::path& path, const SampledData& d);
/// Reads either format, detected from the leading bytes. Throws Error on malformed input.
SampledData read_data(const std::filesystem::path& path);

}  // namespace bpdo
