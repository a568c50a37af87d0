#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace bpdo {

/**
 * Frozen constants for the inequality checks. Each entry keeps the bound used
 * by the checks and the value measured when it was frozen.
 */
struct FrozenConstant {
  double value = 0.0;
  double measured = 0.0;
  std::string note;
};

struct ConstantsTable {
  int version = 0;
  std::string source;
  std::map<std::string, FrozenConstant> entries;

  /// Throws Error if `name` is missing.
  double get(const std::string& name) const;
  bool has(const std::string& name) const { return entries.count(name) != 0; }
};

/// BPDO_CONSTANTS_PATH if set, else the table shipped with the library.
std::filesystem::path default_constants_path();
ConstantsTable load_constants(const std::optional<std::filesystem::path>& path = std::nullopt);
void save_constants(const std::filesystem::path& path, const ConstantsTable& t);

}  // namespace bpdo
