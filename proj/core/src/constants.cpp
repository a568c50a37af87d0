#include "bpdo/constants.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bpdo/grid.hpp"

#ifndef BPDO_DEFAULT_CONSTANTS
#define BPDO_DEFAULT_CONSTANTS "data/constants.json"
#endif

namespace bpdo {

double ConstantsTable::get(const std::string& name) const {
  auto it = entries.find(name);
  if (it == entries.end()) throw Error("constants table '" + source + "' has no entry '" + name + "'");
  return it->second.value;
}

std::filesystem::path default_constants_path() {
  if (const char* env = std::getenv("BPDO_CONSTANTS_PATH"); env && *env) return env;
  return BPDO_DEFAULT_CONSTANTS;
}

ConstantsTable load_constants(const std::optional<std::filesystem::path>& path) {
  const std::filesystem::path p = path ? *path : default_constants_path();
  std::ifstream is(p);
  if (!is) throw Error("cannot open constants table '" + p.string() + "'");
  ConstantsTable t;
  t.source = p.string();
  try {
    const nlohmann::json j = nlohmann::json::parse(is);
    t.version = j.at("version").get<int>();
    for (const auto& [name, e] : j.at("constants").items()) {
      FrozenConstant c;
      c.value = e.at("value").get<double>();
      c.measured = e.value("measured", c.value);
      c.note = e.value("note", "");
      t.entries[name] = c;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed constants table '" + p.string() + "': " + e.what());
  }
  return t;
}

void save_constants(const std::filesystem::path& path, const ConstantsTable& t) {
  nlohmann::json j;
  j["version"] = t.version;
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [name, e] : t.entries)
    c[name] = {{"value", e.value}, {"measured", e.measured}, {"note", e.note}};
  j["constants"] = std::move(c);
  std::ofstream os(path);
  if (!os) throw Error("cannot write constants table '" + path.string() + "'");
  os << j.dump(2) << '\n';
}

}  // namespace bpdo
