#include "bpdo/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace bpdo {

namespace {

constexpr char kMagic[4] = {'B', 'P', 'D', 'O'};
constexpr std::uint32_t kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little, "binary container assumes little-endian hosts");

nlohmann::json header_of(const SampledData& d) {
  nlohmann::json h;
  if (const auto* f = std::get_if<SampledField>(&d)) {
    h["kind"] = "field";
    h["grid"] = grid_to_json(f->grid);
    h["domain"] = to_string(f->domain);
    h["fsupp_radius"] = f->fsupp_radius ? nlohmann::json(*f->fsupp_radius) : nlohmann::json(nullptr);
    h["count"] = f->values.size();
  } else {
    const auto& s = std::get<SampledSymbol>(d);
    h["kind"] = "symbol";
    h["grid"] = grid_to_json(s.grid);
    h["fsupp_radii"] = s.fsupp_radii ? nlohmann::json(*s.fsupp_radii) : nlohmann::json(nullptr);
    h["count"] = s.values.size();
  }
  return h;
}

std::size_t expected_count(const nlohmann::json& h, const GridSpec& g) {
  const std::string kind = h.at("kind").get<std::string>();
  if (kind == "field") {
    const std::string dom = h.at("domain").get<std::string>();
    return dom == "space" ? g.space_count() : g.frequency_count();
  }
  if (g.dim != 1) throw Error("symbol files require n = 1");
  const std::size_t nf = g.frequency_points_per_axis();
  return g.space_points_per_axis() * nf * nf;
}

SampledData assemble(const nlohmann::json& h, std::vector<cplx> values) {
  const GridSpec g = grid_from_json(h.at("grid"));
  const std::string kind = h.at("kind").get<std::string>();
  if (values.size() != expected_count(h, g))
    throw Error("sample count " + std::to_string(values.size()) + " does not match the grid (" +
                std::to_string(expected_count(h, g)) + ")");
  if (kind == "field") {
    SampledField f;
    f.grid = g;
    const std::string dom = h.at("domain").get<std::string>();
    if (dom != "space" && dom != "frequency") throw Error("unknown domain '" + dom + "'");
    f.domain = dom == "space" ? Domain::space : Domain::frequency;
    if (h.contains("fsupp_radius") && !h["fsupp_radius"].is_null())
      f.fsupp_radius = h["fsupp_radius"].get<double>();
    f.values = std::move(values);
    return f;
  }
  if (kind == "symbol") {
    SampledSymbol s;
    s.grid = g;
    if (h.contains("fsupp_radii") && !h["fsupp_radii"].is_null())
      s.fsupp_radii = h["fsupp_radii"].get<std::array<double, 3>>();
    s.values = std::move(values);
    return s;
  }
  throw Error("unknown data kind '" + kind + "'");
}

const std::vector<cplx>& values_of(const SampledData& d) {
  if (const auto* f = std::get_if<SampledField>(&d)) return f->values;
  return std::get<SampledSymbol>(d).values;
}

}  // namespace

nlohmann::json grid_to_json(const GridSpec& g) {
  return {{"dim", g.dim},
          {"x_halfwidth", g.x_halfwidth},
          {"x_step", g.x_step},
          {"xi_halfwidth", g.xi_halfwidth},
          {"xi_step", g.xi_step}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
  try {
    return make_grid(j.at("dim").get<int>(), j.at("x_halfwidth").get<double>(), j.at("x_step").get<double>(),
                     j.at("xi_halfwidth").get<double>(), j.at("xi_step").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("grid block: ") + e.what());
  }
}

nlohmann::json to_json(const SampledData& d) {
  nlohmann::json j = header_of(d);
  nlohmann::json vals = nlohmann::json::array();
  for (const cplx& v : values_of(d)) vals.push_back({v.real(), v.imag()});
  j["values"] = std::move(vals);
  return j;
}

SampledData data_from_json(const nlohmann::json& j) {
  try {
    std::vector<cplx> values;
    for (const auto& v : j.at("values")) {
      if (!v.is_array() || v.size() != 2) throw Error("values must be [re, im] pairs");
      values.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return assemble(j, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed data document: ") + e.what());
  }
}

void write_binary(const std::filesystem::path& path, const SampledData& d) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  const std::string header = header_of(d).dump();
  const std::uint64_t len = header.size();
  os.write(kMagic, 4);
  os.write(reinterpret_cast<const char*>(&kFormatVersion), sizeof kFormatVersion);
  os.write(reinterpret_cast<const char*>(&len), sizeof len);
  os.write(header.data(), static_cast<std::streamsize>(header.size()));
  const auto& v = values_of(d);
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(cplx)));
  if (!os) throw Error("write failed for '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const SampledData& d) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  os << to_json(d).dump() << '\n';
}

SampledData read_data(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) {
    constexpr std::size_t fixed = 4 + sizeof(std::uint32_t) + sizeof(std::uint64_t);
    if (bytes.size() < fixed) throw Error("truncated binary container");
    std::uint32_t version;
    std::uint64_t len;
    std::memcpy(&version, bytes.data() + 4, sizeof version);
    std::memcpy(&len, bytes.data() + 8, sizeof len);
    if (version != kFormatVersion) throw Error("unsupported container version " + std::to_string(version));
    if (len > bytes.size() - fixed) throw Error("truncated binary header");
    nlohmann::json h;
    try {
      h = nlohmann::json::parse(bytes.substr(fixed, len));
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("malformed binary header: ") + e.what());
    }
    const std::size_t body = bytes.size() - fixed - len;
    if (body % sizeof(cplx) != 0) throw Error("binary payload is not a whole number of complex samples");
    std::vector<cplx> values(body / sizeof(cplx));
    std::memcpy(values.data(), bytes.data() + fixed + len, body);
    try {
      return assemble(h, std::move(values));
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("malformed binary header: ") + e.what());
    }
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw Error("'" + path.string() + "' is neither a binary container nor JSON: " + e.what());
  }
  return data_from_json(j);
}

}  // namespace bpdo
