#include "nopt/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nopt {

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ParseError("cannot open " + tmp + " for writing");
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ParseError("cannot rename " + tmp + " to " + path);
}

std::vector<Elem> load_set(const QuadraticField& k, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json j;
  in >> j;
  const nlohmann::json* arr = &j;
  if (j.is_object() && j.contains("elements")) arr = &j["elements"];
  if (!arr->is_array()) throw ParseError("set file must be a JSON list of element strings");
  std::vector<Elem> out;
  for (const auto& e : *arr) out.push_back(parse_elem(k, e.get<std::string>()));
  return out;
}

nlohmann::json set_to_json(const QuadraticField& k, const std::vector<Elem>& S) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : S) arr.push_back(format_elem(k, x));
  return arr;
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (!key.empty()) out[key] = val;
  }
  return out;
}

nlohmann::json run_metadata(const QuadraticField& k, const std::string& command,
                            uint64_t seed, const std::map<std::string, std::string>& config) {
  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["measure_convention"] = kMeasureConvention;
  meta["field"] = k.spec_string();
  meta["omega"] = k.omega_string();
  meta["command"] = command;
  meta["seed"] = seed;
  for (const auto& [key, val] : config) meta["config"][key] = val;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  meta["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
  return meta;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace nopt
