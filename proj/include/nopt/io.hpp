#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "nopt/field.hpp"

namespace nopt {

// write-then-rename so outputs are atomic
void atomic_write(const std::string& path, const std::string& content);

// set files: JSON list of element strings "a+b*w"
std::vector<Elem> load_set(const QuadraticField& k, const std::string& path);
nlohmann::json set_to_json(const QuadraticField& k, const std::vector<Elem>& S);

// key = value configuration text (caps, B, M, nudge tolerance, threads, ...)
std::map<std::string, std::string> load_config(const std::string& path);

// metadata block attached to every output: version, measure convention,
// field, omega convention, seed, config echo, timestamp
nlohmann::json run_metadata(const QuadraticField& k, const std::string& command,
                            uint64_t seed, const std::map<std::string, std::string>& config);

std::string csv_escape(const std::string& s);

}  // namespace nopt
