#pragma once

#include "packbound/numeric.hpp"

#include <cstdint>
#include <string>

namespace packbound {

// Enough to rebuild the exact model a solution belongs to.
struct ModelRef {
  std::string solid;
  int d = 0;
  std::string spacing = "1/50";
};

// Kept apart from the solution proper so that reruns compare equal outside this object.
struct RunMetadata {
  std::string created;  // ISO 8601, UTC
  std::uint64_t seed = 0;
};

struct LoadedBundle {
  ModelRef model;
  SolutionBundle solution;
  RunMetadata metadata;
};

std::string bundle_to_json(const SolutionBundle& sol, const ModelRef& ref, const RunMetadata& meta);
LoadedBundle bundle_from_json(const std::string& text);

LoadedBundle read_bundle(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::string utc_timestamp();

}  // namespace packbound
