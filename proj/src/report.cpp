#include "dimq/report.hpp"

#include "dimq/fixtures.hpp"

#include <cstdio>

namespace dimq {

std::string content_hash(const std::string &data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

std::map<std::string, std::string> fixture_hashes() {
  return {
      {"G.pres", content_hash(fixture_file_G())},
      {"Gbar.pres", content_hash(fixture_file_Gbar())},
      {"w.word", content_hash(fixture_file_w())},
      {"wz.word", content_hash(fixture_file_wz())},
  };
}

} // namespace dimq
