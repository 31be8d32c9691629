#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace dimq {

constexpr const char *kToolName = "dimq";
constexpr const char *kToolVersion = "1.0.0";
constexpr const char *kReportSchema = "dimq/1";

// FNV-1a, printed as 16 hex digits; identifies fixture content in reports.
std::string content_hash(const std::string &data);

// Hashes of the built-in fixture files, keyed by file name.
std::map<std::string, std::string> fixture_hashes();

} // namespace dimq
