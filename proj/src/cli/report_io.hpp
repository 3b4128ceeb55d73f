#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bbm/harness.hpp"

namespace bbm::cli {

/// Shortest round-trip decimal.
std::string num(double v);

/// Records of a store; an empty or missing store is a config error.
std::vector<harness::ReplicaRecord> read_records(const std::filesystem::path& store);

/// Sorted distinct t values of the successful records.
std::vector<double> store_times(const std::vector<harness::ReplicaRecord>& records);

void write_file(const std::filesystem::path& path, const std::string& body);

/// Header echoed at the top of every plain-text report.
std::string gates_banner();

std::filesystem::path output_dir(const std::filesystem::path& requested,
                                 const std::filesystem::path& store);

} // namespace bbm::cli
