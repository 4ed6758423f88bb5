// io.hpp — atomic file output, hashing and seeded random streams

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace sqsim::io {

// write to a temporary sibling, then rename over the target
void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(const std::string& data);

std::uint64_t splitmix64(std::uint64_t x);
// independent stream `id` derived from a master seed
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t id);
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t id);

// shortest round-trip decimal form
std::string fmt(double v);

std::string csv_matrix(const std::vector<std::vector<double>>& rows);

} // namespace sqsim::io
