#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "uamcap/ddpg.hpp"
#include "uamcap/mlp.hpp"

namespace uam {

/// Binary network snapshot: magic + version, layer sizes, activation tags,
/// then row-major 64-bit weights and biases layer by layer. Little-endian,
/// bit-exact round trip. Loading rejects wrong magic, wrong version,
/// inconsistent shapes, and truncated files with distinct diagnostics.
void save_mlp(std::ostream& out, const Mlp& net);
Mlp load_mlp(std::istream& in);

void save_mlp_file(const std::filesystem::path& path, const Mlp& net);
Mlp load_mlp_file(const std::filesystem::path& path);

/// Agent container: hyperparameters, buffer statistics (contents are not
/// persisted), then actor, critic, actor target, critic target. Loading
/// reseeds the batch stream from master_seed and starts an empty buffer.
void save_agent(const std::filesystem::path& path, const Agent& agent);
Agent load_agent(const std::filesystem::path& path, std::uint64_t master_seed,
                 std::uint64_t batch_stream_index = 0);

}  // namespace uam
