#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snnq/network.hpp"

namespace snnq {

struct CheckpointMeta {
    std::uint32_t epoch = 0;
    double temperature = 1.0;
    std::uint64_t seed = 0;
};

// Full-precision training snapshot ("SNNC"): serialized network spec guarded
// by a stored hash, 64-bit weights, and per-layer quantizer levels and scales.
// Loading reproduces the network bit for bit.
void save_checkpoint(const Network& net, const std::string& path,
                     const CheckpointMeta& meta = {});

struct LoadedCheckpoint {
    Network net;
    CheckpointMeta meta;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

// Packs level indices LSB-first into bytes; the final byte is zero-padded.
std::vector<std::uint8_t> pack_indices(const std::vector<std::uint32_t>& indices, int bits);
std::vector<std::uint32_t> unpack_indices(const std::vector<std::uint8_t>& bytes,
                                          std::size_t count, int bits);

struct ExportSummary {
    std::uint64_t bytes = 0;
    double compression_ratio = 1.0;
};

// Deployment container ("SNNQ"): per synaptic layer the level-index codes at
// the layer's bit width plus float32 scales. Requires every synaptic layer to
// carry a uniform-grid quantizer of at most 8 bits.
ExportSummary export_quantized(const Network& net, const std::string& path);

// Rebuilds an inference-only network (no quantizers attached) whose weights
// are the decoded effective values alpha * level[index].
Network import_quantized(const std::string& path);

// Serialized size in bytes at a uniform bit width: container overhead plus
// ceil(P_l * bits / 8) per layer (4 bytes per weight at 32).
std::uint64_t model_size_bytes(const Network& net, int bits);

// size(32) / size(bits); equals 1 at 32 bits by construction.
double compression_ratio(const Network& net, int bits);

}  // namespace snnq
