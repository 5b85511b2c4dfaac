#include "snnq/model_io.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "snnq/serial.hpp"

namespace snnq {

namespace {

using nlohmann::json;

json layer_to_json(const LayerSpec& l) {
    switch (l.kind) {
        case LayerKind::Conv2d:
            return {{"kind", "conv2d"}, {"out_channels", l.out_channels}, {"kernel", l.kernel}};
        case LayerKind::Dense:
            return {{"kind", "dense"}, {"out_features", l.out_features}};
        case LayerKind::MaxPool2:
            return {{"kind", "maxpool2"}};
        case LayerKind::Lif:
            return {{"kind", "lif"}};
        case LayerKind::VotingAvgPool:
            return {{"kind", "voting_avgpool"}, {"window", l.window}};
    }
    throw std::logic_error("unreachable layer kind");
}

LayerSpec layer_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "conv2d") return conv2d(j.at("out_channels").get<int>(), j.at("kernel").get<int>());
    if (kind == "dense") return dense(j.at("out_features").get<int>());
    if (kind == "maxpool2") return maxpool2();
    if (kind == "lif") return lif();
    if (kind == "voting_avgpool") return voting_avgpool(j.at("window").get<int>());
    throw std::invalid_argument("unknown layer kind '" + kind + "' in model spec");
}

std::string spec_to_json(const NetworkSpec& spec) {
    json j;
    j["in_channels"] = spec.in_channels;
    j["in_h"] = spec.in_h;
    j["in_w"] = spec.in_w;
    j["timesteps"] = spec.timesteps;
    j["lif"] = {{"tau", spec.lif_params.tau},
                {"v_threshold", spec.lif_params.v_threshold},
                {"v_reset", spec.lif_params.v_reset}};
    j["surrogate"] = {{"half_width", spec.surrogate.half_width}, {"leak", spec.surrogate.leak}};
    j["layers"] = json::array();
    for (const auto& l : spec.layers) j["layers"].push_back(layer_to_json(l));
    return j.dump();
}

NetworkSpec spec_from_json(const std::string& text, std::uint64_t blob_offset) {
    json j;
    try {
        j = json::parse(text);
        NetworkSpec spec;
        spec.in_channels = j.at("in_channels").get<int>();
        spec.in_h = j.at("in_h").get<int>();
        spec.in_w = j.at("in_w").get<int>();
        spec.timesteps = j.at("timesteps").get<int>();
        spec.lif_params.tau = j.at("lif").at("tau").get<double>();
        spec.lif_params.v_threshold = j.at("lif").at("v_threshold").get<double>();
        spec.lif_params.v_reset = j.at("lif").at("v_reset").get<double>();
        spec.surrogate.half_width = j.at("surrogate").at("half_width").get<double>();
        spec.surrogate.leak = j.at("surrogate").at("leak").get<double>();
        for (const auto& lj : j.at("layers")) spec.layers.push_back(layer_from_json(lj));
        return spec;
    } catch (const json::exception& e) {
        throw IoError(IoErrc::BadValue, blob_offset,
                      std::string("malformed model spec blob: ") + e.what());
    }
}

constexpr std::uint16_t kCheckpointVersion = 1;
constexpr std::uint16_t kQuantizedVersion = 1;

void check_magic(const std::vector<std::uint8_t>& raw, const char* magic,
                 const std::string& path, const char* what) {
    if (raw.size() < 4 || raw[0] != magic[0] || raw[1] != magic[1] || raw[2] != magic[2] ||
        raw[3] != magic[3])
        throw IoError(IoErrc::BadMagic, 0, path + ": not a " + what + " file");
}

std::vector<const Layer*> synaptic_layers(const Network& net) {
    std::vector<const Layer*> out;
    for (const auto& l : net.layers())
        if (l.synaptic()) out.push_back(&l);
    return out;
}

// Smallest supported code width for a level count, and the level count a
// width implies: 1 bit <-> 2 levels, b bits <-> 2^b - 1 levels.
int bits_for_levels(int count) {
    if (count == 2) return 1;
    if (count == 3) return 2;
    if (count == 15) return 4;
    if (count == 255) return 8;
    return 0;
}

int levels_for_bits(int bits) {
    switch (bits) {
        case 1: return 2;
        case 2: return 3;
        case 4: return 15;
        case 8: return 255;
        default: return 0;
    }
}

}  // namespace

void save_checkpoint(const Network& net, const std::string& path, const CheckpointMeta& meta) {
    const std::string blob = spec_to_json(net.spec());

    ByteWriter w;
    w.bytes("SNNC", 4);
    w.u16(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(blob.size()));
    w.bytes(blob.data(), blob.size());
    w.u64(fnv1a64(blob.data(), blob.size()));
    w.u32(meta.epoch);
    w.f64(meta.temperature);
    w.u64(meta.seed);

    const auto layers = synaptic_layers(net);
    w.u16(static_cast<std::uint16_t>(layers.size()));
    for (const Layer* l : layers) {
        w.u64(l->weight_count());
        for (double v : l->weights) w.f64(v);
        w.u8(l->quant ? 1 : 0);
        if (l->quant) {
            const auto& levels = l->quant->levels.values();
            w.u16(static_cast<std::uint16_t>(levels.size()));
            for (double q : levels) w.f64(q);
            w.f64(l->qstate.alpha);
            w.f64(l->qstate.beta);
            w.f64(l->qstate.temperature);
        }
    }
    write_file_atomic(path, w.data().data(), w.size());
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    const auto raw = read_file_bytes(path);
    check_magic(raw, "SNNC", path, "checkpoint");
    ByteReader r(raw);
    r.bytes(4);

    const std::uint16_t version = r.u16();
    if (version != kCheckpointVersion)
        throw IoError(IoErrc::BadVersion, r.offset() - 2,
                      path + ": checkpoint version " + std::to_string(version) +
                          " not supported (expected " + std::to_string(kCheckpointVersion) + ")");

    const std::uint32_t blob_len = r.u32();
    const std::uint64_t blob_offset = r.offset();
    const auto blob_bytes = r.bytes(blob_len);
    const std::string blob(blob_bytes.begin(), blob_bytes.end());
    const std::uint64_t stored_hash = r.u64();
    if (stored_hash != fnv1a64(blob.data(), blob.size()))
        throw IoError(IoErrc::HashMismatch, blob_offset,
                      path + ": model spec hash mismatch, file is corrupt");

    LoadedCheckpoint out;
    out.meta.epoch = r.u32();
    out.meta.temperature = r.f64();
    out.meta.seed = r.u64();

    const NetworkSpec spec = spec_from_json(blob, blob_offset);
    const std::uint16_t n_layers = r.u16();

    std::vector<std::vector<double>> weights;
    struct QuantBlock {
        bool present = false;
        std::vector<double> levels;
        double alpha = 1.0, beta = 1.0, temperature = 1.0;
    };
    std::vector<QuantBlock> quants;
    for (std::uint16_t i = 0; i < n_layers; ++i) {
        const std::uint64_t count = r.u64();
        std::vector<double> wts(count);
        for (auto& v : wts) v = r.f64();
        weights.push_back(std::move(wts));

        QuantBlock qb;
        qb.present = r.u8() != 0;
        if (qb.present) {
            const std::uint16_t n_levels = r.u16();
            qb.levels.resize(n_levels);
            for (auto& q : qb.levels) q = r.f64();
            qb.alpha = r.f64();
            qb.beta = r.f64();
            qb.temperature = r.f64();
        }
        quants.push_back(std::move(qb));
    }
    if (r.remaining() != 0)
        throw IoError(IoErrc::BadValue, r.offset(), path + ": trailing bytes after checkpoint");

    out.net = assemble_network(spec, weights);
    std::size_t qi = 0;
    for (auto& l : out.net.layers()) {
        if (!l.synaptic()) continue;
        const QuantBlock& qb = quants[qi++];
        if (qb.present) {
            l.quant = derive_spec(QuantLevels(qb.levels));
            l.qstate = {qb.alpha, qb.beta, qb.temperature};
        }
    }
    return out;
}

std::vector<std::uint8_t> pack_indices(const std::vector<std::uint32_t>& indices, int bits) {
    if (bits != 1 && bits != 2 && bits != 4 && bits != 8)
        throw std::invalid_argument("packing supports 1, 2, 4 or 8 bits");
    std::vector<std::uint8_t> out((indices.size() * bits + 7) / 8, 0);
    const std::uint32_t mask = bits == 8 ? 0xffu : ((1u << bits) - 1u);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] & ~mask)
            throw std::invalid_argument("index " + std::to_string(indices[i]) +
                                        " does not fit in " + std::to_string(bits) + " bits");
        const std::size_t bit = i * bits;
        out[bit / 8] |= static_cast<std::uint8_t>(indices[i] << (bit % 8));
    }
    return out;
}

std::vector<std::uint32_t> unpack_indices(const std::vector<std::uint8_t>& bytes,
                                          std::size_t count, int bits) {
    if (bits != 1 && bits != 2 && bits != 4 && bits != 8)
        throw std::invalid_argument("packing supports 1, 2, 4 or 8 bits");
    if (bytes.size() * 8 < count * static_cast<std::size_t>(bits))
        throw std::invalid_argument("packed buffer shorter than the declared index count");
    const std::uint32_t mask = bits == 8 ? 0xffu : ((1u << bits) - 1u);
    std::vector<std::uint32_t> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t bit = i * bits;
        out[i] = (bytes[bit / 8] >> (bit % 8)) & mask;
    }
    return out;
}

ExportSummary export_quantized(const Network& net, const std::string& path) {
    const auto layers = synaptic_layers(net);
    if (layers.empty()) throw std::invalid_argument("network has no synaptic layers to export");
    for (const Layer* l : layers) {
        if (!l->quant)
            throw std::invalid_argument(l->name +
                                        " runs at full precision: nothing to pack for export");
    }

    const std::string blob = spec_to_json(net.spec());
    ByteWriter w;
    w.bytes("SNNQ", 4);
    w.u16(kQuantizedVersion);
    w.u32(static_cast<std::uint32_t>(blob.size()));
    w.bytes(blob.data(), blob.size());
    w.u16(static_cast<std::uint16_t>(layers.size()));

    for (const Layer* l : layers) {
        const auto& levels = l->quant->levels.values();
        const int bits = bits_for_levels(static_cast<int>(levels.size()));
        if (bits == 0)
            throw std::invalid_argument(l->name + ": " + std::to_string(levels.size()) +
                                        " levels do not map to a supported code width");
        // the container stores only the end points, so the grid must be uniform
        const double gap = (levels.back() - levels.front()) / (levels.size() - 1);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (std::abs(levels[i] - (levels.front() + gap * i)) > 1e-9)
                throw std::invalid_argument(l->name + ": non-uniform level grid not packable");
        }

        std::vector<std::uint32_t> indices(l->weight_count());
        for (std::size_t i = 0; i < indices.size(); ++i)
            indices[i] =
                static_cast<std::uint32_t>(quantize_index(l->weights[i], *l->quant, l->qstate));

        w.u8(static_cast<std::uint8_t>(l->spec.kind));
        w.u64(l->weight_count());
        w.u8(static_cast<std::uint8_t>(bits));
        w.f32(static_cast<float>(levels.front()));
        w.f32(static_cast<float>(levels.back()));
        w.f32(static_cast<float>(l->qstate.alpha));
        w.f32(static_cast<float>(l->qstate.beta));
        const auto packed = pack_indices(indices, bits);
        w.bytes(packed.data(), packed.size());
    }

    write_file_atomic(path, w.data().data(), w.size());
    ExportSummary summary;
    summary.bytes = w.size();
    summary.compression_ratio =
        static_cast<double>(model_size_bytes(net, 32)) / static_cast<double>(w.size());
    return summary;
}

Network import_quantized(const std::string& path) {
    const auto raw = read_file_bytes(path);
    check_magic(raw, "SNNQ", path, "quantized model");
    ByteReader r(raw);
    r.bytes(4);

    const std::uint16_t version = r.u16();
    if (version != kQuantizedVersion)
        throw IoError(IoErrc::BadVersion, r.offset() - 2,
                      path + ": quantized model version " + std::to_string(version) +
                          " not supported");

    const std::uint32_t blob_len = r.u32();
    const std::uint64_t blob_offset = r.offset();
    const auto blob_bytes = r.bytes(blob_len);
    const NetworkSpec spec =
        spec_from_json(std::string(blob_bytes.begin(), blob_bytes.end()), blob_offset);

    const std::uint16_t n_layers = r.u16();
    std::vector<std::vector<double>> weights;
    for (std::uint16_t li = 0; li < n_layers; ++li) {
        r.u8();  // layer kind, informational; the spec blob is authoritative
        const std::uint64_t count = r.u64();
        const int bits = r.u8();
        const int n_levels = levels_for_bits(bits);
        if (n_levels == 0)
            throw IoError(IoErrc::UnsupportedBits, r.offset() - 1,
                          path + ": layer " + std::to_string(li) + " declares " +
                              std::to_string(bits) + "-bit codes (supported: 1, 2, 4, 8)");
        const double lo = r.f32();
        const double hi = r.f32();
        const double alpha = r.f32();
        r.f32();  // beta: not needed to reconstruct effective weights
        if (!(hi > lo))
            throw IoError(IoErrc::BadValue, r.offset() - 16,
                          path + ": layer " + std::to_string(li) + " has an empty level range");

        const std::size_t packed_len = (static_cast<std::size_t>(count) * bits + 7) / 8;
        const std::uint64_t packed_offset = r.offset();
        const auto packed = r.bytes(packed_len);
        const auto indices = unpack_indices(packed, count, bits);

        const double gap = (hi - lo) / (n_levels - 1);
        std::vector<double> wts(count);
        for (std::size_t i = 0; i < count; ++i) {
            if (indices[i] >= static_cast<std::uint32_t>(n_levels))
                throw IoError(IoErrc::BadValue, packed_offset + i * bits / 8,
                              path + ": layer " + std::to_string(li) + " index " +
                                  std::to_string(indices[i]) + " exceeds " +
                                  std::to_string(n_levels) + " levels");
            wts[i] = alpha * (lo + gap * indices[i]);
        }
        weights.push_back(std::move(wts));
    }
    if (r.remaining() != 0)
        throw IoError(IoErrc::BadValue, r.offset(), path + ": trailing bytes after layers");

    return assemble_network(spec, weights);
}

std::uint64_t model_size_bytes(const Network& net, int bits) {
    if (bits != 32 && levels_for_bits(bits) == 0)
        throw std::invalid_argument("unsupported bit width " + std::to_string(bits));
    const std::string blob = spec_to_json(net.spec());
    // container layout: magic + version + length-prefixed blob + layer count,
    // then per layer a 26-byte header and the payload
    std::uint64_t size = 4 + 2 + 4 + blob.size() + 2;
    for (const auto& l : net.layers()) {
        if (!l.synaptic()) continue;
        size += 26;
        size += bits == 32 ? l.weight_count() * 4
                           : (l.weight_count() * static_cast<std::uint64_t>(bits) + 7) / 8;
    }
    return size;
}

double compression_ratio(const Network& net, int bits) {
    return static_cast<double>(model_size_bytes(net, 32)) /
           static_cast<double>(model_size_bytes(net, bits));
}

}  // namespace snnq
