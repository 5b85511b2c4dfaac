#include "snnq/presets.hpp"

#include <stdexcept>

namespace snnq {

namespace {

NetworkSpec base_spec(int h, int w, int timesteps) {
    NetworkSpec s;
    s.in_channels = 2;
    s.in_h = h;
    s.in_w = w;
    s.timesteps = timesteps;
    return s;
}

void conv_block(NetworkSpec& s, int channels, int kernel, bool pool) {
    s.layers.push_back(conv2d(channels, kernel));
    s.layers.push_back(lif());
    if (pool) s.layers.push_back(maxpool2());
}

void dense_block(NetworkSpec& s, int features) {
    s.layers.push_back(dense(features));
    s.layers.push_back(lif());
}

NetworkSpec table1_variant(int h, int w, int head) {
    NetworkSpec s = base_spec(h, w, 10);
    for (int i = 0; i < 5; ++i) conv_block(s, 128, 3, true);
    dense_block(s, 512);
    dense_block(s, head);
    s.layers.push_back(voting_avgpool(10));
    return s;
}

}  // namespace

NetworkSpec preset_network(const std::string& name) {
    if (name == "micro") {
        NetworkSpec s = base_spec(8, 8, 4);
        conv_block(s, 4, 3, true);
        dense_block(s, 20);
        s.layers.push_back(voting_avgpool(10));
        return s;
    }
    if (name == "desk-tiny") {
        NetworkSpec s = base_spec(16, 16, 10);
        conv_block(s, 8, 3, true);
        conv_block(s, 8, 3, true);
        dense_block(s, 64);
        dense_block(s, 30);
        s.layers.push_back(voting_avgpool(10));
        return s;
    }
    if (name == "table1-cifar10dvs") return table1_variant(128, 128, 100);
    if (name == "table1-dvs128") return table1_variant(128, 128, 110);
    if (name == "table1-ncaltech101") return table1_variant(180, 240, 1010);
    if (name == "table1-nmnist") return table1_variant(34, 34, 100);
    if (name == "table2-nmnist") {
        NetworkSpec s = base_spec(34, 34, 10);
        conv_block(s, 64, 7, true);
        conv_block(s, 128, 7, false);
        conv_block(s, 128, 7, true);
        dense_block(s, 11);
        s.layers.push_back(voting_avgpool(1));
        return s;
    }
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown preset '" + name + "' (known: " + known + ")");
}

SyntheticSpec preset_synthetic(const std::string& name) {
    const NetworkSpec net = preset_network(name);
    SyntheticSpec s;
    s.width = net.in_w;
    s.height = net.in_h;

    // class count follows the network head
    int features = 0;
    for (const auto& l : net.layers)
        if (l.kind == LayerKind::Dense) features = l.out_features;
    s.n_classes = features / net.layers.back().window;

    if (name == "micro") {
        s.samples_per_class = 100;
        s.events_per_sample = 200;
    } else if (name == "desk-tiny") {
        s.samples_per_class = 250;
        s.events_per_sample = 400;
    } else {
        s.samples_per_class = 10;  // smoke-test scale for the full-size nets
        s.events_per_sample = 2000;
    }
    return s;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "micro",          "desk-tiny",          "table1-cifar10dvs", "table1-dvs128",
        "table1-nmnist",  "table1-ncaltech101", "table2-nmnist",
    };
    return names;
}

}  // namespace snnq
