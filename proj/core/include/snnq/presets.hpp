#pragma once

#include <string>
#include <vector>

#include "snnq/data.hpp"
#include "snnq/network.hpp"

namespace snnq {

// Named architectures:
//   micro              2x8x8 input, T=4: Conv3(4)-MP2-Dense20-AP10 (2 classes)
//   desk-tiny          2x16x16, T=10: 2x(Conv3(8)-MP2)-Dense64-Dense30-AP10 (3 classes)
//   table1-cifar10dvs  2x128x128, T=10: 5x(Conv3(128)-MP2)-Dense512-Dense100-AP10
//   table1-dvs128      as above with Dense110 head (11 classes)
//   table1-ncaltech101 2x180x240 variant with Dense1010 head (101 classes)
//   table1-nmnist      2x34x34 variant with Dense100 head (10 classes)
//   table2-nmnist      2x34x34: Conv7(64)-MP2-Conv7(128)-Conv7(128)-MP2-Dense11 (11 classes)
// Every convolution and dense layer is followed by a lif layer.
NetworkSpec preset_network(const std::string& name);

// Synthetic generator settings matched to a preset's sensor and class count.
SyntheticSpec preset_synthetic(const std::string& name);

const std::vector<std::string>& preset_names();

}  // namespace snnq
