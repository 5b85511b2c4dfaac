#pragma once

#include <cstddef>
#include <vector>

namespace snnq {

// Dense row-major (channel, row, col) grid. Feature vectors use shape (n, 1, 1).
struct Tensor3 {
    int c = 0, h = 0, w = 0;
    std::vector<double> v;

    Tensor3() = default;
    Tensor3(int c_, int h_, int w_)
        : c(c_), h(h_), w(w_), v(static_cast<std::size_t>(c_) * h_ * w_, 0.0) {}

    std::size_t size() const { return v.size(); }

    std::size_t index(int ci, int y, int x) const {
        return (static_cast<std::size_t>(ci) * h + y) * w + x;
    }
    double& at(int ci, int y, int x) { return v[index(ci, y, x)]; }
    double at(int ci, int y, int x) const { return v[index(ci, y, x)]; }

    bool same_shape(const Tensor3& o) const { return c == o.c && h == o.h && w == o.w; }
};

}  // namespace snnq
