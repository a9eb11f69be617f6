#include "divctl/rng.hpp"

namespace divctl {

ZigguratTables::ZigguratTables() {
    double fx = std::exp(-0.5 * kR * kR);
    x[0] = kV / fx;  // base block, includes the tail
    x[1] = kR;
    x[kBlocks] = 0.0;
    for (int i = 2; i < kBlocks; ++i) {
        x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + fx));
        fx = std::exp(-0.5 * x[i] * x[i]);
    }
    for (int i = 0; i <= kBlocks; ++i) f[i] = std::exp(-0.5 * x[i] * x[i]);
    for (int i = 0; i < kBlocks; ++i) ratio[i] = x[i + 1] / x[i];
}

const ZigguratTables kZiggurat;

}  // namespace divctl
