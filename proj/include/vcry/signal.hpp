#pragma once

#include <Eigen/Core>

namespace vcry {

// Mono sample buffer with its rate. Samples are nominally in [-1, 1] once
// they have passed through ingest normalization.
struct Signal {
    Eigen::ArrayXd samples;
    int sample_rate = 10000;
};

} // namespace vcry
