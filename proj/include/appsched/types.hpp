// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace appsched {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Array = Eigen::ArrayXd;
using ArrayXX = Eigen::ArrayXXd;
using IndexVector = Eigen::Matrix<Index, Eigen::Dynamic, 1>;

// Downlink resource-block grid: num_freq chunks of 12 subcarriers (180 kHz)
// times num_slots time slots. RB indices are slot-major, so the blocks of one
// slot occupy a contiguous index range.
struct RbGrid {
  Index num_freq = 1;
  Index num_slots = 1;

  Index size() const { return num_freq * num_slots; }
  Index chunk_of(Index rb) const { return rb % num_freq; }
  Index slot_of(Index rb) const { return rb / num_freq; }
  Index rb_index(Index freq, Index slot) const { return slot * num_freq + freq; }

  bool operator==(const RbGrid&) const = default;
};

}  // namespace appsched
