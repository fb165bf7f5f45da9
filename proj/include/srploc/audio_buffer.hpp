#pragma once

#include <vector>

namespace srploc {

/// Multichannel audio: channels[i][n] is sample n of channel i, nominally in
/// [-1, 1]. Channel order follows microphone order everywhere.
struct AudioBuffer {
  std::vector<std::vector<double>> channels;
  double sample_rate = 0.0;  // Hz

  std::size_t channel_count() const { return channels.size(); }
  std::size_t sample_count() const { return channels.empty() ? 0 : channels.front().size(); }
};

}  // namespace srploc
