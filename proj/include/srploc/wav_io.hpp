#pragma once

#include <string>

#include "srploc/audio_buffer.hpp"

namespace srploc::wav_io {

/// Reads a PCM 16-bit little-endian WAV file into floats in [-1, 1)
/// (sample / 32768). Throws IoError on malformed files or other formats.
AudioBuffer read_wav(const std::string& path);

/// Writes PCM 16-bit little-endian, interleaved, channel i = microphone i.
/// If any |sample| exceeds 1, all channels are scaled by a common factor to
/// peak 1 before quantization (keeps inter-channel ratios intact).
void write_wav(const std::string& path, const AudioBuffer& audio);

}  // namespace srploc::wav_io
