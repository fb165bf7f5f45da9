#include "srploc/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "srploc/errors.hpp"

namespace srploc::wav_io {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& s, std::uint32_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw IoError(path + ": not a RIFF/WAVE file");

  std::uint16_t channels = 0, bits = 0, format = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || pos + 8 + 16 > bytes.size()) throw IoError(path + ": truncated fmt chunk");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (pos + 8 + size > bytes.size()) throw IoError(path + ": truncated data chunk");
      data = chunk + 8;
      data_size = size;
    }
    pos += 8 + size + (size & 1);  // chunks are word-aligned
  }

  if (format != kFormatPcm || bits != 16)
    throw IoError(path + ": only PCM 16-bit WAV is supported");
  if (channels == 0 || rate == 0 || data == nullptr)
    throw IoError(path + ": missing fmt or data chunk");

  const std::size_t frames = data_size / (2u * channels);
  AudioBuffer audio;
  audio.sample_rate = static_cast<double>(rate);
  audio.channels.assign(channels, std::vector<double>(frames));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + 2 * (n * channels + c);
      const auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
      audio.channels[c][n] = static_cast<double>(v) / 32768.0;
    }
  }
  return audio;
}

void write_wav(const std::string& path, const AudioBuffer& audio) {
  if (audio.channels.empty() || !(audio.sample_rate > 0.0))
    throw InvalidArgument("write_wav: need at least one channel and a positive sample rate");
  const std::size_t frames = audio.sample_count();
  for (const auto& ch : audio.channels)
    if (ch.size() != frames) throw InvalidArgument("write_wav: channels differ in length");

  double peak = 0.0;
  for (const auto& ch : audio.channels)
    for (double s : ch) peak = std::max(peak, std::abs(s));
  const double scale = peak > 1.0 ? 1.0 / peak : 1.0;

  const auto channels = static_cast<std::uint16_t>(audio.channels.size());
  const auto rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate));
  const std::uint32_t data_size = static_cast<std::uint32_t>(frames * channels * 2);

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put_u32(out, 36 + data_size);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, channels);
  put_u32(out, rate);
  put_u32(out, rate * channels * 2);                       // byte rate
  put_u16(out, static_cast<std::uint16_t>(channels * 2));  // block align
  put_u16(out, 16);                                        // bits per sample
  out += "data";
  put_u32(out, data_size);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const long q = std::clamp(std::lround(audio.channels[c][n] * scale * 32768.0),
                                -32768L, 32767L);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("failed writing " + path);
}

}  // namespace srploc::wav_io
