#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "srploc/wav_io.hpp"
#include "srploc/errors.hpp"

using namespace srploc;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const char* name) : path(fs::temp_directory_path() / name) {}
  ~TempFile() { std::error_code ec; fs::remove(path, ec); }
};

}  // namespace

TEST_CASE("wav round trip is exact on the int16 grid") {
  TempFile file("srploc_roundtrip.wav");
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> q(-32768, 32767);

  AudioBuffer audio;
  audio.sample_rate = 16000.0;
  audio.channels.assign(3, std::vector<double>(500));
  for (auto& ch : audio.channels)
    for (auto& v : ch) v = q(rng) / 32768.0;
  audio.channels[0][0] = -1.0;           // -32768 extreme
  audio.channels[0][1] = 32767 / 32768.0;

  wav_io::write_wav(file.path.string(), audio);
  const auto read = wav_io::read_wav(file.path.string());

  CHECK(read.sample_rate == 16000.0);
  REQUIRE(read.channels.size() == 3);
  REQUIRE(read.sample_count() == 500);
  for (std::size_t c = 0; c < 3; ++c) CHECK(read.channels[c] == audio.channels[c]);
}

TEST_CASE("channel interleaving keeps microphone order") {
  TempFile file("srploc_channels.wav");
  AudioBuffer audio;
  audio.sample_rate = 8000.0;
  audio.channels = {std::vector<double>(10, 0.25), std::vector<double>(10, -0.5),
                    std::vector<double>(10, 0.75)};
  wav_io::write_wav(file.path.string(), audio);
  const auto read = wav_io::read_wav(file.path.string());
  CHECK(read.channels[0][5] == 0.25);
  CHECK(read.channels[1][5] == -0.5);
  CHECK(read.channels[2][5] == 0.75);
}

TEST_CASE("overdriven audio is scaled to fit, preserving ratios") {
  TempFile file("srploc_hot.wav");
  AudioBuffer audio;
  audio.sample_rate = 16000.0;
  audio.channels = {std::vector<double>(100, 2.0), std::vector<double>(100, 1.0)};
  wav_io::write_wav(file.path.string(), audio);
  const auto read = wav_io::read_wav(file.path.string());
  CHECK(read.channels[0][0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(read.channels[0][0] / read.channels[1][0] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("write_wav validation") {
  AudioBuffer empty;
  empty.sample_rate = 16000.0;
  CHECK_THROWS_AS(wav_io::write_wav("/tmp/srploc_invalid.wav", empty), InvalidArgument);

  AudioBuffer ragged;
  ragged.sample_rate = 16000.0;
  ragged.channels = {std::vector<double>(10, 0.0), std::vector<double>(9, 0.0)};
  CHECK_THROWS_AS(wav_io::write_wav("/tmp/srploc_invalid.wav", ragged), InvalidArgument);

  AudioBuffer ok;
  ok.sample_rate = 16000.0;
  ok.channels = {std::vector<double>(10, 0.0)};
  CHECK_THROWS_AS(wav_io::write_wav("/nonexistent_dir/x.wav", ok), IoError);
}

TEST_CASE("read_wav rejects malformed files") {
  CHECK_THROWS_AS(wav_io::read_wav("/tmp/srploc_does_not_exist.wav"), IoError);

  TempFile garbage("srploc_garbage.wav");
  std::ofstream(garbage.path) << "this is not a wav file at all";
  CHECK_THROWS_AS(wav_io::read_wav(garbage.path.string()), IoError);

  // valid RIFF/WAVE but 8-bit PCM
  TempFile eightbit("srploc_8bit.wav");
  {
    AudioBuffer audio;
    audio.sample_rate = 8000.0;
    audio.channels = {std::vector<double>(4, 0.0)};
    wav_io::write_wav(eightbit.path.string(), audio);
    std::fstream f(eightbit.path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(34);  // bits-per-sample field
    const char bits = 8;
    f.write(&bits, 1);
  }
  CHECK_THROWS_AS(wav_io::read_wav(eightbit.path.string()), IoError);
}
