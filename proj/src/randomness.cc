#include "fastjl/randomness.h"

#include <cmath>
#include <utility>

#include "fastjl/errors.h"

namespace fastjl {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

BitSource::BitSource(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
  const std::uint64_t base = mix64(master_seed ^ mix64(stream_id + 0x5851F42D4C957F2DULL));
  bit_key_ = mix64(base ^ 0xB17B17B17B17B17BULL);
  cont_key_ = mix64(base ^ 0xC0417C0417C0417CULL);
}

int BitSource::next_bit() {
  if (bits_left_ == 0) {
    bit_buffer_ = mix64(bit_key_ + kGolden * ++bit_word_counter_);
    bits_left_ = 64;
  }
  const int b = static_cast<int>(bit_buffer_ & 1u);
  bit_buffer_ >>= 1;
  --bits_left_;
  ++bits_consumed_;
  return b;
}

int BitSource::draw_sign() { return next_bit() ? 1 : -1; }

std::uint64_t BitSource::draw_bits(int k) {
  if (k < 0 || k > 64) throw RangeError("draw_bits: k must be in [0, 64]");
  std::uint64_t v = 0;
  for (int i = 0; i < k; ++i) v |= static_cast<std::uint64_t>(next_bit()) << i;
  return v;
}

std::size_t BitSource::draw_uniform_index(std::size_t m) {
  if (m == 0) throw RangeError("draw_uniform_index: m must be positive");
  // Fast dice roller: (v, c) holds a uniform value v on {0..c-1}.
  std::uint64_t v = 0;
  std::uint64_t c = 1;
  for (;;) {
    if (c >= m) {
      if (v < m) return static_cast<std::size_t>(v);
      v -= m;
      c -= m;
    }
    v = (v << 1) | static_cast<std::uint64_t>(next_bit());
    c <<= 1;
  }
}

std::uint64_t BitSource::next_continuous_word() {
  return mix64(cont_key_ + kGolden * ++cont_word_counter_);
}

double BitSource::next_open_interval() {
  return static_cast<double>(next_continuous_word() >> 11) * 0x1.0p-52 - 1.0;
}

double BitSource::draw_uniform01() {
  ++uniforms_consumed_;
  return static_cast<double>(next_continuous_word() >> 11) * 0x1.0p-53;
}

double BitSource::draw_gaussian() {
  ++gaussians_consumed_;
  if (has_spare_gaussian_) {
    has_spare_gaussian_ = false;
    return spare_gaussian_;
  }
  double u, v, s;
  do {
    u = next_open_interval();
    v = next_open_interval();
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_gaussian_ = v * f;
  has_spare_gaussian_ = true;
  return u * f;
}

BitSource derive_stream(std::uint64_t master_seed, std::uint64_t trial_index) {
  return BitSource(mix64(master_seed ^ mix64(trial_index ^ 0xD1B54A32D192ED03ULL)),
                   trial_index);
}

std::vector<std::size_t> sample_permutation(std::size_t n, BitSource& src) {
  std::vector<std::size_t> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = src.draw_uniform_index(i);
    std::swap(pi[i - 1], pi[j]);
  }
  return pi;
}

}  // namespace fastjl
