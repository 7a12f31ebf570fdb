#ifndef FASTJL_RANDOMNESS_H_
#define FASTJL_RANDOMNESS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fastjl {

// Counter-based random source with exact consumption accounting.
//
// Discrete draws (signs, indices) are served one bit at a time from a bit
// stream and counted in bits_consumed(). Continuous draws (Gaussians and
// uniform reals) come from a second, independent stream of words and are
// counted per sample; they never touch the bit counter.
class BitSource {
 public:
  BitSource(std::uint64_t master_seed, std::uint64_t stream_id = 0);

  // Unbiased +-1, exactly one bit.
  int draw_sign();
  // Low `k` bits of the stream (k <= 64), exactly k bits.
  std::uint64_t draw_bits(int k);
  // Uniform on {0, ..., m-1}. Lumbroso's fast dice roller: a rejection
  // sampler over single bits that keeps the unused remainder. m == 1 costs
  // nothing; m == 2^k costs exactly k bits.
  std::size_t draw_uniform_index(std::size_t m);
  // Standard normal by the polar method. One call, one sample.
  double draw_gaussian();
  // Uniform on [0, 1) with 53 bits of resolution.
  double draw_uniform01();

  std::uint64_t bits_consumed() const { return bits_consumed_; }
  std::uint64_t gaussian_samples_consumed() const { return gaussians_consumed_; }
  std::uint64_t uniforms_consumed() const { return uniforms_consumed_; }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  int next_bit();
  std::uint64_t next_continuous_word();
  double next_open_interval();  // uniform on (-1, 1)

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t bit_key_;
  std::uint64_t cont_key_;
  std::uint64_t bit_word_counter_ = 0;
  std::uint64_t cont_word_counter_ = 0;
  std::uint64_t bit_buffer_ = 0;
  int bits_left_ = 0;
  bool has_spare_gaussian_ = false;
  double spare_gaussian_ = 0.0;
  std::uint64_t bits_consumed_ = 0;
  std::uint64_t gaussians_consumed_ = 0;
  std::uint64_t uniforms_consumed_ = 0;
};

// Child stream for trial `trial_index`. Depends only on the two arguments,
// which makes per-trial work independent of scheduling.
BitSource derive_stream(std::uint64_t master_seed, std::uint64_t trial_index);

// Fisher-Yates swap shuffle driven by draw_uniform_index. Returns pi with
// output position k taking input index pi[k].
std::vector<std::size_t> sample_permutation(std::size_t n, BitSource& src);

std::uint64_t mix64(std::uint64_t x);

}  // namespace fastjl

#endif  // FASTJL_RANDOMNESS_H_
