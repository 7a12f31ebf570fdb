#ifndef FASTJL_ATTACKS_H_
#define FASTJL_ATTACKS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fastjl/jlp_harness.h"
#include "fastjl/linalg.h"
#include "fastjl/privacy.h"
#include "fastjl/transforms.h"

namespace fastjl {

enum class PairFamily { kBoundedOrthonormal, kHadamard, kIterated };

enum class PairVariant {
  kSymmetricCompletion,  // A = wI + v e_2^T, A~ = A + e_2 v^T
  kSingleColumn,         // A = wI,           A~ = A + v e_2^T
};

// Two matrices differing by a unit-norm rank-one term, both with
// sigma_min >= w - 1.
struct NeighbourPair {
  std::string name;
  PairFamily family = PairFamily::kBoundedOrthonormal;
  double w = 0.0;
  int hadamard_power = 0;  // number of W^T factors in A
  Matrix a;
  Matrix a_tilde;
  std::size_t changed_column = 0;  // the column where A and A~ differ
};

NeighbourPair pair_bounded_orthonormal(std::size_t n, double w,
                                       PairVariant variant = PairVariant::kSymmetricCompletion);
// A = w W^T, A~ = A + v e_2^T with v = (e_1 + e_2) / sqrt(2).
NeighbourPair pair_hadamard(std::size_t n, double w);
// The Hadamard analog of the Fourier pair, used against PartialCirculant.
NeighbourPair pair_circulant(std::size_t n, double w);
// A = w (W^T)^ell, A~ = A + v e_2^T.
NeighbourPair pair_iterated(std::size_t n, double w, int ell);

enum class Guess { kA, kATilde, kAbstain };

struct Probe {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

enum class DistinguisherKind {
  // Exact 2x2 value patterns on the top-left block, restricted to the event
  // that the probed rows of Phi agree on the first column.
  kPattern,
  // Reduces the changed column modulo the lattice that every A-world output
  // lives on; a non-zero residue can only come from A~.
  kResidue,
};

struct AttackTarget {
  TransformKind kind = TransformKind::kSubsampledHadamardCombined;
  std::size_t n = 64;
  std::size_t r = 8;
  TransformParams params;
};

DistinguisherKind default_distinguisher(const AttackTarget& target, const NeighbourPair& pair);
Probe default_probe(const AttackTarget& target, const NeighbourPair& pair,
                    DistinguisherKind kind);

// `output` holds Phi applied to the probe columns of the input, in probe
// column order, all r rows.
Guess distinguish(const Matrix& output, const AttackTarget& target, const NeighbourPair& pair,
                  DistinguisherKind kind, const Probe& probe);

struct AttackReport {
  std::string target;
  std::string mechanism;  // kind actually sampled (differs in the control arm)
  std::string pair;
  std::string distinguisher;
  std::size_t n = 0;
  std::size_t r = 0;
  double w = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t correct_on_a = 0;
  std::uint64_t correct_on_a_tilde = 0;
  std::uint64_t wrong_on_a = 0;
  std::uint64_t wrong_on_a_tilde = 0;
  std::uint64_t event_fires = 0;
  // Correct, non-abstaining guesses over 2 * trials runs.
  double success_rate = 0.0;
  WilsonInterval success_ci;
  // (correct - wrong) / (2 * trials).
  double advantage = 0.0;
  double advantage_lo = 0.0;
  double advantage_hi = 0.0;
  std::optional<double> predicted_rate;
};

// Each trial runs both worlds with independent transforms drawn from
// derive_stream(seed, 2i) and derive_stream(seed, 2i + 1).
AttackReport run_attack(const AttackTarget& target, const NeighbourPair& pair,
                        std::uint64_t trials, std::uint64_t seed, int workers = 1);

// Same distinguisher as run_attack(target, pair), but the outputs come from
// the Gaussian `mechanism` at the given sketch size. Needs pair.w at or above
// the privacy threshold.
AttackReport gaussian_control(const AttackTarget& target, const NeighbourPair& pair,
                              TransformKind mechanism, const DpParams& params,
                              std::uint64_t trials, std::uint64_t seed, int workers = 1);

}  // namespace fastjl

#endif  // FASTJL_ATTACKS_H_
