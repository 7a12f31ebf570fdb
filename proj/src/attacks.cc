#include "fastjl/attacks.h"

#include <cmath>

#include "fastjl/errors.h"
#include "fastjl/parallel.h"
#include "fastjl/randomness.h"

namespace fastjl {

namespace {

void check_pair_args(std::size_t n, double w) {
  if (n < 2) throw RangeError("attack pair: n must be at least 2");
  if (!(w > 0)) throw RangeError("attack pair: w must be positive");
}

// Columns 0 and 1 carry v = (e_1 + e_2)/sqrt(2).
NeighbourPair add_v_to_second_column(NeighbourPair p) {
  p.a_tilde = p.a;
  const double h = 1.0 / std::sqrt(2.0);
  p.a_tilde(0, 1) += h;
  p.a_tilde(1, 1) += h;
  p.changed_column = 1;
  return p;
}

// Values one normalized entry of Phi's probed block can take.
std::vector<double> entry_alphabet(const AttackTarget& t) {
  switch (t.kind) {
    case TransformKind::kSubsampledHadamardCombined: {
      const int b = t.params.combine_b;
      std::vector<double> v;
      for (int j = 0; j <= b; ++j) v.push_back(static_cast<double>(b - 2 * j) / b);
      return v;
    }
    case TransformKind::kAchlioptasSparse:
      return {-1.0, 0.0, 1.0};
    case TransformKind::kPartialCirculant:
    case TransformKind::kAchlioptasDense:
      return {-1.0, 1.0};
    default:
      throw ContractError(std::string("pattern distinguisher has no entry alphabet for ") +
                          std::string(to_string(t.kind)));
  }
}

// Size of one normalized entry of the probed block of Phi D.
double pattern_unit(const AttackTarget& t) {
  const double n = static_cast<double>(t.n);
  const double r = static_cast<double>(t.r);
  switch (t.kind) {
    case TransformKind::kSubsampledHadamardCombined: {
      const double b = t.params.combine_b;
      return std::sqrt(n / (r * b)) * b / std::sqrt(n);
    }
    case TransformKind::kAchlioptasSparse:
      return std::sqrt(3.0) / std::sqrt(r);
    case TransformKind::kPartialCirculant:
    case TransformKind::kAchlioptasDense:
      return 1.0 / std::sqrt(r);
    default:
      throw ContractError("pattern distinguisher: unsupported target");
  }
}

// Scale and number of Hadamard factors of Phi for the residue lattice.
struct LatticeShape {
  double scale;
  int hadamards;
  double row_norm;  // bound on ||row of Phi|| / scale
};

LatticeShape lattice_shape(const AttackTarget& t) {
  const double n = static_cast<double>(t.n);
  const double r = static_cast<double>(t.r);
  switch (t.kind) {
    case TransformKind::kHashSparse:
      return {1.0, 1, std::sqrt(n)};
    case TransformKind::kSubsampledHadamardCombined:
      return {std::sqrt(n / (r * t.params.combine_b)), 1,
              std::sqrt(static_cast<double>(t.params.combine_b))};
    case TransformKind::kPartialCirculant:
    case TransformKind::kAchlioptasDense:
      return {1.0 / std::sqrt(r), 0, std::sqrt(n)};
    case TransformKind::kAilonLibertyIterated:
      return {std::sqrt(n / r), t.params.iterations, 1.0};
    default:
      throw ContractError(std::string("residue distinguisher has no lattice for ") +
                          std::string(to_string(t.kind)));
  }
}

bool is_power_of_four(std::size_t n) {
  return is_power_of_two(n) && (floor_log2(n) % 2 == 0);
}

bool matches(const double x[2][2], const double m[2][2], const Matrix& block, double tol) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double v = m[i][0] * block(0, j) + m[i][1] * block(1, j);
      if (std::abs(x[i][j] - v) > tol) return false;
    }
  return true;
}

// Does some m (first column fixed to 1 when `event_only`) give X = m * block?
bool in_pattern_set(const double x[2][2], const Matrix& block, const std::vector<double>& alpha,
                    bool event_only, double tol) {
  const std::size_t k = alpha.size();
  std::vector<double> first = event_only ? std::vector<double>{1.0} : alpha;
  double m[2][2];
  for (double a00 : first)
    for (double a10 : first)
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
          m[0][0] = a00;
          m[1][0] = a10;
          m[0][1] = alpha[i];
          m[1][1] = alpha[j];
          if (matches(x, m, block, tol)) return true;
        }
  return false;
}

Matrix top_left(const Matrix& a) {
  Matrix b(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) b(i, j) = a(i, j);
  return b;
}

Guess pattern_guess(const Matrix& out, const AttackTarget& target, const NeighbourPair& pair,
                    const Probe& probe) {
  if (probe.rows.size() != 2 || probe.cols.size() != 2 || out.cols() != 2) {
    throw ContractError("pattern distinguisher needs a 2 x 2 probe");
  }
  const double u = pattern_unit(target);
  double x[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) x[i][j] = out(probe.rows[i], j) / u;
  const std::vector<double> alpha = entry_alphabet(target);
  const Matrix ba = top_left(pair.a);
  const Matrix bt = top_left(pair.a_tilde);
  const double tol = 1e-9 * std::max(1.0, pair.w);
  const bool a_event = in_pattern_set(x, ba, alpha, true, tol);
  const bool t_event = in_pattern_set(x, bt, alpha, true, tol);
  if (a_event && !in_pattern_set(x, bt, alpha, false, tol)) return Guess::kA;
  if (t_event && !in_pattern_set(x, ba, alpha, false, tol)) return Guess::kATilde;
  return Guess::kAbstain;
}

bool near_integer(double q) { return std::abs(q - std::round(q)) <= 1e-9; }

// x = a lambda + b mu for integers a and |b| <= k.
bool on_shifted_lattice(double x, double lambda, double mu, long k) {
  for (long b = -k; b <= k; ++b)
    if (near_integer((x - static_cast<double>(b) * mu) / lambda)) return true;
  return false;
}

// Under A every probed entry lies on lambda Z. Under A~ the entries lie on
// lambda Z + mu Z, mu being the grid of Phi v. Guess A~ when some entry leaves
// lambda Z but all stay on lambda Z + mu Z; both sets are countable, so a
// continuous mechanism never fires.
Guess residue_guess(const Matrix& out, const AttackTarget& target, const NeighbourPair& pair,
                    const Probe& probe) {
  if (!is_power_of_four(target.n)) {
    throw ContractError("residue distinguisher needs n to be a power of four");
  }
  const LatticeShape shape = lattice_shape(target);
  const double n = static_cast<double>(target.n);
  const int factors = shape.hadamards + (pair.hadamard_power % 2);
  const double lambda = shape.scale * pair.w * std::pow(n, -0.5 * factors);
  const double grid = std::pow(n, -0.5 * shape.hadamards);
  const double mu = shape.scale * grid / std::sqrt(2.0);
  const long k = static_cast<long>(std::ceil(shape.row_norm * std::sqrt(2.0) / grid)) + 1;
  bool off_a = false;
  for (std::size_t c = 0; c < out.cols(); ++c) {
    for (std::size_t row : probe.rows) {
      const double x = out(row, c);
      if (near_integer(x / lambda)) continue;
      if (!on_shifted_lattice(x, lambda, mu, k)) return Guess::kAbstain;
      off_a = true;
    }
  }
  return off_a ? Guess::kATilde : Guess::kAbstain;
}

Matrix probe_columns(const Transform& phi, const Matrix& a, const std::vector<std::size_t>& cols) {
  Matrix out(phi.r(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) out.set_column(j, apply_transform(phi, a.column(cols[j])));
  return out;
}

std::optional<double> predicted_rate(const AttackTarget& t, const NeighbourPair& pair) {
  if (t.kind == TransformKind::kSubsampledHadamardCombined &&
      pair.family == PairFamily::kBoundedOrthonormal) {
    return std::ldexp(1.0, -t.params.combine_b - 3);
  }
  if (t.kind == TransformKind::kHashSparse && pair.family == PairFamily::kHadamard) return 0.25;
  if (t.kind == TransformKind::kAilonLibertyIterated && pair.family == PairFamily::kIterated) {
    return static_cast<double>(t.r) / (4.0 * static_cast<double>(t.n));
  }
  return std::nullopt;
}

AttackReport run_worlds(const AttackTarget& target, const NeighbourPair& pair,
                        TransformKind mechanism, std::size_t mechanism_r,
                        const TransformParams& mechanism_params, std::uint64_t trials,
                        std::uint64_t seed, int workers) {
  if (trials == 0) throw RangeError("attack: trials must be positive");
  if (pair.a.rows() != target.n) throw DimensionError("attack: pair size differs from n");
  const DistinguisherKind dk = default_distinguisher(target, pair);
  const Probe probe = default_probe(target, pair, dk);
  std::vector<Guess> on_a(trials), on_t(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    BitSource sa = derive_stream(seed, 2 * i);
    BitSource st = derive_stream(seed, 2 * i + 1);
    const Transform pa = build(mechanism, target.n, mechanism_r, sa, mechanism_params);
    const Transform pt = build(mechanism, target.n, mechanism_r, st, mechanism_params);
    on_a[i] = distinguish(probe_columns(pa, pair.a, probe.cols), target, pair, dk, probe);
    on_t[i] = distinguish(probe_columns(pt, pair.a_tilde, probe.cols), target, pair, dk, probe);
  });

  AttackReport rep;
  rep.target = std::string(to_string(target.kind));
  rep.mechanism = std::string(to_string(mechanism));
  rep.pair = pair.name;
  rep.distinguisher = dk == DistinguisherKind::kPattern ? "pattern" : "residue";
  rep.n = target.n;
  rep.r = mechanism_r;
  rep.w = pair.w;
  rep.trials = trials;
  rep.seed = seed;
  for (std::size_t i = 0; i < trials; ++i) {
    rep.correct_on_a += on_a[i] == Guess::kA;
    rep.wrong_on_a += on_a[i] == Guess::kATilde;
    rep.correct_on_a_tilde += on_t[i] == Guess::kATilde;
    rep.wrong_on_a_tilde += on_t[i] == Guess::kA;
  }
  const std::uint64_t runs = 2 * trials;
  const std::uint64_t correct = rep.correct_on_a + rep.correct_on_a_tilde;
  const std::uint64_t wrong = rep.wrong_on_a + rep.wrong_on_a_tilde;
  rep.event_fires = correct + wrong;
  rep.success_rate = static_cast<double>(correct) / static_cast<double>(runs);
  rep.success_ci = wilson_interval(correct, runs);
  const WilsonInterval wrong_ci = wilson_interval(wrong, runs);
  rep.advantage = static_cast<double>(correct) / static_cast<double>(runs) -
                  static_cast<double>(wrong) / static_cast<double>(runs);
  rep.advantage_lo = rep.success_ci.lo - wrong_ci.hi;
  rep.advantage_hi = rep.success_ci.hi - wrong_ci.lo;
  rep.predicted_rate = predicted_rate(target, pair);
  return rep;
}

}  // namespace

NeighbourPair pair_bounded_orthonormal(std::size_t n, double w, PairVariant variant) {
  check_pair_args(n, w);
  NeighbourPair p;
  p.family = PairFamily::kBoundedOrthonormal;
  p.w = w;
  p.a = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) p.a(i, i) = w;
  if (variant == PairVariant::kSymmetricCompletion) {
    p.name = "bounded-orthonormal";
    p.a(0, 1) = 1.0;
    p.a_tilde = p.a;
    p.a_tilde(1, 0) = 1.0;
    p.changed_column = 0;
  } else {
    p.name = "bounded-orthonormal-single-column";
    p.a_tilde = p.a;
    p.a_tilde(0, 1) = 1.0;
    p.changed_column = 1;
  }
  return p;
}

NeighbourPair pair_hadamard(std::size_t n, double w) {
  return pair_iterated(n, w, 1);
}

NeighbourPair pair_circulant(std::size_t n, double w) {
  NeighbourPair p = pair_hadamard(n, w);
  p.name = "circulant-hadamard-analog";
  return p;
}

NeighbourPair pair_iterated(std::size_t n, double w, int ell) {
  check_pair_args(n, w);
  if (ell < 1) throw RangeError("pair_iterated: ell must be at least 1");
  if (!is_power_of_two(n)) throw ContractError("attack pair: n must be a power of two");
  NeighbourPair p;
  p.family = ell == 1 ? PairFamily::kHadamard : PairFamily::kIterated;
  p.name = ell == 1 ? "hadamard" : "iterated-" + std::to_string(ell);
  p.w = w;
  p.hadamard_power = ell;
  const Matrix wt = hadamard(n).transpose();
  Matrix pow = wt;
  for (int i = 1; i < ell; ++i) pow = multiply(pow, wt);
  for (double& v : pow.data()) v *= w;
  p.a = pow;
  return add_v_to_second_column(std::move(p));
}

DistinguisherKind default_distinguisher(const AttackTarget&, const NeighbourPair& pair) {
  return pair.family == PairFamily::kBoundedOrthonormal ? DistinguisherKind::kPattern
                                                        : DistinguisherKind::kResidue;
}

Probe default_probe(const AttackTarget& target, const NeighbourPair& pair,
                    DistinguisherKind kind) {
  Probe p;
  if (kind == DistinguisherKind::kPattern) {
    p.rows = {0, 1};
    p.cols = {0, 1};
  } else {
    for (std::size_t i = 0; i < target.r; ++i) p.rows.push_back(i);
    p.cols = {pair.changed_column};
  }
  return p;
}

Guess distinguish(const Matrix& output, const AttackTarget& target, const NeighbourPair& pair,
                  DistinguisherKind kind, const Probe& probe) {
  for (std::size_t row : probe.rows)
    if (row >= output.rows()) throw DimensionError("distinguish: probe row out of range");
  return kind == DistinguisherKind::kPattern ? pattern_guess(output, target, pair, probe)
                                             : residue_guess(output, target, pair, probe);
}

AttackReport run_attack(const AttackTarget& target, const NeighbourPair& pair,
                        std::uint64_t trials, std::uint64_t seed, int workers) {
  return run_worlds(target, pair, target.kind, target.r, target.params, trials, seed, workers);
}

AttackReport gaussian_control(const AttackTarget& target, const NeighbourPair& pair,
                              TransformKind mechanism, const DpParams& params,
                              std::uint64_t trials, std::uint64_t seed, int workers) {
  validate(params);
  if (mechanism != TransformKind::kNewGaussian && mechanism != TransformKind::kDenseGaussian) {
    throw ContractError("gaussian_control: mechanism must be Gaussian-entried");
  }
  const double t = w_threshold(params.alpha, params.beta, params.r);
  if (pair.w < t) {
    throw PrivacyPreconditionError("gaussian_control: pair weight below the privacy threshold",
                                   pair.w, t);
  }
  TransformParams tp = target.params;
  tp.allow_large_r = true;
  AttackTarget probe_target = target;
  if (default_distinguisher(target, pair) == DistinguisherKind::kResidue) {
    probe_target.r = std::min(target.r, params.r);
  }
  AttackReport rep = run_worlds(probe_target, pair, mechanism, params.r, tp, trials, seed, workers);
  rep.target = std::string(to_string(target.kind));
  rep.predicted_rate = 0.0;
  return rep;
}

}  // namespace fastjl
