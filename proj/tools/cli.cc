#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "acceptance.h"
#include "fastjl/attacks.h"
#include "fastjl/bench.h"
#include "fastjl/errors.h"
#include "fastjl/jlp_harness.h"
#include "fastjl/privacy.h"
#include "fastjl/reports.h"
#include "fastjl/rip.h"

namespace fastjl::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;
  bool deterministic = false;
};

struct Context {
  const std::vector<std::string>& args;
  std::ostream& out;
  std::ostream& err;
  Common common;
};

void add_common(CLI::App* app, Context& ctx, bool with_out = true) {
  app->add_option("--seed", ctx.common.seed, "master seed (default: $FASTJL_SEED, else 0)");
  app->add_option("--workers", ctx.common.workers, "worker threads")->check(CLI::PositiveNumber);
  app->add_flag("--deterministic", ctx.common.deterministic, "omit the report timestamp");
  if (with_out) app->add_option("--out", ctx.common.out, "report path (default: stdout)");
}

void resolve_seed(Context& ctx, const CLI::Option* seed_opt) {
  if (seed_opt && seed_opt->count() > 0) return;
  if (const char* env = std::getenv("FASTJL_SEED")) {
    try {
      std::size_t used = 0;
      ctx.common.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("FASTJL_SEED is not an unsigned integer: ") + env);
    }
  }
}

void add_transform_options(CLI::App* app, TransformParams& p) {
  app->add_option("--sparse-eps", p.sparse_epsilon, "NewSparseG epsilon");
  app->add_option("--sparse-delta", p.sparse_delta, "NewSparseG delta");
  app->add_option("--fjlt-p", p.fjlt_p, "FJLT keep probability");
  app->add_option("--combine-b", p.combine_b, "SubsampledHadamardCombined bucket size B");
  app->add_option("--iterations", p.iterations, "AilonLibertyIterated rounds");
  app->add_flag("--allow-large-r", p.allow_large_r, "lift the r <= floor(sqrt n)/2 guard");
}

TransformKind kind_arg(const std::string& name) {
  const auto k = parse_transform_kind(name);
  if (!k) throw UsageError("unknown transform kind '" + name + "'");
  return *k;
}

VectorFamily family_arg(const std::string& name) {
  const auto f = parse_vector_family(name);
  if (!f) throw UsageError("unknown vector family '" + name + "'");
  return *f;
}

// The block kinds refuse r > floor(sqrt n)/2 unless told otherwise. The CLI
// tells them otherwise and says so.
void override_guard(TransformKind kind, std::size_t n, std::size_t r, TransformParams& p,
                    std::ostream& err) {
  if (!is_block_kind(kind) || p.allow_large_r || n == 0) return;
  const auto root = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  if (2 * r > root) {
    err << "warning: r = " << r << " exceeds floor(sqrt(" << n
        << "))/2; running outside the sparse regime (--allow-large-r implied)\n";
    p.allow_large_r = true;
  }
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json envelope(const Context& ctx, const std::string& command, Json report) {
  Json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = ctx.common.seed;
  j["argv"] = ctx.args;
  if (!ctx.common.deterministic) j["timestamp"] = timestamp();
  j["report"] = std::move(report);
  return j;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ResourceError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw ResourceError("write to '" + path + "' failed");
}

void emit(const Context& ctx, const std::string& command, Json report,
          const std::string& path) {
  write_text(path, envelope(ctx, command, std::move(report)).dump(2) + "\n", ctx.out);
}

void write_csv(const Matrix& m, const Context& ctx) {
  std::ostringstream os;
  write_matrix_csv(m, os);
  write_text(ctx.common.out, os.str(), ctx.out);
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ResourceError(where + ": '" + s + "' is not a number");
  }
}

std::size_t parse_index(const std::string& s, const std::string& where) {
  const double v = parse_double(s, where);
  if (v < 0 || v != std::floor(v)) throw ResourceError(where + ": '" + s + "' is not an index");
  return static_cast<std::size_t>(v);
}

std::vector<std::size_t> parse_vertex_set(const std::string& s) {
  std::vector<std::size_t> out;
  for (const std::string& part : split(s, ',')) {
    const std::string t = trim(part);
    if (t.empty()) continue;
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("vertex set entry '" + t + "' is not an index");
    }
  }
  return out;
}

Graph read_graph(const std::string& path, std::size_t vertices) {
  std::ifstream f(path);
  if (!f) throw ResourceError("cannot open graph file '" + path + "'");
  Graph g;
  std::string line;
  std::size_t lineno = 0, max_index = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto parts = split(line, ',');
    const std::string where = path + ":" + std::to_string(lineno);
    if (parts.size() < 2 || parts.size() > 3) throw ResourceError(where + ": expected i,j[,weight]");
    Edge e;
    e.u = parse_index(parts[0], where);
    e.v = parse_index(parts[1], where);
    if (parts.size() == 3) e.weight = parse_double(parts[2], where);
    max_index = std::max({max_index, e.u, e.v});
    g.edges.push_back(e);
  }
  g.vertices = vertices ? vertices : (g.edges.empty() ? 0 : max_index + 1);
  return g;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string kind;
  std::size_t n = 0;
  std::size_t r = 0;
  std::string realize;
  TransformParams params;
};

int cmd_gen(Context& ctx, GenArgs& a) {
  const TransformKind kind = kind_arg(a.kind);
  override_guard(kind, a.n, a.r, a.params, ctx.err);
  BitSource src(ctx.common.seed);
  const Transform t = build(kind, a.n, a.r, src, a.params);
  Json rep;
  rep["kind"] = std::string(to_string(kind));
  rep["n"] = t.n();
  rep["r"] = t.r();
  rep["scale"] = t.scale();
  rep["bits_used"] = t.bits_used();
  rep["permutation_bits"] = t.permutation_bits();
  rep["gaussians_used"] = t.gaussians_used();
  if (kind == TransformKind::kNewSparseG) {
    rep["sparse_g"] = {{"a", t.sparse_params().a},
                       {"b", t.sparse_params().b},
                       {"fallback", t.sparse_params().fallback}};
  }
  if (!a.realize.empty()) {
    write_matrix_csv(realize_dense(t), a.realize);
    rep["realized"] = a.realize;
  }
  emit(ctx, "gen", rep, ctx.common.out);
  return kOk;
}

// ---------------------------------------------------------------- jlp

struct JlpArgs {
  std::string check = "jlp";
  std::string kind = "new-rademacher";
  std::size_t n = 1024;
  std::size_t r = 64;
  double eps = 0.5;
  std::string family = "random-unit";
  std::uint64_t trials = 1000;
  double delta = 0.05;
  double theta = 0.1;
  std::string dist = "gaussian";
  TransformParams params;
};

int cmd_jlp(Context& ctx, JlpArgs& a) {
  const VectorFamily fam = family_arg(a.family);
  const int w = ctx.common.workers;
  const std::uint64_t seed = ctx.common.seed;
  Json rep;
  if (a.check == "jlp") {
    const TransformKind kind = kind_arg(a.kind);
    override_guard(kind, a.n, a.r, a.params, ctx.err);
    rep = to_json(jlp_failure_rate(kind, a.n, a.r, a.eps, a.trials, fam, seed, a.params, w));
  } else if (a.check == "infinity-norm") {
    rep = to_json(infinity_norm_check(a.n, a.delta, a.trials, fam, seed, w));
  } else if (a.check == "block-norm") {
    rep = to_json(block_norm_check(a.n, a.r, a.eps, a.trials, seed, a.delta, fam, w));
  } else if (a.check == "block-nonzero") {
    rep = to_json(block_nonzero_check(a.n, a.r, a.theta, a.trials, seed, fam, w));
  } else if (a.check == "hanson-wright") {
    QuadraticDistribution d;
    if (a.dist == "gaussian") {
      d = QuadraticDistribution::kGaussian;
    } else if (a.dist == "rademacher") {
      d = QuadraticDistribution::kRademacher;
    } else {
      throw UsageError("--dist must be gaussian or rademacher");
    }
    rep = to_json(hanson_wright_check(Matrix::Identity(a.n), a.trials, d, seed, w));
  } else {
    throw UsageError("unknown --check '" + a.check + "'");
  }
  emit(ctx, "jlp", rep, ctx.common.out);
  return kOk;
}

// ---------------------------------------------------------------- rip

struct RipArgs {
  std::string kind = "new-rademacher";
  std::size_t n = 64;
  std::size_t r = 32;
  std::size_t k = 2;
  std::uint64_t seeds = 20;
  TransformParams params;
};

int cmd_rip(Context& ctx, RipArgs& a) {
  const TransformKind kind = kind_arg(a.kind);
  override_guard(kind, a.n, a.r, a.params, ctx.err);
  const RipSurvey s =
      rip_survey(kind, a.n, a.r, a.k, a.seeds, ctx.common.seed, a.params, ctx.common.workers);
  emit(ctx, "rip", to_json(s), ctx.common.out);
  return kOk;
}

// ---------------------------------------------------------------- dp

struct DpArgs {
  double alpha = 1.0;
  double beta = 0.1;
  std::size_t r = 64;
  double w = 0.0;
  std::string kind = "new-gaussian";
  bool non_private = false;
  TransformParams params;
  // publish
  std::string matrix;
  std::string mode = "first";
  bool lift = false;
  std::string report;
  // cut
  std::string graph;
  std::size_t vertices = 0;
  std::vector<std::string> sets;
  bool with_exact = false;
  // stream
  std::string script;
  std::string sketch = "mm";
  std::size_t rows = 0;
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  // compose
  double alpha0 = 0.1;
  double beta0 = 0.0;
  int ell = 1;
  double beta_prime = 0.01;
};

DpParams dp_params(const DpArgs& a) { return DpParams{a.alpha, a.beta, a.r, a.w}; }

Json sketch_meta(const FirstMomentSketch& s) {
  return {{"kind", std::string(to_string(s.kind))},
          {"r", s.r},
          {"embedded_dim", s.embedded_dim},
          {"lifted", s.lifted},
          {"non_private", s.non_private},
          {"w", s.w},
          {"sigma_min", s.sigma_min},
          {"threshold", to_json(s.threshold)},
          {"delta_structural", s.structural_delta},
          {"rows", s.data.rows()},
          {"cols", s.data.cols()}};
}

int cmd_dp_publish(Context& ctx, DpArgs& a) {
  if (a.mode != "first" && a.mode != "second") throw UsageError("--mode must be first or second");
  const Matrix m = read_matrix_csv(a.matrix);
  PublishOptions opt;
  opt.kind = kind_arg(a.kind);
  opt.lift = a.lift;
  opt.non_private = a.non_private;
  opt.transform = a.params;
  const std::size_t height =
      a.lift ? lifted_height(m.rows(), m.cols()) : next_power_of_two(m.cols());
  override_guard(opt.kind, height, a.r, opt.transform, ctx.err);
  const DpParams p = dp_params(a);
  Json rep;
  if (a.mode == "first") {
    const FirstMomentSketch s = publish_first_moment(m, p, ctx.common.seed, opt);
    write_csv(s.data, ctx);
    rep = sketch_meta(s);
  } else {
    const SecondMomentSketch s = publish_second_moment(m, p, ctx.common.seed, opt);
    write_csv(s.data, ctx);
    rep = {{"kind", std::string(to_string(s.kind))},
           {"r", s.r},
           {"embedded_dim", s.embedded_dim},
           {"lifted", s.lifted},
           {"w", s.w},
           {"sigma_min", s.sigma_min},
           {"threshold", to_json(s.threshold)},
           {"rows", s.data.rows()},
           {"cols", s.data.cols()}};
  }
  rep["mode"] = a.mode;
  rep["matrix_out"] = ctx.common.out;
  if (!a.report.empty()) emit(ctx, "dp publish", rep, a.report);
  return kOk;
}

int cmd_dp_cut(Context& ctx, DpArgs& a) {
  const Graph g = read_graph(a.graph, a.vertices);
  PublishOptions opt;
  opt.kind = kind_arg(a.kind);
  opt.non_private = a.non_private;
  opt.transform = a.params;
  override_guard(opt.kind, next_power_of_two(g.vertices * (g.vertices - 1) / 2 + 1), a.r,
                 opt.transform, ctx.err);
  const CutSketch c = publish_cut_sketch(g, dp_params(a), ctx.common.seed, opt);
  Json rep = sketch_meta(c.sketch);
  rep["vertices"] = c.vertices;
  rep["lift"] = c.lift;
  rep["spectral_floor"] = c.spectral_floor;
  Json queries = Json::array();
  for (const std::string& s : a.sets) {
    const std::vector<std::size_t> side = parse_vertex_set(s);
    Json q = {{"set", side}, {"estimate", cut_query(c, side)}};
    if (a.with_exact) q["exact"] = exact_cut(g, side);
    queries.push_back(q);
  }
  rep["queries"] = queries;
  emit(ctx, "dp cut", rep, ctx.common.out);
  return kOk;
}

int cmd_dp_stream(Context& ctx, DpArgs& a) {
  if (a.sketch != "mm" && a.sketch != "lr") throw UsageError("--sketch must be mm or lr");
  if (a.rows == 0 || a.m1 == 0 || (a.sketch == "mm" && a.m2 == 0)) {
    throw UsageError("--rows and --m1 (plus --m2 for mm) are required");
  }
  std::ifstream f(a.script);
  if (!f) throw ResourceError("cannot open script '" + a.script + "'");
  const TransformKind kind = kind_arg(a.kind);
  const StreamMode mode = a.non_private ? StreamMode::kNonPrivate : StreamMode::kPrivate;
  const DpParams p = dp_params(a);
  TransformParams tp = a.params;
  const std::size_t top = a.sketch == "mm" ? std::max(a.m1, a.m2) : a.m1;
  override_guard(kind, lifted_height(top, a.rows), a.r, tp, ctx.err);

  std::optional<MatrixProductSketch> mm;
  std::optional<LinearRegressionSketch> lr;
  if (a.sketch == "mm") {
    mm.emplace(p, kind, a.rows, a.m1, a.m2, ctx.common.seed, mode, tp);
  } else {
    lr.emplace(p, kind, a.rows, a.m1, ctx.common.seed, mode, tp);
  }
  Json queries = Json::array();
  std::string line;
  std::size_t lineno = 0, updates = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto parts = split(line, ',');
    const std::string where = a.script + ":" + std::to_string(lineno);
    const std::string op = trim(parts[0]);
    if (op == "query") {
      queries.push_back(mm ? matrix_json(mm->query()) : Json(lr->query()));
      continue;
    }
    std::size_t first_value = 2;
    std::size_t col = 0;
    if (op == "A" || op == "B") {
      if (parts.size() < 2) throw ResourceError(where + ": missing column index");
      col = parse_index(parts[1], where);
    } else if (op == "b" && lr) {
      first_value = 1;
    } else {
      throw ResourceError(where + ": unknown operation '" + op + "'");
    }
    Vector values;
    for (std::size_t i = first_value; i < parts.size(); ++i)
      values.push_back(parse_double(parts[i], where));
    if (mm) {
      mm->update(op == "A" ? MatrixProductSketch::Side::kA : MatrixProductSketch::Side::kB, col,
                 values);
    } else if (op == "A") {
      lr->update_column(col, values);
    } else if (op == "b") {
      lr->update_target(values);
    } else {
      throw ResourceError(where + ": the regression sketch takes A and b lines only");
    }
    ++updates;
  }
  Json rep = {{"sketch", a.sketch},
              {"kind", std::string(to_string(kind))},
              {"non_private", a.non_private},
              {"r", a.r},
              {"w", a.w},
              {"threshold", to_json(w_threshold_breakdown(a.alpha, a.beta, a.r))},
              {"updates", updates},
              {"queries", queries}};
  emit(ctx, "dp stream", rep, ctx.common.out);
  return kOk;
}

int cmd_dp_threshold(Context& ctx, DpArgs& a) {
  Json rep = to_json(w_threshold_breakdown(a.alpha, a.beta, a.r));
  rep["alpha"] = a.alpha;
  rep["beta"] = a.beta;
  rep["r"] = a.r;
  emit(ctx, "dp threshold", rep, ctx.common.out);
  return kOk;
}

int cmd_dp_compose(Context& ctx, DpArgs& a) {
  const ComposedPrivacy c = compose_privacy(a.alpha0, a.beta0, a.ell, a.beta_prime);
  emit(ctx, "dp compose",
       {{"alpha0", a.alpha0}, {"beta0", a.beta0}, {"ell", a.ell}, {"beta_prime", a.beta_prime},
        {"alpha", c.alpha}, {"beta", c.beta}},
       ctx.common.out);
  return kOk;
}

// ---------------------------------------------------------------- attack

struct AttackArgs {
  std::string target = "subsampled-hadamard-combined";
  std::size_t n = 64;
  std::size_t r = 8;
  double w = 10.0;
  CLI::Option* w_opt = nullptr;
  std::uint64_t trials = 10000;
  std::string pair = "auto";
  std::string control;
  std::string mechanism = "new-gaussian";
  double alpha = 1.0;
  double beta = 0.1;
  std::size_t sketch_r = 0;
  TransformParams params;
};

NeighbourPair make_pair(const std::string& name, TransformKind target, std::size_t n, double w,
                        int iterations) {
  std::string chosen = name;
  if (chosen == "auto") {
    switch (target) {
      case TransformKind::kHashSparse:
        chosen = "hadamard";
        break;
      case TransformKind::kPartialCirculant:
        chosen = "circulant";
        break;
      case TransformKind::kAilonLibertyIterated:
        chosen = "iterated";
        break;
      default:
        chosen = "bounded-orthonormal";
    }
  }
  if (chosen == "bounded-orthonormal") return pair_bounded_orthonormal(n, w);
  if (chosen == "bounded-orthonormal-single-column") {
    return pair_bounded_orthonormal(n, w, PairVariant::kSingleColumn);
  }
  if (chosen == "hadamard") return pair_hadamard(n, w);
  if (chosen == "circulant") return pair_circulant(n, w);
  if (chosen == "iterated") return pair_iterated(n, w, iterations);
  throw UsageError("unknown --pair '" + name + "'");
}

int cmd_attack(Context& ctx, AttackArgs& a) {
  const TransformKind target = kind_arg(a.target);
  TransformParams tp = a.params;
  tp.allow_large_r = true;
  const AttackTarget t{target, a.n, a.r, tp};
  AttackReport rep;
  if (a.control.empty()) {
    const NeighbourPair pair = make_pair(a.pair, target, a.n, a.w, tp.iterations);
    rep = run_attack(t, pair, a.trials, ctx.common.seed, ctx.common.workers);
  } else {
    if (a.control != "gaussian") throw UsageError("--control takes 'gaussian'");
    const TransformKind mech = kind_arg(a.mechanism);
    DpParams p{a.alpha, a.beta, a.sketch_r ? a.sketch_r : a.r, 0.0};
    const double w = a.w_opt->count() ? a.w : w_threshold(p.alpha, p.beta, p.r);
    const NeighbourPair pair = make_pair(a.pair, target, a.n, w, tp.iterations);
    rep = gaussian_control(t, pair, mech, p, a.trials, ctx.common.seed, ctx.common.workers);
  }
  emit(ctx, a.control.empty() ? "attack" : "attack --control gaussian", to_json(rep),
       ctx.common.out);
  return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string kind = "new-rademacher";
  std::string range = "4096:65536";
  std::size_t r = 64;
  int reps = 30;
  int warmups = 5;
  TransformParams params;
};

int cmd_bench(Context& ctx, BenchArgs& a) {
  const TransformKind kind = kind_arg(a.kind);
  const auto parts = split(a.range, ':');
  if (parts.size() != 2) throw UsageError("--n-range takes lo:hi");
  std::size_t lo = 0, hi = 0;
  try {
    lo = std::stoull(parts[0]);
    hi = std::stoull(parts[1]);
  } catch (const std::exception&) {
    throw UsageError("--n-range takes lo:hi with unsigned integers");
  }
  const std::vector<std::size_t> sizes = power_of_two_range(lo, hi);
  override_guard(kind, lo, a.r, a.params, ctx.err);
  const BenchReport b = run_bench(kind, sizes, a.r, ctx.common.seed, a.reps, a.warmups, a.params);
  emit(ctx, "bench", to_json(b), ctx.common.out);
  return kOk;
}

// ---------------------------------------------------------------- selftest

struct Check {
  const char* name;
  bool ok;
};

std::vector<Check> trivial_checks(std::uint64_t seed) {
  std::vector<Check> c;
  BitSource src(seed);
  {
    Vector x(64);
    for (double& v : x) v = src.draw_gaussian();
    Vector y = fwht(fwht(x));
    double e = 0;
    for (std::size_t i = 0; i < x.size(); ++i) e = std::max(e, std::abs(y[i] - x[i]));
    c.push_back({"linalg: fwht is an involution", e < 1e-12});
    c.push_back({"linalg: next_power_of_two(5) = 8", next_power_of_two(5) == 8});
    const Matrix h = hadamard(2);
    c.push_back({"linalg: 2x2 hadamard", std::abs(h(1, 1) + 1 / std::sqrt(2.0)) < 1e-15});
  }
  {
    BitSource a(seed, 3), b(seed, 3);
    bool same = true;
    for (int i = 0; i < 100; ++i) same = same && a.draw_bits(13) == b.draw_bits(13);
    c.push_back({"randomness: equal seeds give equal streams", same});
    BitSource s(seed);
    for (int i = 0; i < 10; ++i) s.draw_sign();
    c.push_back({"randomness: a sign costs one bit", s.bits_consumed() == 10});
    c.push_back({"randomness: index from {0} costs nothing",
                 s.draw_uniform_index(1) == 0 && s.bits_consumed() == 10});
  }
  {
    TransformParams p;
    p.allow_large_r = true;
    bool shapes = true;
    for (TransformKind k : all_transform_kinds()) {
      BitSource s(seed, 11);
      const Transform t = build(k, 16, 4, s, p);
      const Matrix m = realize_dense(t);
      shapes = shapes && m.rows() == 4 && m.cols() == 16;
    }
    c.push_back({"transforms: every kind realizes as 4 x 16", shapes});
    bool threw = false;
    try {
      BitSource s(seed);
      build(TransformKind::kNewRademacher, 12, 4, s);
    } catch (const ContractError&) {
      threw = true;
    }
    c.push_back({"transforms: non power of two n is refused", threw});
  }
  {
    TransformParams p;
    p.allow_large_r = true;
    const JlpReport a = jlp_failure_rate(TransformKind::kNewRademacher, 64, 8, 0.5, 200,
                                         VectorFamily::kBasis, seed, p);
    const JlpReport b = jlp_failure_rate(TransformKind::kNewRademacher, 64, 8, 0.5, 200,
                                         VectorFamily::kBasis, seed, p, 2);
    c.push_back({"jlp_harness: report independent of workers", a == b});
    c.push_back({"jlp_harness: wilson(0, 0) = [0, 1]",
                 wilson_interval(0, 0).lo == 0.0 && wilson_interval(0, 0).hi == 1.0});
  }
  {
    c.push_back({"rip: identity has delta_2 = 0", rip_constant(Matrix::Identity(6), 2).delta < 1e-15});
    c.push_back({"rip: C(64, 2) = 2016", binomial_coefficient(64, 2) == 2016.0});
  }
  {
    const ComposedPrivacy z = compose_privacy(0.1, 0.01, 0, 0.05);
    c.push_back({"privacy: composing nothing gives (0, beta')", z.alpha == 0.0 && z.beta == 0.05});
    const Matrix lifted = lift_matrix(Matrix(2, 2), 5.0);
    c.push_back({"privacy: lifting zero gives sigma_min = w",
                 std::abs(spectral_extremes(lifted).sigma_min - 5.0) < 1e-12});
    Graph tri{3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}};
    const std::size_t one[] = {1};
    c.push_back({"privacy: triangle cut({1}) = 2", exact_cut(tri, one) == 2.0});
    c.push_back({"privacy: empty cut = 0", exact_cut(tri, std::span<const std::size_t>()) == 0.0});
    DpParams dp;
    dp.r = 8;
    MatrixProductSketch mm(dp, TransformKind::kDenseGaussian, 4, 2, 2, seed,
                           StreamMode::kNonPrivate);
    c.push_back({"privacy: product sketch starts at zero", max_abs_entry(mm.query()) == 0.0});
  }
  {
    const NeighbourPair p = pair_bounded_orthonormal(8, 3.0);
    c.push_back({"attacks: neighbour difference has norm 1",
                 std::abs(frobenius_norm(subtract(p.a_tilde, p.a)) - 1.0) < 1e-12});
    DpParams dp;
    dp.r = 8;
    TransformParams tp;
    tp.allow_large_r = true;
    const NeighbourPair hp = pair_hadamard(64, w_threshold(1.0, 0.1, 8));
    const AttackReport r = gaussian_control({TransformKind::kHashSparse, 64, 8, tp}, hp,
                                            TransformKind::kDenseGaussian, dp, 200, seed);
    c.push_back({"attacks: gaussian outputs never fire", r.event_fires == 0});
  }
  return c;
}

struct SelftestArgs {
  std::string acceptance;
};

int cmd_selftest(Context& ctx, SelftestArgs& a) {
  bool all_ok = true;
  Json rep;
  if (a.acceptance.empty()) {
    Json checks = Json::array();
    for (const Check& c : trivial_checks(ctx.common.seed)) {
      ctx.err << (c.ok ? "ok   " : "FAIL ") << c.name << "\n";
      checks.push_back({{"name", c.name}, {"ok", c.ok}});
      all_ok = all_ok && c.ok;
    }
    rep["checks"] = checks;
  } else {
    std::vector<int> ids;
    if (a.acceptance == "all") {
      for (int i = 1; i <= acceptance::kCriteria; ++i) ids.push_back(i);
    } else {
      try {
        ids.push_back(std::stoi(a.acceptance));
      } catch (const std::exception&) {
        throw UsageError("--acceptance takes 1..12 or all");
      }
      if (ids[0] < 1 || ids[0] > acceptance::kCriteria) {
        throw UsageError("--acceptance takes 1..12 or all");
      }
    }
    Json results = Json::array();
    for (int id : ids) {
      const acceptance::Outcome o = acceptance::run(id, ctx.common.workers);
      ctx.err << acceptance::format_line(o) << "\n";
      results.push_back({{"id", o.id},
                         {"name", o.name},
                         {"passed", o.passed},
                         {"detail", o.detail},
                         {"seconds", o.seconds},
                         {"data", o.data}});
      all_ok = all_ok && o.passed;
    }
    rep["acceptance"] = results;
  }
  rep["passed"] = all_ok;
  emit(ctx, "selftest", rep, ctx.common.out);
  return all_ok ? kOk : kPrecondition;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomness-efficient fast Johnson-Lindenstrauss sketches", "fastjl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Context ctx{args, out, err, {}};

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "draw a transform, optionally realize it as CSV");
  add_common(gen_cmd, ctx);
  gen_cmd->add_option("--kind", gen.kind, "transform kind")->required();
  gen_cmd->add_option("--n", gen.n, "input dimension")->required();
  gen_cmd->add_option("--r", gen.r, "output dimension")->required();
  gen_cmd->add_option("--realize", gen.realize, "write the dense r x n matrix to this CSV");
  add_transform_options(gen_cmd, gen.params);

  JlpArgs jlp;
  auto* jlp_cmd = app.add_subcommand("jlp", "Monte-Carlo JLP failure rate and lemma checks");
  add_common(jlp_cmd, ctx);
  jlp_cmd->add_option("--check", jlp.check,
                      "jlp | infinity-norm | block-norm | block-nonzero | hanson-wright");
  jlp_cmd->add_option("--kind", jlp.kind, "transform kind");
  jlp_cmd->add_option("--n", jlp.n, "input dimension");
  jlp_cmd->add_option("--r", jlp.r, "output dimension");
  jlp_cmd->add_option("--eps", jlp.eps, "distortion epsilon");
  jlp_cmd->add_option("--family", jlp.family, "basis | constant | random-unit | spike");
  jlp_cmd->add_option("--trials", jlp.trials, "trial count")->check(CLI::PositiveNumber);
  jlp_cmd->add_option("--delta", jlp.delta, "failure probability for the lemma checks");
  jlp_cmd->add_option("--theta", jlp.theta, "block-nonzero threshold");
  jlp_cmd->add_option("--dist", jlp.dist, "hanson-wright entries: gaussian | rademacher");
  add_transform_options(jlp_cmd, jlp.params);

  RipArgs rip;
  auto* rip_cmd = app.add_subcommand("rip", "brute-force restricted isometry survey");
  add_common(rip_cmd, ctx);
  rip_cmd->add_option("--kind", rip.kind, "transform kind");
  rip_cmd->add_option("--n", rip.n, "input dimension");
  rip_cmd->add_option("--r", rip.r, "output dimension");
  rip_cmd->add_option("--k", rip.k, "sparsity order");
  rip_cmd->add_option("--seeds", rip.seeds, "number of realized transforms");
  add_transform_options(rip_cmd, rip.params);

  DpArgs dp;
  auto* dp_cmd = app.add_subcommand("dp", "private publication and streaming sketches");
  dp_cmd->require_subcommand(1);
  auto add_dp_common = [&](CLI::App* c) {
    add_common(c, ctx);
    c->add_option("--alpha", dp.alpha, "privacy budget alpha");
    c->add_option("--beta", dp.beta, "privacy slack beta");
    c->add_option("--r", dp.r, "sketch rows");
    c->add_option("--w", dp.w, "lifting weight");
    c->add_option("--kind", dp.kind, "transform kind (Gaussian-entried in private mode)");
    c->add_flag("--non-private", dp.non_private, "skip every privacy check");
    add_transform_options(c, dp.params);
  };
  auto* publish_cmd = dp_cmd->add_subcommand("publish", "release Phi A^T or Phi^T Phi A^T");
  add_dp_common(publish_cmd);
  publish_cmd->add_option("--matrix", dp.matrix, "input CSV")->required();
  publish_cmd->add_option("--mode", dp.mode, "first | second");
  publish_cmd->add_flag("--lift", dp.lift, "lift singular values to --w first");
  publish_cmd->add_option("--report", dp.report, "JSON report path");
  auto* cut_cmd = dp_cmd->add_subcommand("cut", "private cut queries on a weighted graph");
  add_dp_common(cut_cmd);
  cut_cmd->add_option("--graph", dp.graph, "edge CSV with rows i,j[,weight]")->required();
  cut_cmd->add_option("--vertices", dp.vertices, "vertex count (default: max index + 1)");
  cut_cmd->add_option("--set", dp.sets, "comma-separated vertex set; repeatable");
  cut_cmd->add_flag("--with-exact", dp.with_exact, "also report exact cut values");
  auto* stream_cmd = dp_cmd->add_subcommand("stream", "replay a column-update script");
  add_dp_common(stream_cmd);
  stream_cmd->add_option("--script", dp.script, "update script CSV")->required();
  stream_cmd->add_option("--sketch", dp.sketch, "mm | lr");
  stream_cmd->add_option("--rows", dp.rows, "rows of each streamed column");
  stream_cmd->add_option("--m1,--m", dp.m1, "columns of A");
  stream_cmd->add_option("--m2", dp.m2, "columns of B (mm only)");
  auto* threshold_cmd = dp_cmd->add_subcommand("threshold", "the lifting threshold terms");
  add_dp_common(threshold_cmd);
  auto* compose_cmd = dp_cmd->add_subcommand("compose", "advanced composition calculator");
  add_common(compose_cmd, ctx);
  compose_cmd->add_option("--alpha0", dp.alpha0, "per-release alpha");
  compose_cmd->add_option("--beta0", dp.beta0, "per-release beta");
  compose_cmd->add_option("--ell", dp.ell, "number of releases");
  compose_cmd->add_option("--beta-prime", dp.beta_prime, "composition slack");

  AttackArgs atk;
  auto* attack_cmd = app.add_subcommand("attack", "distinguishing attacks on rival sketches");
  add_common(attack_cmd, ctx);
  attack_cmd->add_option("--target", atk.target, "rival transform kind");
  attack_cmd->add_option("--n", atk.n, "dimension");
  attack_cmd->add_option("--r", atk.r, "sketch rows");
  atk.w_opt = attack_cmd->add_option("--w", atk.w, "pair weight");
  attack_cmd->add_option("--trials", atk.trials, "trial count")->check(CLI::PositiveNumber);
  attack_cmd->add_option("--pair", atk.pair,
                         "auto | bounded-orthonormal | bounded-orthonormal-single-column | "
                         "hadamard | circulant | iterated");
  attack_cmd->add_option("--control", atk.control, "run the control arm: gaussian");
  attack_cmd->add_option("--mechanism", atk.mechanism, "control mechanism kind");
  attack_cmd->add_option("--alpha", atk.alpha, "control privacy alpha");
  attack_cmd->add_option("--beta", atk.beta, "control privacy beta");
  attack_cmd->add_option("--sketch-r", atk.sketch_r, "control mechanism rows (default --r)");
  add_transform_options(attack_cmd, atk.params);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "apply-time benchmark");
  add_common(bench_cmd, ctx);
  bench_cmd->add_option("--kind", bench.kind, "transform kind");
  bench_cmd->add_option("--n-range", bench.range, "lo:hi, powers of two");
  bench_cmd->add_option("--r", bench.r, "output dimension");
  bench_cmd->add_option("--reps", bench.reps, "timed repetitions")->check(CLI::Range(30, 1000000));
  bench_cmd->add_option("--warmups", bench.warmups, "untimed repetitions")
      ->check(CLI::Range(5, 1000000));
  add_transform_options(bench_cmd, bench.params);

  SelftestArgs self;
  auto* self_cmd = app.add_subcommand("selftest", "built-in checks");
  add_common(self_cmd, ctx);
  self_cmd->add_option("--acceptance", self.acceptance, "run acceptance criterion 1..12 or all");

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  // Each subcommand registered its own --seed; find the one that was used.
  const CLI::App* leaf = app.get_subcommands().front();
  while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
  try {
    const CLI::Option* seed_opt = leaf->get_option_no_throw("--seed");
    resolve_seed(ctx, seed_opt);
    if (leaf == gen_cmd) return cmd_gen(ctx, gen);
    if (leaf == jlp_cmd) return cmd_jlp(ctx, jlp);
    if (leaf == rip_cmd) return cmd_rip(ctx, rip);
    if (leaf == publish_cmd) return cmd_dp_publish(ctx, dp);
    if (leaf == cut_cmd) return cmd_dp_cut(ctx, dp);
    if (leaf == stream_cmd) return cmd_dp_stream(ctx, dp);
    if (leaf == threshold_cmd) return cmd_dp_threshold(ctx, dp);
    if (leaf == compose_cmd) return cmd_dp_compose(ctx, dp);
    if (leaf == attack_cmd) return cmd_attack(ctx, atk);
    if (leaf == bench_cmd) return cmd_bench(ctx, bench);
    if (leaf == self_cmd) return cmd_selftest(ctx, self);
    err << "fastjl: no command\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "fastjl: usage: " << e.what() << "\n";
    return kUsage;
  } catch (const PrivacyPreconditionError& e) {
    err << "fastjl: privacy precondition: " << e.what() << " (sigma_min " << e.sigma_min()
        << ", threshold " << e.threshold() << ")\n";
    return kPrecondition;
  } catch (const ResourceError& e) {
    err << "fastjl: resource: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    err << "fastjl: precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::bad_alloc&) {
    err << "fastjl: resource: out of memory\n";
    return kResource;
  } catch (const Json::exception& e) {
    err << "fastjl: resource: " << e.what() << "\n";
    return kResource;
  }
}

}  // namespace fastjl::cli
