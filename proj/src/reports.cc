#include "fastjl/reports.h"

#include "fastjl/errors.h"

namespace fastjl {

Json to_json(const WilsonInterval& w) { return Json::array({w.lo, w.hi}); }

Json to_json(const JlpReport& r) {
  Json j;
  j["kind"] = std::string(to_string(r.kind));
  j["n"] = r.n;
  j["r"] = r.r;
  j["epsilon"] = r.epsilon;
  j["family"] = std::string(to_string(r.family));
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["failures"] = r.failures;
  j["failure_rate"] = r.failure_rate;
  j["failure_ci"] = to_json(r.failure_ci);
  j["mean_squared_norm"] = r.mean_squared_norm;
  j["distortion_quantiles"] = {{"p50", r.distortion_p50},
                               {"p90", r.distortion_p90},
                               {"p99", r.distortion_p99},
                               {"max", r.distortion_max}};
  j["mean_bits_per_trial"] = r.mean_bits_per_trial;
  j["mean_gaussians_per_trial"] = r.mean_gaussians_per_trial;
  j["exact_failure_probability"] =
      r.exact_failure_probability ? Json(*r.exact_failure_probability) : Json(nullptr);
  return j;
}

JlpReport jlp_report_from_json(const Json& j) {
  JlpReport r;
  const auto kind = parse_transform_kind(j.at("kind").get<std::string>());
  const auto family = parse_vector_family(j.at("family").get<std::string>());
  if (!kind || !family) throw ContractError("jlp report: unknown kind or family");
  r.kind = *kind;
  r.family = *family;
  r.n = j.at("n").get<std::size_t>();
  r.r = j.at("r").get<std::size_t>();
  r.epsilon = j.at("epsilon").get<double>();
  r.trials = j.at("trials").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.failures = j.at("failures").get<std::uint64_t>();
  r.failure_rate = j.at("failure_rate").get<double>();
  r.failure_ci = {j.at("failure_ci").at(0).get<double>(), j.at("failure_ci").at(1).get<double>()};
  r.mean_squared_norm = j.at("mean_squared_norm").get<double>();
  const Json& q = j.at("distortion_quantiles");
  r.distortion_p50 = q.at("p50").get<double>();
  r.distortion_p90 = q.at("p90").get<double>();
  r.distortion_p99 = q.at("p99").get<double>();
  r.distortion_max = q.at("max").get<double>();
  r.mean_bits_per_trial = j.at("mean_bits_per_trial").get<double>();
  r.mean_gaussians_per_trial = j.at("mean_gaussians_per_trial").get<double>();
  if (!j.at("exact_failure_probability").is_null()) {
    r.exact_failure_probability = j.at("exact_failure_probability").get<double>();
  }
  return r;
}

Json to_json(const TailCurve& c) {
  Json j;
  j["statistic"] = c.statistic;
  j["lower_tail"] = c.lower_tail;
  j["trials"] = c.trials;
  j["thresholds"] = c.thresholds;
  j["exceedance"] = c.exceedance;
  j["ci_lo"] = c.ci_lo;
  j["ci_hi"] = c.ci_hi;
  j["bound"] = c.bound;
  j["mean"] = c.mean;
  j["variance"] = c.variance;
  j["max"] = c.max;
  j["summary"] = c.summary;
  return j;
}

Json to_json(const RipSurvey& s) {
  Json j;
  j["kind"] = std::string(to_string(s.kind));
  j["n"] = s.n;
  j["r"] = s.r;
  j["k"] = s.k;
  j["seed"] = s.seed;
  j["deltas"] = s.deltas;
  j["median"] = s.median;
  j["p90"] = s.p90;
  j["max"] = s.max;
  return j;
}

Json to_json(const AttackReport& r) {
  Json j;
  j["target"] = r.target;
  j["mechanism"] = r.mechanism;
  j["pair"] = r.pair;
  j["distinguisher"] = r.distinguisher;
  j["n"] = r.n;
  j["r"] = r.r;
  j["w"] = r.w;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["correct_on_a"] = r.correct_on_a;
  j["correct_on_a_tilde"] = r.correct_on_a_tilde;
  j["wrong_on_a"] = r.wrong_on_a;
  j["wrong_on_a_tilde"] = r.wrong_on_a_tilde;
  j["event_fires"] = r.event_fires;
  j["success_rate"] = r.success_rate;
  j["success_ci"] = to_json(r.success_ci);
  j["advantage"] = r.advantage;
  j["advantage_ci"] = Json::array({r.advantage_lo, r.advantage_hi});
  j["predicted_rate"] = r.predicted_rate ? Json(*r.predicted_rate) : Json(nullptr);
  return j;
}

Json to_json(const ThresholdBreakdown& t) {
  Json j;
  j["single_release"] = t.single_release;
  j["second_moment"] = t.second_moment;
  j["streaming"] = t.streaming;
  j["value"] = t.value;
  j["binding"] = t.binding;
  return j;
}

Json to_json(const BenchReport& b) {
  Json j;
  j["kind"] = std::string(to_string(b.kind));
  j["r"] = b.r;
  j["seed"] = b.seed;
  j["reps"] = b.reps;
  j["warmups"] = b.warmups;
  Json sizes = Json::array();
  for (std::size_t n : b.sizes) sizes.push_back({{"n", n}, {"r", b.r}});
  j["sizes"] = sizes;
  j["median_ns"] = b.median_ns;
  j["build_ns"] = b.build_ns;
  j["doubling_ratios"] = b.doubling_ratios;
  return j;
}

}  // namespace fastjl
