#ifndef FASTJL_REPORTS_H_
#define FASTJL_REPORTS_H_

#include <json.hpp>

#include "fastjl/attacks.h"
#include "fastjl/bench.h"
#include "fastjl/jlp_harness.h"
#include "fastjl/privacy.h"
#include "fastjl/rip.h"

namespace fastjl {

// nlohmann::json keeps object keys sorted, so dumps are stably ordered.
using Json = nlohmann::json;

Json to_json(const JlpReport& r);
JlpReport jlp_report_from_json(const Json& j);
Json to_json(const TailCurve& c);
Json to_json(const RipSurvey& s);
Json to_json(const AttackReport& r);
Json to_json(const ThresholdBreakdown& t);
Json to_json(const WilsonInterval& w);
Json to_json(const BenchReport& b);

}  // namespace fastjl

#endif  // FASTJL_REPORTS_H_
