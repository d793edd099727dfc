#include "ewsn/sofa/gossip.hpp"

namespace ewsn::sofa {

std::string_view to_string(ExchangeResult r) {
  switch (r) {
    case ExchangeResult::success: return "success";
    case ExchangeResult::negative_agreement: return "negative-agreement";
    case ExchangeResult::disagreement: return "disagreement";
    case ExchangeResult::aborted: return "aborted";
  }
  return "?";
}

MassPair gossip_merge(double a, double b, ExchangeResult r) {
  const double avg = (a + b) / 2.0;
  switch (r) {
    case ExchangeResult::success: return {avg, avg};
    case ExchangeResult::disagreement: return {a, avg};
    default: return {a, b};
  }
}

std::pair<std::int64_t, std::int64_t> gossip_merge(std::int64_t a, std::int64_t b, ExchangeResult r) {
  const std::int64_t sum = a + b;
  // floor division, also for negative sums
  std::int64_t lo = sum / 2;
  if (sum < 0 && sum % 2 != 0) --lo;
  switch (r) {
    case ExchangeResult::success: return {lo, sum - lo};
    case ExchangeResult::disagreement: return {a, lo};
    default: return {a, b};
  }
}

}  // namespace ewsn::sofa
