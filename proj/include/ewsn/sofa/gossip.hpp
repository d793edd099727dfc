#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

namespace ewsn::sofa {

enum class ExchangeResult { success, negative_agreement, disagreement, aborted };

std::string_view to_string(ExchangeResult r);

struct MassPair {
  double a = 0.0;  // initiator
  double b = 0.0;  // responder
};

// success: both average; negative agreement: unchanged; disagreement: only the
// responder takes the average (mass is created/destroyed); aborted: unchanged.
MassPair gossip_merge(double a, double b, ExchangeResult r);

// Same in integer mass units; the success split is floor/ceil so the pair sum
// is preserved exactly.
std::pair<std::int64_t, std::int64_t> gossip_merge(std::int64_t a, std::int64_t b, ExchangeResult r);

}  // namespace ewsn::sofa
