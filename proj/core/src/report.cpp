#include "gpt/report.hpp"

namespace gpt {

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::HoldsOnSamples: return "holds_on_samples";
    case Verdict::Fails: return "fails";
    case Verdict::Impossible: return "impossible";
    case Verdict::Certified: return "certified";
  }
  return "unknown";
}

}  // namespace gpt
