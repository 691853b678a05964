#include "asbsr/reconstruction.hpp"

namespace asbsr {

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxIter:
      return "max_iter";
    case StopReason::kTargetRmse:
      return "target_rmse";
    case StopReason::kPlateau:
      return "plateau";
  }
  return "unknown";
}

}  // namespace asbsr
