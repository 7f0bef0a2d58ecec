#include "mpc/reduction.hpp"

namespace mpc {

const std::vector<const Reduction*>& path_reductions() {
  static const std::vector<const Reduction*> regs{};
  return regs;
}

bool centrality_run_clean(const GraphInstance&, std::uint64_t) { return false; }

}  // namespace mpc
