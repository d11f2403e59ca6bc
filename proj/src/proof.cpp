#include "circlet/proof.hpp"

#include <algorithm>

namespace circlet {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::running: return "Running";
    case Outcome::success: return "Success";
    case Outcome::stuck: return "Stuck";
    case Outcome::budget_exceeded: return "BudgetExceeded";
  }
  return "?";
}

std::vector<FrozenGoal> equations_of(const std::vector<Hypothesis>& hs) {
  std::vector<FrozenGoal> out;
  out.reserve(hs.size());
  for (const auto& h : hs) out.push_back(h.eq);
  return out;
}

int lowest_common_ancestor(const std::vector<int>& nodes, const std::vector<int>& parent_of) {
  if (nodes.empty()) return -1;
  auto path = [&](int n) {
    std::vector<int> p;
    for (; n >= 0; n = parent_of[static_cast<std::size_t>(n)]) p.push_back(n);
    std::reverse(p.begin(), p.end());
    return p;
  };
  std::vector<int> common = path(nodes.front());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    std::vector<int> p = path(nodes[i]);
    std::size_t k = 0;
    while (k < common.size() && k < p.size() && common[k] == p[k]) ++k;
    common.resize(k);
  }
  return common.empty() ? -1 : common.back();
}

}  // namespace circlet
