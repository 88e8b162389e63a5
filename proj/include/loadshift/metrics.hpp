#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace loadshift {

/// Tie-corrected Mann-Whitney AUC. Returns -1 when labels are single-class
/// (the caller decides whether that means "skip" or "0.5").
inline double rank_auc(const std::vector<double>& scores,
                       const std::vector<std::uint8_t>& labels) {
  const std::size_t n = scores.size();
  std::size_t pos = 0;
  for (auto y : labels) pos += y ? 1 : 0;
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) return -1.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k)
      if (labels[order[k]]) pos_rank_sum += midrank;
    i = j + 1;
  }
  const double p = static_cast<double>(pos);
  return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

}  // namespace loadshift
