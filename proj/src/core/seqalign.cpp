//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/core/seqalign.hpp"

#include <algorithm>

#include "posekit/core/types.hpp"

namespace posekit {

SequenceAlignment global_align(const std::string &a, const std::string &b,
                               const AlignmentScoring &scoring) {
  if (a.empty() || b.empty())
    throw Error("global_align: empty sequence");

  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());

  // Score matrix, row-major (n+1) x (m+1).
  std::vector<int> score(static_cast<std::size_t>(n + 1) * (m + 1));
  auto cell = [&](int i, int j) -> int & {
    return score[static_cast<std::size_t>(i) * (m + 1) + j];
  };

  for (int i = 0; i <= n; ++i)
    cell(i, 0) = i * scoring.gap;
  for (int j = 0; j <= m; ++j)
    cell(0, j) = j * scoring.gap;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      const int diag =
          cell(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? scoring.match : scoring.mismatch);
      const int up = cell(i - 1, j) + scoring.gap;
      const int left = cell(i, j - 1) + scoring.gap;
      cell(i, j) = std::max({diag, up, left});
    }
  }

  SequenceAlignment result;
  result.score = cell(n, m);

  // Traceback, diagonal > up > left so the path is deterministic.
  int i = n, j = m;
  int columns = 0;
  while (i > 0 || j > 0) {
    ++columns;
    if (i > 0 && j > 0 &&
        cell(i, j) == cell(i - 1, j - 1) +
                          (a[i - 1] == b[j - 1] ? scoring.match : scoring.mismatch)) {
      result.aligned.emplace_back(i - 1, j - 1);
      if (a[i - 1] == b[j - 1])
        ++result.matches;
      --i;
      --j;
    } else if (i > 0 && cell(i, j) == cell(i - 1, j) + scoring.gap) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(result.aligned.begin(), result.aligned.end());

  result.identity = columns > 0 ? static_cast<double>(result.matches) / columns : 0.0;
  result.coverage =
      static_cast<double>(result.aligned.size()) / static_cast<double>(std::max(n, m));
  return result;
}

}  // namespace posekit
