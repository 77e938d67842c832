#pragma once

#include <vector>

namespace dpinar {

/// Triangular table of log S(n, k), unsigned Stirling numbers of the first
/// kind, built by the log-space recurrence
///   S(n, k) = S(n-1, k-1) + (n-1) S(n-1, k).
class StirlingTable {
  public:
    explicit StirlingTable(int n);

    int size() const { return n_; }

    /// log S(row, k) for 1 <= row <= n, 1 <= k <= row; -inf outside.
    double log_value(int row, int k) const;

  private:
    int n_;
    std::vector<std::vector<double>> rows_;  // rows_[r-1][k-1] = log S(r, k)
};

inline StirlingTable log_stirling_table(int n) { return StirlingTable(n); }

}  // namespace dpinar
