#include "dpinar/stirling.hpp"

#include "dpinar/logprob.hpp"

#include <cmath>
#include <stdexcept>

namespace dpinar {

StirlingTable::StirlingTable(int n) : n_(n) {
    if (n < 1) throw std::domain_error("StirlingTable: need n >= 1");
    rows_.resize(n);
    rows_[0] = {0.0};  // S(1,1) = 1
    for (int row = 2; row <= n; ++row) {
        auto& cur = rows_[row - 1];
        const auto& prev = rows_[row - 2];
        cur.resize(row);
        const double log_factor = std::log(static_cast<double>(row - 1));
        cur[0] = prev[0] + log_factor;  // S(row,1) = (row-1)!
        for (int k = 2; k < row; ++k)
            cur[k - 1] = log_sum_exp(prev[k - 2], log_factor + prev[k - 1]);
        cur[row - 1] = 0.0;  // S(row,row) = 1
    }
}

double StirlingTable::log_value(int row, int k) const {
    if (row < 1 || row > n_) throw std::domain_error("StirlingTable: row out of range");
    if (k < 1 || k > row) return neg_inf;
    return rows_[row - 1][k - 1];
}

}  // namespace dpinar
