#include "dpinar/logprob.hpp"

#include <stdexcept>

namespace dpinar {

namespace {

constexpr int table_size = 4096;

std::vector<double> build_table() {
    std::vector<double> table(table_size);
    table[0] = 0.0;
    for (int n = 1; n < table_size; ++n)
        table[n] = table[n - 1] + std::log(static_cast<double>(n));
    return table;
}

}  // namespace

double log_factorial(int n) {
    static const std::vector<double> table = build_table();
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    if (n >= table_size) return std::lgamma(n + 1.0);
    return table[n];
}

}  // namespace dpinar
