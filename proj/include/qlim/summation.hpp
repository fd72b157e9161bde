#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qlim {

// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline constexpr std::uint64_t kReduceBlock = 4096;

// Sum over [0, count) in fixed blocks. block(begin, end, acc) adds its terms to acc.
// Block boundaries do not depend on the thread count, so the result is reproducible.
template <class BlockFn>
double blocked_sum(std::uint64_t count, BlockFn&& block) {
    const std::uint64_t blocks = (count + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * kReduceBlock;
        const std::uint64_t end = std::min(count, begin + kReduceBlock);
        CompensatedSum acc;
        block(begin, end, acc);
        partial[static_cast<std::size_t>(b)] = acc.value();
    }
    CompensatedSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

// Mean and standard error of a sample.
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    if (xs.empty()) return r;
    CompensatedSum s;
    for (double x : xs) s.add(x);
    r.mean = s.value() / static_cast<double>(xs.size());
    if (xs.size() < 2) return r;
    CompensatedSum v;
    for (double x : xs) v.add((x - r.mean) * (x - r.mean));
    r.se = std::sqrt(v.value() / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    return r;
}

inline void set_thread_cap(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

}  // namespace qlim
