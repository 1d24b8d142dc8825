#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace jumprep {

struct SampleStats {
    double mean = 0.0;
    double se = 0.0;  // sample std dev / sqrt(n)
    std::size_t n = 0;
};

inline SampleStats sample_stats(const std::vector<double>& values) {
    SampleStats s;
    s.n = values.size();
    if (s.n == 0) return s;
    double m = 0.0;
    for (double v : values) m += v;
    m /= static_cast<double>(s.n);
    double s2 = 0.0;
    for (double v : values) s2 += (v - m) * (v - m);
    s.mean = m;
    s.se = s.n > 1 ? std::sqrt(s2 / static_cast<double>(s.n - 1) / static_cast<double>(s.n)) : 0.0;
    return s;
}

} // namespace jumprep
