#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sentinel {

/// One timestamped observation of every variable. `t` starts at 0 and
/// advances by exactly one per sample; the timestamp text is carried
/// through to reports untouched.
struct MultivariateSample {
    std::uint64_t t = 0;
    std::string timestamp;
    std::vector<double> values;
};

} // namespace sentinel
