#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

namespace tsr::detail {

struct ArgMin {
    std::size_t index = 0;
    double value = std::numeric_limits<double>::infinity();
    bool found = false;
};

/// Evaluates `eval(i)` for i in [0, count) across hardware threads and
/// returns the smallest value, ties going to the smallest index. `eval`
/// returns nullopt for infeasible candidates. The result does not depend on
/// scheduling.
template <typename Eval>
ArgMin parallel_argmin(std::size_t count, const Eval& eval) {
    auto scan = [&](std::size_t lo, std::size_t hi) {
        ArgMin best;
        for (std::size_t i = lo; i < hi; ++i) {
            const std::optional<double> v = eval(i);
            if (v && (!best.found || *v < best.value)) {
                best = {i, *v, true};
            }
        }
        return best;
    };
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), std::max<std::size_t>(count, 1));
    if (workers <= 1 || count < 64) return scan(0, count);

    std::vector<std::future<ArgMin>> parts;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t lo = 0; lo < count; lo += chunk) {
        parts.push_back(std::async(std::launch::async, scan, lo, std::min(count, lo + chunk)));
    }
    ArgMin best;
    for (auto& part : parts) {
        const ArgMin r = part.get();
        if (r.found && (!best.found || r.value < best.value)) best = r;
    }
    return best;
}

}  // namespace tsr::detail
