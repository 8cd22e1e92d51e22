#include "modop/error.hpp"

#include <cstdlib>
#include <string>

namespace modop {

std::size_t memory_budget_bytes() {
    constexpr std::size_t kDefaultMb = 2048;
    std::size_t mb = kDefaultMb;
    if (const char* env = std::getenv("MODOP_BUDGET_MB")) {
        try {
            long long parsed = std::stoll(env);
            if (parsed > 0) mb = static_cast<std::size_t>(parsed);
        } catch (const std::exception&) {
            // ignore malformed value, keep default
        }
    }
    return mb * 1024ull * 1024ull;
}

void check_budget(std::size_t bytes, const std::string& what) {
    const std::size_t budget = memory_budget_bytes();
    if (bytes > budget) {
        throw BudgetError(what + " needs " + std::to_string(bytes / (1024 * 1024)) +
                          " MB, budget is " + std::to_string(budget / (1024 * 1024)) +
                          " MB (set MODOP_BUDGET_MB to raise it)");
    }
}

}  // namespace modop
