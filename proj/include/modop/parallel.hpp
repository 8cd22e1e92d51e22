#pragma once

#include <cstddef>
#include <functional>

namespace modop {

// Worker cap for parallel_for; 1 (the default) runs inline.
void set_thread_count(int n);
int thread_count();

// Calls body(i) for i in [0, n). Each index must write only its own output
// slot so results do not depend on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace modop
