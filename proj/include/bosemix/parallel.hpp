#pragma once

#include <cstddef>
#include <functional>

namespace bosemix {

// Worker count: hardware concurrency, capped by BOSEMIX_THREADS when set.
unsigned thread_count();

// Calls body(i) for i in [0, n) on up to thread_count() threads. Each index
// is visited once; results written by index keep the output order fixed.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bosemix
