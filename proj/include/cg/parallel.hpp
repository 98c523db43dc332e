#pragma once

#include <functional>

namespace cg {

// Worker count used by grid loops; 0 selects the hardware concurrency.
void set_default_jobs(int jobs);
int default_jobs();

// Calls f(i) for i in [0, n) on up to `jobs` threads; exceptions are rethrown in index order.
void parallel_for(int n, const std::function<void(int)>& f, int jobs = 0);

}  // namespace cg
