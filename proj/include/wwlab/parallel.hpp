// Worker cap for the embarrassingly parallel loops (independent residual
// evaluations, lattice assemblies). Default 1.
#pragma once

#include <functional>

namespace wwlab {

void set_max_jobs(int n);  // n < 1 is treated as 1
int max_jobs();

// Calls f(i) for i in [0, n) on up to max_jobs() threads. The first exception
// thrown by any call is rethrown after all workers stop.
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace wwlab
