#ifndef FASTJL_PARALLEL_H_
#define FASTJL_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace fastjl {

// Calls body(i) for i in [0, count) on `workers` threads, statically
// striped. Results must be written to per-index slots so the outcome does
// not depend on the worker count. The first exception thrown is rethrown.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace fastjl

#endif  // FASTJL_PARALLEL_H_
