#pragma once

#include <cstddef>

// Execution switch for the sweep kernels. Parallel loops write results into
// preassigned slots and reductions run in grid-index order afterwards, so both
// modes produce bit-identical output.

namespace warpcurv {

enum class Exec { serial, parallel };

template <class F>
void for_each_index(std::size_t n, Exec mode, F&& f) {
  if (mode == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) f(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) f(i);
  }
}

}  // namespace warpcurv
