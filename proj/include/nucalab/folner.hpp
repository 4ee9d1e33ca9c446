#pragma once

#include <cstdint>
#include <functional>

#include "nucalab/finite_set.hpp"

namespace nucalab {

// Centered-box Folner sequence F_n = [-k_n, k_n]^d, n >= 1. The radius
// schedule must be strictly increasing with k_1 >= 1 (validated on use);
// the default is k_n = n.
class BoxFolner {
  public:
    explicit BoxFolner(int dim) : BoxFolner(dim, [](int n) { return std::int64_t(n); }) {}
    BoxFolner(int dim, std::function<std::int64_t(int)> radius_fn);

    int dim() const { return dim_; }
    std::int64_t radius(int n) const;
    // Throws std::invalid_argument if the schedule is not strictly increasing
    // at this index or the radius is negative.
    FiniteSet box(int n) const;

  private:
    int dim_;
    std::function<std::int64_t(int)> radius_fn_;
};

}  // namespace nucalab
