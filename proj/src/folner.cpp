#include "nucalab/folner.hpp"

#include <stdexcept>

namespace nucalab {

BoxFolner::BoxFolner(int dim, std::function<std::int64_t(int)> radius_fn)
    : dim_(dim), radius_fn_(std::move(radius_fn)) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
}

std::int64_t BoxFolner::radius(int n) const { return radius_fn_(n); }

FiniteSet BoxFolner::box(int n) const {
    if (n < 1) throw std::invalid_argument("Folner index starts at 1");
    std::int64_t k = radius_fn_(n);
    if (k < 0) throw std::invalid_argument("negative Folner radius");
    if (n > 1 && radius_fn_(n - 1) >= k)
        throw std::invalid_argument("Folner radius schedule must be strictly increasing");
    return FiniteSet::centered_box(dim_, k);
}

}  // namespace nucalab
