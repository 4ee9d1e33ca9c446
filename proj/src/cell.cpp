#include "nucalab/cell.hpp"

#include <sstream>

#include "nucalab/intmath.hpp"

namespace nucalab {

std::string to_string(const Cell& c, int dim) {
    std::ostringstream os;
    os << '(' << c.x;
    if (dim == 2) os << ',' << c.y;
    os << ')';
    return os.str();
}

std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    return std::string(s.rbegin(), s.rend());
}

}  // namespace nucalab
