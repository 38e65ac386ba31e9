#include "limdim/point.hpp"

#include <sstream>

namespace limdim {

int Dist::cmp_plus(const Rat& a, const ExactReal& r, int undecided) const {
    if (!squared) {
        Rat rest = v - a;
        if (rest <= 0) return -1;  // r > 0
        return -r.cmp(rest);
    }
    if (v == 0) return -1;
    // sign(sqrt(v) - (a + r)) = -sign(a + r - sqrt(v))
    ExactReal sq = ExactReal::power(v, make_rat(Int(1), Int(2)));
    return -cmp_rat_plus_er_vs_er(a, r, sq, -undecided);
}

std::string coordinate_to_string(const Coordinate& c) {
    std::ostringstream os;
    if (std::holds_alternative<RealCoord>(c)) {
        os << rat_to_string(std::get<RealCoord>(c).x);
    } else if (std::holds_alternative<PAdicCoord>(c)) {
        os << rat_to_string(std::get<PAdicCoord>(c).witness);
    } else if (std::holds_alternative<GaussCoord>(c)) {
        const auto& g = std::get<GaussCoord>(c);
        os << rat_to_string(g.re) << "+" << rat_to_string(g.im) << "i";
    } else {
        const auto& m = std::get<MissingCoord>(c);
        os << "word:";
        for (auto d : m.word) os << int(d);
    }
    return os.str();
}

std::string point_to_string(const Point& p) {
    std::ostringstream os;
    for (size_t i = 0; i < p.coords.size(); ++i) {
        if (i) os << "|";
        os << coordinate_to_string(p.coords[i]);
    }
    return os.str();
}

}  // namespace limdim
