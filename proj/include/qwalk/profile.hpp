#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

// Eventually-constant coin assignment: left coin for x <= x_minus, right coin
// for x >= x_plus, an explicit list in between.
struct CoinProfile {
    Coin left;
    Coin right;
    std::vector<Coin> middle;  // positions x_minus+1 ... x_plus-1
    int x_minus = -1;
    int x_plus = 1;
    int n = 3;
};

inline CoinProfile make_profile(Coin left, std::vector<Coin> middle, Coin right,
                                int x_minus, int x_plus) {
    if (!(x_minus < 0 && 0 < x_plus))
        throw BadDimension("cut positions must satisfy x_minus < 0 < x_plus, got " +
                           std::to_string(x_minus) + ", " + std::to_string(x_plus));
    const int want = x_plus - x_minus - 1;
    if (static_cast<int>(middle.size()) != want)
        throw BadDimension("middle list must have x_plus - x_minus - 1 = " +
                           std::to_string(want) + " coins, got " +
                           std::to_string(middle.size()));
    const int n = left.n;
    if (right.n != n)
        throw DimensionMismatch("left and right coins disagree on n");
    for (const Coin& c : middle)
        if (c.n != n) throw DimensionMismatch("middle coin disagrees on n");

    CoinProfile p;
    p.left = std::move(left);
    p.right = std::move(right);
    p.middle = std::move(middle);
    p.x_minus = x_minus;
    p.x_plus = x_plus;
    p.n = n;
    return p;
}

inline const Coin& coin_at(const CoinProfile& p, int x) {
    if (x <= p.x_minus) return p.left;
    if (x >= p.x_plus) return p.right;
    return p.middle[static_cast<std::size_t>(x - p.x_minus - 1)];
}

}  // namespace qwalk
