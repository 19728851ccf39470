#pragma once

#include <string>
#include <vector>

#include "cubic3/numeric.hpp"

namespace cubic3 {

/// Point of projective space with a unique integer representative: primitive
/// (gcd of coordinates 1) with positive first nonzero entry.
class PointProj {
public:
    explicit PointProj(std::vector<Int> coords) : coords_(std::move(coords)) {
        Int g = 0;
        for (const Int& c : coords_) g = gcd(g, c);
        if (g == 0) throw DomainError("ZeroPoint", "projective point has all coordinates zero");
        for (Int& c : coords_) c = exact_div(c, g);
        for (const Int& c : coords_) {
            if (c == 0) continue;
            if (c < 0)
                for (Int& d : coords_) d = -d;
            break;
        }
    }

    const std::vector<Int>& coords() const { return coords_; }
    std::size_t dim() const { return coords_.size(); }

    bool operator==(const PointProj& o) const { return coords_ == o.coords_; }
    bool operator<(const PointProj& o) const { return coords_ < o.coords_; }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (i) s += ",";
            s += coords_[i].get_str();
        }
        return s + "]";
    }

private:
    std::vector<Int> coords_;
};

}  // namespace cubic3
