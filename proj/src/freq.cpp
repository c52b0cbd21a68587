#include "nlsv/freq.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace nlsv {

std::string to_string(Freq n) {
    return "(" + std::to_string(n.x) + "," + std::to_string(n.y) + ")";
}

std::ostream& operator<<(std::ostream& os, Freq n) { return os << to_string(n); }

ModeIndex::ModeIndex(std::vector<Freq> modes) : modes_(std::move(modes)) {
    std::sort(modes_.begin(), modes_.end());
    modes_.erase(std::unique(modes_.begin(), modes_.end()), modes_.end());
    pos_.reserve(modes_.size() * 2);
    for (std::size_t i = 0; i < modes_.size(); ++i) pos_.emplace(modes_[i], i);
}

ModeIndex ModeIndex::square(std::int64_t radius) {
    if (radius < 0) throw std::invalid_argument("box radius must be non-negative");
    std::vector<Freq> m;
    for (std::int64_t x = -radius; x <= radius; ++x)
        for (std::int64_t y = -radius; y <= radius; ++y) m.push_back({x, y});
    return ModeIndex(std::move(m));
}

ModeIndex ModeIndex::disc(std::int64_t radius) {
    if (radius < 0) throw std::invalid_argument("disc radius must be non-negative");
    std::vector<Freq> m;
    for (std::int64_t x = -radius; x <= radius; ++x)
        for (std::int64_t y = -radius; y <= radius; ++y)
            if (x * x + y * y <= radius * radius) m.push_back({x, y});
    return ModeIndex(std::move(m));
}

bool ModeIndex::is_closed() const {
    for (Freq a : modes_)
        for (Freq b : modes_)
            for (Freq c : modes_)
                if (!contains(a - b + c)) return false;
    return true;
}

std::int64_t ModeIndex::max_abs_coord() const {
    std::int64_t m = 0;
    for (Freq n : modes_) m = std::max({m, n.x < 0 ? -n.x : n.x, n.y < 0 ? -n.y : n.y});
    return m;
}

}  // namespace nlsv
