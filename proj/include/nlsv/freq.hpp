#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace nlsv {

using i128 = __int128;

// A lattice point n in Z^2, the label of one Fourier mode.
struct Freq {
    std::int64_t x = 0;
    std::int64_t y = 0;

    constexpr auto operator<=>(const Freq&) const = default;

    constexpr Freq operator+(Freq o) const { return {x + o.x, y + o.y}; }
    constexpr Freq operator-(Freq o) const { return {x - o.x, y - o.y}; }
    constexpr Freq operator-() const { return {-x, -y}; }
    constexpr Freq operator*(std::int64_t c) const { return {c * x, c * y}; }

    // |n|^2, exact. Callers keep |x|,|y| < 2^31.
    constexpr std::int64_t norm2() const { return x * x + y * y; }
};

constexpr std::int64_t dot(Freq a, Freq b) { return a.x * b.x + a.y * b.y; }
constexpr i128 dot128(Freq a, Freq b) { return i128(a.x) * b.x + i128(a.y) * b.y; }
constexpr i128 norm2_128(Freq a) { return dot128(a, a); }
// rotation by +90 degrees
constexpr Freq rot90(Freq a) { return {-a.y, a.x}; }

std::string to_string(Freq n);
std::ostream& operator<<(std::ostream& os, Freq n);

struct FreqHash {
    std::size_t operator()(Freq n) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(n.x) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(n.y) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        h ^= h >> 31;
        h *= 0xBF58476D1CE4E5B9ULL;
        h ^= h >> 29;
        return static_cast<std::size_t>(h);
    }
};

using FreqSet = std::unordered_set<Freq, FreqHash>;
template <class T>
using FreqMap = std::unordered_map<Freq, T, FreqHash>;

// Finite set of modes with stable (sorted) order and O(1) index lookup.
class ModeIndex {
public:
    ModeIndex() = default;
    explicit ModeIndex(std::vector<Freq> modes);

    static ModeIndex square(std::int64_t radius);  // [-r, r]^2
    static ModeIndex disc(std::int64_t radius);    // |n| <= r

    std::size_t size() const { return modes_.size(); }
    bool empty() const { return modes_.empty(); }
    const std::vector<Freq>& modes() const { return modes_; }
    Freq operator[](std::size_t i) const { return modes_[i]; }
    bool contains(Freq n) const {
        if (square_ >= 0) return n.x >= -square_ && n.x <= square_ && n.y >= -square_ && n.y <= square_;
        return pos_.count(n) != 0;
    }
    // radius when the index is the full square [-r, r]^2, else -1
    std::int64_t square_radius() const { return square_; }
    // -1 when absent
    std::int64_t find(Freq n) const {
        if (square_ >= 0) {
            if (!contains(n)) return -1;
            return (n.x + square_) * (2 * square_ + 1) + (n.y + square_);
        }
        auto it = pos_.find(n);
        return it == pos_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }
    // true when n1 - n2 + n3 stays inside for every choice from the set
    bool is_closed() const;
    std::int64_t max_abs_coord() const;

private:
    std::vector<Freq> modes_;
    FreqMap<std::size_t> pos_;
    std::int64_t square_ = -1;
};

}  // namespace nlsv
