#include "nlsv/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace nlsv {

ConvPotential::ConvPotential(std::map<Freq, double> coeffs, double s0, double hs0_norm,
                             double decay_constant)
    : s0_(s0), hs0_norm_(hs0_norm), decay_constant_(decay_constant) {
    if (!(s0 > 0)) throw std::invalid_argument("potential: s0 must be > 0");
    if (!(hs0_norm >= 0)) throw std::invalid_argument("potential: hs0_norm must be >= 0");
    if (!(decay_constant >= 0)) throw std::invalid_argument("potential: decay_constant must be >= 0");
    for (const auto& [n, v] : coeffs) {
        if (!std::isfinite(v)) throw std::invalid_argument("potential: non-finite coefficient at " + to_string(n));
        if (n.norm2() != 0) {
            double b = decay_constant * std::pow(static_cast<double>(n.norm2()), -0.5 * s0);
            if (std::abs(v) > b * (1 + 1e-12))
                throw std::invalid_argument("potential: coefficient at " + to_string(n) +
                                            " violates the decay bound");
        }
        if (v == 0.0) continue;
        coeffs_.emplace(n, v);
        fast_.emplace(n, v);
        max_norm2_ = std::max(max_norm2_, n.norm2());
    }
}

ConvPotential ConvPotential::zero() { return ConvPotential({}, 2.0, 0.0, 0.0); }

ConvPotential ConvPotential::sample_decaying() {
    std::map<Freq, double> c;
    const std::int64_t R = 8;
    for (std::int64_t x = -R; x <= R; ++x)
        for (std::int64_t y = -R; y <= R; ++y) {
            Freq n{x, y};
            if (n.norm2() > R * R) continue;
            double jb2 = 1.0 + static_cast<double>(n.norm2());
            c[n] = 0.2 / (jb2 * jb2);
        }
    ConvPotential tmp(c, 2.0, 0.0, 0.2);
    return ConvPotential(c, 2.0, tmp.stored_hs0_norm(), 0.2);
}

ConvPotential ConvPotential::inverse_square_tail() { return ConvPotential({}, 2.0, 0.0, 1.0); }

double ConvPotential::bound(Freq n) const {
    auto it = fast_.find(n);
    if (it != fast_.end()) return std::abs(it->second);
    if (n.norm2() == 0) return 0.0;
    return decay_constant_ * std::pow(static_cast<double>(n.norm2()), -0.5 * s0_);
}

double ConvPotential::stored_hs0_norm() const {
    double acc = 0;
    for (const auto& [n, v] : coeffs_) acc += std::pow(1.0 + static_cast<double>(n.norm2()), s0_) * v * v;
    return std::sqrt(acc);
}

}  // namespace nlsv
