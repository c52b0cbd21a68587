#pragma once

#include <map>

#include "nlsv/freq.hpp"

namespace nlsv {

// Real Fourier coefficients of the convolution potential V.
//
// Stored coefficients drive the dynamics; everything off the stored support is
// 0 for the dynamics but bounded by decay_constant * |n|^{-s0} when we need a
// conservative statement (kappa0).
class ConvPotential {
public:
    ConvPotential() = default;
    ConvPotential(std::map<Freq, double> coeffs, double s0, double hs0_norm, double decay_constant);

    static ConvPotential zero();
    // v_n = 0.2 <n>^{-4} stored on |n| <= 8, s0 = 2, decay constant 0.2,
    // hs0_norm computed from the stored coefficients.
    static ConvPotential sample_decaying();
    // pure tail |v_n| <= |n|^{-2}, nothing stored
    static ConvPotential inverse_square_tail();

    // value used by the dynamics
    double value(Freq n) const {
        if (coeffs_.empty() || n.norm2() > max_norm2_) return 0.0;
        auto it = fast_.find(n);
        return it == fast_.end() ? 0.0 : it->second;
    }
    // conservative magnitude bound (stored value, else tail; tail at n = 0 is 0)
    double bound(Freq n) const;

    const std::map<Freq, double>& coeffs() const { return coeffs_; }
    double s0() const { return s0_; }
    double hs0_norm() const { return hs0_norm_; }
    double decay_constant() const { return decay_constant_; }
    bool is_zero() const { return coeffs_.empty(); }
    // sqrt(sum <n>^{2 s0} v_n^2) over stored coefficients
    double stored_hs0_norm() const;

private:
    std::map<Freq, double> coeffs_;
    FreqMap<double> fast_;
    std::int64_t max_norm2_ = -1;
    double s0_ = 2.0;
    double hs0_norm_ = 0.0;
    double decay_constant_ = 0.0;
};

}  // namespace nlsv
