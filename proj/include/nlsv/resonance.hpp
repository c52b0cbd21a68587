#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nlsv/freq.hpp"
#include "nlsv/potential.hpp"

namespace nlsv {

enum class TupleClass { A0, A1, IPrime_i, IPrime_ii, NonResonant };
std::string to_string(TupleClass c);

struct Tuple4 {
    Freq n1, n2, n3, n4;
    double rho = 0;
    std::int64_t alt_sq = 0;
    TupleClass cls = TupleClass::NonResonant;

    std::array<Freq, 4> modes() const { return {n1, n2, n3, n4}; }
};

struct ResonanceParams {
    double eta = 0.3;
    std::int64_t kappa0 = 0;
};

// |n1|^2 - |n2|^2 + |n3|^2 - |n4|^2, exact. Requires the momentum constraint.
std::int64_t alt_sq(Freq n1, Freq n2, Freq n3, Freq n4);
double small_divisor(Freq n1, Freq n2, Freq n3, Freq n4, const ConvPotential& V);

std::int64_t kappa0(const ConvPotential& V);

inline bool is_low(Freq n, std::int64_t kappa0) { return n.norm2() < kappa0 * kappa0; }

void validate_eta(double eta);

// Class from the defining inequalities. `rho`/`alt` are the tuple's values.
TupleClass class_of(Freq n1, Freq n2, Freq n3, Freq n4, double rho, std::int64_t alt, const ResonanceParams& p);
Tuple4 classify(Freq n1, Freq n2, Freq n3, Freq n4, const ConvPotential& V, const ResonanceParams& p);

// Lexicographic minimum over the four trivial permutations
// (n1,n2,n3,n4), (n1,n4,n3,n2), (n3,n2,n1,n4), (n3,n4,n1,n2).
std::array<Freq, 4> canonical_trivial(Freq n1, Freq n2, Freq n3, Freq n4);

// All resonant rectangles (momentum, alt_sq = 0, n1 != n4, n3 != n4) in the box,
// one representative per trivial-permutation orbit, sorted.
std::vector<Tuple4> enumerate_rectangles(const ModeIndex& box);

// All (n1,n2,n3) in the box with n1 - n2 + n3 = n and the requested class.
std::vector<Tuple4> enumerate_class(Freq n, TupleClass cls, const ModeIndex& box, const ConvPotential& V,
                                    const ResonanceParams& p);

// Every ordered momentum tuple with all four modes in the box, classified.
// Visitor receives each tuple once.
template <class F>
void for_each_box_tuple(const ModeIndex& box, const ConvPotential& V, const ResonanceParams& p, F&& f) {
    const auto& m = box.modes();
    for (Freq a : m)
        for (Freq b : m)
            for (Freq c : m) {
                Freq d = a - b + c;
                if (!box.contains(d)) continue;
                f(classify(a, b, c, d, V, p));
            }
}

struct ScanSummary {
    std::map<TupleClass, std::size_t> counts;  // canonical (trivial-permutation) representatives
    double max_abs_F = 0;                      // over I' tuples
    double min_abs_rho_case_ii = 0;            // +inf when there is none
    std::size_t iprime = 0;
};

// Iterates unique monomials of the box; `visit` (may be empty) sees every representative.
ScanSummary scan_box(const ModeIndex& box, const ConvPotential& V, const ResonanceParams& p,
                     const std::function<void(const Tuple4&)>& visit = {});

}  // namespace nlsv
