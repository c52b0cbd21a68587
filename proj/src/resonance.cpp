#include "nlsv/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlsv {

std::string to_string(TupleClass c) {
    switch (c) {
        case TupleClass::A0: return "A0";
        case TupleClass::A1: return "A1";
        case TupleClass::IPrime_i: return "IPrime_i";
        case TupleClass::IPrime_ii: return "IPrime_ii";
        case TupleClass::NonResonant: return "NonResonant";
    }
    return "?";
}

std::int64_t alt_sq(Freq n1, Freq n2, Freq n3, Freq n4) {
    if (n1 - n2 + n3 != n4) throw std::invalid_argument("tuple violates the momentum constraint");
    return n1.norm2() - n2.norm2() + n3.norm2() - n4.norm2();
}

double small_divisor(Freq n1, Freq n2, Freq n3, Freq n4, const ConvPotential& V) {
    const std::int64_t a = alt_sq(n1, n2, n3, n4);
    return static_cast<double>(a) + ((V.value(n1) + V.value(n3)) - (V.value(n2) + V.value(n4)));
}

std::int64_t kappa0(const ConvPotential& V) {
    constexpr double thr = 0.01;
    std::int64_t worst = -1;  // largest |n|^2 with |v_n| > thr
    for (const auto& [n, v] : V.coeffs())
        if (std::abs(v) > thr) worst = std::max(worst, n.norm2());
    if (V.decay_constant() > 0) {
        // tail bound c |n|^{-s0} exceeds thr only for |n| < (c/thr)^{1/s0}
        const double r = std::pow(V.decay_constant() / thr, 1.0 / V.s0());
        if (r > 1e4) throw std::invalid_argument("kappa0: tail radius too large for exhaustive scan");
        const std::int64_t R = static_cast<std::int64_t>(std::ceil(r)) + 1;
        for (std::int64_t x = -R; x <= R; ++x)
            for (std::int64_t y = -R; y <= R; ++y) {
                Freq n{x, y};
                if (n.norm2() == 0 || V.coeffs().count(n)) continue;
                if (V.bound(n) > thr) worst = std::max(worst, n.norm2());
            }
    }
    if (worst < 0) return 0;
    auto k = static_cast<std::int64_t>(std::sqrt(static_cast<double>(worst)));
    while (k * k > worst) --k;
    while ((k + 1) * (k + 1) <= worst) ++k;
    return k + 1;  // smallest integer with k^2 > worst
}

void validate_eta(double eta) {
    if (!(eta > 0 && eta < 1)) throw std::invalid_argument("eta must lie in (0, 1)");
}

TupleClass class_of(Freq n1, Freq n2, Freq n3, Freq n4, double rho, std::int64_t alt, const ResonanceParams& p) {
    const bool nondiag = n1 != n4 && n3 != n4;
    const std::int64_t k = p.kappa0;
    const bool any_low = is_low(n1, k) || is_low(n2, k) || is_low(n3, k) || is_low(n4, k);
    if (any_low) {
        if (std::abs(rho) > p.eta) return TupleClass::IPrime_i;
        return nondiag ? TupleClass::A0 : TupleClass::NonResonant;
    }
    if (alt != 0) return TupleClass::IPrime_ii;
    return nondiag ? TupleClass::A1 : TupleClass::NonResonant;
}

Tuple4 classify(Freq n1, Freq n2, Freq n3, Freq n4, const ConvPotential& V, const ResonanceParams& p) {
    validate_eta(p.eta);
    Tuple4 t{n1, n2, n3, n4, 0.0, alt_sq(n1, n2, n3, n4), TupleClass::NonResonant};
    t.rho = static_cast<double>(t.alt_sq) + ((V.value(n1) + V.value(n3)) - (V.value(n2) + V.value(n4)));
    t.cls = class_of(n1, n2, n3, n4, t.rho, t.alt_sq, p);
    return t;
}

std::array<Freq, 4> canonical_trivial(Freq n1, Freq n2, Freq n3, Freq n4) {
    return {std::min(n1, n3), std::min(n2, n4), std::max(n1, n3), std::max(n2, n4)};
}

std::vector<Tuple4> enumerate_rectangles(const ModeIndex& box) {
    // Two diagonals of a rectangle share their midpoint and their length.
    struct Key {
        Freq sum;
        std::int64_t len2;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, std::vector<std::pair<Freq, Freq>>> groups;
    const auto& m = box.modes();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            groups[{m[i] + m[j], (m[i] - m[j]).norm2()}].push_back({m[i], m[j]});
    std::vector<Tuple4> out;
    for (const auto& [key, diags] : groups)
        for (std::size_t a = 0; a < diags.size(); ++a)
            for (std::size_t b = 0; b < diags.size(); ++b) {
                if (a == b) continue;
                // (n1, n3) on one diagonal, (n2, n4) on the other; diags are stored sorted
                const auto& [p, q] = diags[a];
                const auto& [r, s] = diags[b];
                Tuple4 t{p, r, q, s, 0.0, 0, TupleClass::A1};
                out.push_back(t);
            }
    std::sort(out.begin(), out.end(), [](const Tuple4& x, const Tuple4& y) { return x.modes() < y.modes(); });
    return out;
}

std::vector<Tuple4> enumerate_class(Freq n, TupleClass cls, const ModeIndex& box, const ConvPotential& V,
                                    const ResonanceParams& p) {
    validate_eta(p.eta);
    std::vector<Tuple4> out;
    if (!box.contains(n)) return out;
    for (Freq n1 : box.modes())
        for (Freq n2 : box.modes()) {
            Freq n3 = n - n1 + n2;
            if (!box.contains(n3)) continue;
            Tuple4 t = classify(n1, n2, n3, n, V, p);
            if (t.cls == cls) out.push_back(t);
        }
    return out;
}

ScanSummary scan_box(const ModeIndex& box, const ConvPotential& V, const ResonanceParams& p,
                     const std::function<void(const Tuple4&)>& visit) {
    validate_eta(p.eta);
    ScanSummary s;
    for (TupleClass c : {TupleClass::A0, TupleClass::A1, TupleClass::IPrime_i, TupleClass::IPrime_ii,
                         TupleClass::NonResonant})
        s.counts[c] = 0;
    s.min_abs_rho_case_ii = std::numeric_limits<double>::infinity();
    const auto& m = box.modes();
    std::vector<double> vv(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) vv[i] = V.value(m[i]);
    // canonical representatives: n1 <= n3 and n2 <= n4
    for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t c = a; c < m.size(); ++c) {
            const Freq sum = m[a] + m[c];
            const std::int64_t sq = m[a].norm2() + m[c].norm2();
            const double va = vv[a] + vv[c];
            for (std::size_t b = 0; b < m.size(); ++b) {
                const Freq d = sum - m[b];
                if (d < m[b]) continue;
                const auto di = box.find(d);
                if (di < 0) continue;
                const std::int64_t alt = sq - m[b].norm2() - d.norm2();
                const double rho = static_cast<double>(alt) + (va - (vv[b] + vv[static_cast<std::size_t>(di)]));
                const TupleClass cls = class_of(m[a], m[b], m[c], d, rho, alt, p);
                s.counts[cls] += 1;
                if (cls == TupleClass::IPrime_i || cls == TupleClass::IPrime_ii) {
                    s.iprime += 1;
                    s.max_abs_F = std::max(s.max_abs_F, 1.0 / std::abs(rho));
                    if (cls == TupleClass::IPrime_ii) s.min_abs_rho_case_ii = std::min(s.min_abs_rho_case_ii, std::abs(rho));
                }
                if (visit) visit(Tuple4{m[a], m[b], m[c], d, rho, alt, cls});
            }
        }
    return s;
}

}  // namespace nlsv
