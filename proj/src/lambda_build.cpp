#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "nlsv/lambda.hpp"
#include "nlsv/resonance.hpp"

namespace nlsv {

namespace {

// Coordinate k contributes 0 or u_k + w_k (parent side) and u_k or w_k (child side), u_k perpendicular to w_k.
struct Axis {
    Freq u, w;
};

Freq pick(const Axis& a, bool child_side, bool bit) {
    if (child_side) return bit ? a.w : a.u;
    return bit ? a.u + a.w : Freq{0, 0};
}

// generation j (1-based): coordinates k < j on the child side, k >= j on the parent side
GenerationSet product_set(const std::vector<Axis>& ax, Freq c0) {
    const int K = static_cast<int>(ax.size());  // N - 1 coordinates
    const int N = K + 1;
    GenerationSet S;
    S.generations.assign(N, {});
    for (int j = 1; j <= N; ++j) {
        for (std::uint32_t mask = 0; mask < (1u << K); ++mask) {
            Freq n = c0;
            for (int k = 1; k <= K; ++k) n = n + pick(ax[k - 1], k < j, (mask >> (k - 1)) & 1u);
            S.generations[j - 1].push_back(n);
        }
        std::sort(S.generations[j - 1].begin(), S.generations[j - 1].end());
    }
    for (int j = 1; j < N; ++j)
        for (std::uint32_t mask = 0; mask < (1u << K); ++mask) {
            if ((mask >> (j - 1)) & 1u) continue;
            Freq base = c0;
            for (int k = 1; k <= K; ++k)
                if (k != j) base = base + pick(ax[k - 1], k < j, (mask >> (k - 1)) & 1u);
            const Axis& a = ax[j - 1];
            S.families.push_back({base, base + a.u + a.w, base + a.u, base + a.w, j});
        }
    return S;
}

bool disjoint(const GenerationSet& S) {
    std::vector<Freq> all = S.all_modes();
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) == all.end();
}

bool auxiliary_ok(const std::vector<Freq>& m) {
    for (Freq a : m)
        if (a == Freq{0, 0}) return false;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (i == j) continue;
            if (i < j && dot128(m[i], m[j]) == 0) return false;
            if (dot128(m[j] - m[i], m[i]) == 0) return false;
        }
    return true;
}

std::int64_t ceil_formula(long double x) {
    return static_cast<std::int64_t>(std::ceil(x - 1e-12L * std::max(1.0L, x)));
}

struct Search {
    int N;
    std::mt19937_64 rng;
    std::int64_t radius;
    std::size_t budget, nodes = 0;
    std::vector<Axis> ax{};

    // u = g e, w = h e^perp with e primitive and g != h coprime: a non-square rectangle
    // (squares put three rectangles through lattice points of their own grid)
    Axis candidate() {
        std::uniform_int_distribution<std::int64_t> d(-radius, radius);
        std::uniform_int_distribution<std::int64_t> m(1, 4);
        for (;;) {
            const Freq e{d(rng), d(rng)};
            if (e.norm2() * 9 < radius * radius || e.norm2() > radius * radius) continue;
            if (std::gcd(e.x, e.y) != 1) continue;
            const std::int64_t g = m(rng), h = m(rng);
            if (g == h || std::gcd(g, h) != 1) continue;
            return {e * g, rot90(e) * h};
        }
    }

    bool prefix_ok() {
        const GenerationSet S = product_set(ax, {0, 0});
        if (!disjoint(S)) return false;
        VerifyOptions o;
        o.mode = VerifyMode::Base;
        o.auxiliary = false;
        o.spreading = false;
        return verify(S, ConvPotential::zero(), o).all_passed();
    }

    bool extend() {
        if (static_cast<int>(ax.size()) == N - 1) return true;
        for (int tries = 0; tries < 24; ++tries) {
            if (++nodes > budget) throw std::runtime_error("construct_base: search budget exhausted");
            ax.push_back(candidate());
            if (prefix_ok() && extend()) return true;
            ax.pop_back();
        }
        return false;
    }
};

}  // namespace

GenerationSet construct_base(int N, const ConstructOptions& opt) {
    if (N < 2 || N > 7) throw std::invalid_argument("construct_base: N must be in [2, 7]");
    Search s{N, std::mt19937_64(opt.seed), opt.coeff_radius > 0 ? opt.coeff_radius : std::int64_t(40),
             opt.budget};
    while (!s.extend()) {
        // restart from scratch with fresh candidates; the budget bounds the total work
    }
    // offset: 9', 10', no zero mode, growth of the s-sums
    const std::int64_t R = 3 * s.radius;
    std::uniform_int_distribution<std::int64_t> d(-R, R);
    for (;;) {
        if (++s.nodes > s.budget) throw std::runtime_error("construct_base: search budget exhausted");
        GenerationSet S = product_set(s.ax, {d(s.rng), d(s.rng)});
        if (!auxiliary_ok(S.all_modes())) continue;
        if (N >= 5) {
            const GrowthStats g = growth_stats(S, opt.growth_s);
            if (!g.satisfies) continue;
        }
        S.kappa0 = 1;
        return S;
    }
}

GenerationSet blow_up(const GenerationSet& S, std::int64_t C) {
    if (C < 1) throw std::invalid_argument("blow_up: C must be >= 1");
    const std::int64_t lim = (std::int64_t(1) << 62) / C;
    auto sc = [&](Freq n) {
        if (n.x > lim || n.x < -lim || n.y > lim || n.y < -lim) throw std::overflow_error("blow_up: coordinate overflow");
        return n * C;
    };
    GenerationSet out = S;
    for (auto& g : out.generations)
        for (auto& n : g) n = sc(n);
    for (auto& f : out.families) {
        f.p1 = sc(f.p1);
        f.p2 = sc(f.p2);
        f.c1 = sc(f.c1);
        f.c2 = sc(f.c2);
    }
    return out;
}

std::int64_t compute_C1(std::int64_t kappa0, double v_norm) {
    return ceil_formula(static_cast<long double>(kappa0) * kappa0 + 4.0L * v_norm + 1.0L);
}

std::int64_t compute_C2(std::int64_t kappa0, double eta, double v_norm, std::int64_t C1, double radius_bound) {
    return ceil_formula(4.0L * (kappa0 + 2.0L * eta + 8.0L * v_norm + 1.0L) * C1 * static_cast<long double>(radius_bound));
}

CertifyResult certify_full(const GenerationSet& base, const ConvPotential& V, const CertifyOptions& opt) {
    validate_eta(opt.eta);
    CertifyResult r;
    r.kappa0 = kappa0(V);
    r.C1 = compute_C1(r.kappa0, V.hs0_norm());

    r.C2 = compute_C2(r.kappa0, opt.eta, V.hs0_norm(), r.C1, base.max_radius());
    r.set = blow_up(blow_up(base, r.C1), r.C2);
    r.set.kappa0 = r.kappa0;
    r.set.eta = opt.eta;
    VerifyOptions vo;
    vo.mode = VerifyMode::Full;
    vo.cond6_threshold = opt.cond6_threshold;
    r.report = verify(r.set, V, vo);
    r.report.growth = growth_stats(r.set, 2.0);
    return r;
}

}  // namespace nlsv
