#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "nlsv/lambda.hpp"
#include "nlsv/resonance.hpp"

using namespace nlsv;

namespace {

const GenerationSet& base3() {
    static const GenerationSet s = construct_base(3);
    return s;
}

VerifyOptions base_opts(int threshold = 2) {
    VerifyOptions o;
    o.mode = VerifyMode::Base;
    o.cond6_threshold = threshold;
    return o;
}

bool fails_with_witness(const ConditionReport& r, const std::string& id) {
    const auto& c = r.get(id);
    return c.checked && !c.passed && c.violations > 0 && !c.witness.empty();
}

void remove_mode(GenerationSet& s, Freq n) {
    for (auto& g : s.generations) g.erase(std::remove(g.begin(), g.end(), n), g.end());
    s.families.erase(std::remove_if(s.families.begin(), s.families.end(),
                                    [&](const Family& f) { return f.p1 == n || f.p2 == n || f.c1 == n || f.c2 == n; }),
                     s.families.end());
}

// rectangles through the external mode x with two vertices in Lambda, by definition
std::size_t brute_count(const std::vector<Freq>& L, const std::set<Freq>& in, Freq x) {
    if (in.count(x)) return 0;
    std::set<std::array<Freq, 4>> rects;
    auto add = [&](Freq a, Freq b, Freq c, Freq d) {
        std::array<Freq, 4> k{a, b, c, d};
        std::sort(k.begin(), k.end());
        rects.insert(k);
    };
    for (std::size_t i = 0; i < L.size(); ++i)
        for (std::size_t j = i + 1; j < L.size(); ++j) {
            const Freq p = L[i], q = L[j];
            if (dot(x - p, q - p) == 0) add(x, p, q, x + q - p);
            if (dot(x - q, p - q) == 0) add(x, q, p, x + p - q);
            if (dot(p - x, q - x) == 0) add(x, p, q, p + q - x);
        }
    return rects.size();
}

}  // namespace

TEST_CASE("lattice points on circles agree with a direct search") {
    for (std::uint64_t n = 0; n <= 3000; ++n) {
        std::vector<Freq> ref;
        const auto r = static_cast<std::int64_t>(std::sqrt(double(n))) + 1;
        for (std::int64_t x = -r; x <= r; ++x)
            for (std::int64_t y = -r; y <= r; ++y)
                if (std::uint64_t(x * x + y * y) == n) ref.push_back({x, y});
        REQUIRE(lattice_points_on_circle(n) == ref);
    }
    // large composite: 2 * 5^3 * 13^2 * 17 * 29^2 and a prime 1 mod 4 beyond 2^32
    for (std::uint64_t n : {std::uint64_t(2) * 125 * 169 * 17 * 841, std::uint64_t(4294967357)}) {
        auto pts = lattice_points_on_circle(n);
        CHECK_FALSE(pts.empty());
        std::set<Freq> uniq(pts.begin(), pts.end());
        CHECK(uniq.size() == pts.size());
        for (Freq p : pts) CHECK(std::uint64_t(p.x * p.x + p.y * p.y) == n);
        std::size_t direct = 0;
        const auto r = static_cast<std::int64_t>(std::sqrt(double(n)));
        for (std::int64_t x = -r - 1; x <= r + 1; ++x) {
            const std::int64_t y2 = std::int64_t(n) - x * x;
            if (y2 < 0) continue;
            auto y = static_cast<std::int64_t>(std::llround(std::sqrt(double(y2))));
            while (y * y > y2) --y;
            while ((y + 1) * (y + 1) <= y2) ++y;
            if (y * y == y2) direct += y == 0 ? 1 : 2;
        }
        CHECK(pts.size() == direct);
    }
    CHECK(lattice_points_on_circle(3).empty());
    CHECK(lattice_points_on_circle(21).empty());
}

TEST_CASE("construct_base: sizes, structure and the scale-invariant conditions") {
    for (int N : {2, 3, 4}) {
        auto S = construct_base(N);
        REQUIRE(S.N() == N);
        for (const auto& g : S.generations) CHECK(g.size() == (std::size_t(1) << (N - 1)));
        CHECK(S.families.size() == (std::size_t(1) << (N - 2)) * std::size_t(N - 1));
        auto rep = verify(S, ConvPotential::zero(), base_opts());
        CHECK(rep.structural_ok);
        for (const char* id : {"1", "2", "3", "4", "5", "9'", "10'"}) {
            INFO("N = " << N << " condition " << id);
            CHECK(rep.get(id).passed);
        }
        CHECK_FALSE(rep.get("7").checked);
    }
    CHECK_THROWS(construct_base(1));
    CHECK_THROWS(construct_base(8));
}

TEST_CASE("construct_base is deterministic in the seed") {
    ConstructOptions a, b;
    a.seed = b.seed = 7;
    CHECK(to_json(construct_base(3, a)) == to_json(construct_base(3, b)));
    ConstructOptions c;
    c.seed = 8;
    CHECK(to_json(construct_base(3, a)) != to_json(construct_base(3, c)));
}

TEST_CASE("budget exhaustion is an error, never a partial set") {
    ConstructOptions o;
    o.budget = 3;
    CHECK_THROWS_AS(construct_base(5, o), std::runtime_error);
}

TEST_CASE("blow-up: identity at C = 1, conditions preserved at C = 3") {
    const auto& S = base3();
    CHECK(to_json(blow_up(S, 1)) == to_json(S));
    auto T = blow_up(S, 3);
    for (std::size_t j = 0; j < S.generations.size(); ++j)
        for (std::size_t i = 0; i < S.generations[j].size(); ++i) CHECK(T.generations[j][i] == S.generations[j][i] * 3);
    auto r1 = verify(S, ConvPotential::zero(), base_opts());
    auto r3 = verify(T, ConvPotential::zero(), base_opts());
    for (const char* id : {"1", "2", "3", "4", "5", "6", "9'", "10'"}) CHECK(r1.get(id).passed == r3.get(id).passed);
    for (const char* id : {"1", "2", "3", "4", "5", "9'", "10'"}) CHECK(r1.get(id).violations == r3.get(id).violations);
    // rational crossing points of the old set become lattice points: the count can only grow
    CHECK(r3.get("6").violations >= r1.get("6").violations);
    for (const auto& f : T.families) CHECK(small_divisor(f.p1, f.c1, f.p2, f.c2, ConvPotential::zero()) == 0);
    CHECK_THROWS(blow_up(S, 0));
}

TEST_CASE("C1 and C2") {
    CHECK(compute_C1(10, 1) == 105);
    CHECK(compute_C1(0, 0) == 1);
    CHECK(compute_C1(1, 0.25) == 3);
    CHECK(compute_C2(0, 0.3, 0, 1, 5) == 32);
    CHECK(compute_C2(0, 0, 0, 1, 5) == 20);
}

TEST_CASE("growth statistics against direct sums") {
    // one mode per generation, |n| doubling
    GenerationSet d;
    for (int j = 0; j < 5; ++j) d.generations.push_back({Freq{std::int64_t(3) << j, std::int64_t(4) << j}});
    auto g = growth_stats(d, 2);
    for (int j = 0; j + 1 < 5; ++j) CHECK(g.S[j + 1] / g.S[j] == 16);
    CHECK(g.ratio_defined);
    CHECK(g.ratio == 16);  // S_4 / S_3
    CHECK(g.bound == doctest::Approx(1.0));
    CHECK(g.exact[0] == "625");

    const auto S = construct_base(4);
    auto gs = growth_stats(S, 2);
    for (int j = 0; j < 4; ++j) {
        __int128 acc = 0;
        for (Freq n : S.generations[j]) acc += __int128(n.norm2()) * n.norm2();
        CHECK(gs.S[j] == static_cast<long double>(acc));
    }
    // rotation by 90 degrees
    GenerationSet R = S;
    for (auto& gen : R.generations)
        for (auto& n : gen) n = rot90(n);
    auto gr = growth_stats(R, 2);
    CHECK(gr.exact == gs.exact);

    CHECK_FALSE(growth_stats(base3(), 2).ratio_defined);
    CHECK_THROWS(growth_stats(S, 1));
    auto gf = growth_stats(S, 2.5);
    CHECK(gf.exact.empty());
    CHECK(gf.S[0] > 0);
}

TEST_CASE("set json round trip and unknown keys") {
    const auto& S = base3();
    auto j = to_json(S);
    auto T = generation_set_from_json(j);
    CHECK(to_json(T) == j);
    j["extra"] = 1;
    CHECK_THROWS(generation_set_from_json(j));
}

TEST_CASE("structural errors are reported apart from conditions") {
    GenerationSet S = base3();
    S.generations[1].push_back(S.generations[0][0]);
    auto rep = verify(S, ConvPotential::zero(), base_opts());
    CHECK_FALSE(rep.structural_ok);
    CHECK_FALSE(rep.all_passed());
    for (const auto& c : rep.conditions) CHECK_FALSE(c.checked);

    GenerationSet F = base3();
    F.families[0].c1 = F.families[0].c1 + Freq{1, 0};
    CHECK_FALSE(verify(F, ConvPotential::zero(), base_opts()).structural_ok);
}

// ---- one injected violation per condition

TEST_CASE("mutation 1: a rectangle with a missing fourth vertex") {
    GenerationSet S = base3();
    const Family f = S.families.back();
    remove_mode(S, f.c2);
    auto rep = verify(S, ConvPotential::zero(), base_opts());
    REQUIRE(rep.structural_ok);
    CHECK(fails_with_witness(rep, "1"));
    CHECK(rep.get("1").witness.find(to_string(f.c2)) != std::string::npos);
}

TEST_CASE("mutation 2: a parent without a family") {
    GenerationSet S = base3();
    const Family f = S.families.back();  // generation 2 -> 3
    remove_mode(S, f.c1);
    remove_mode(S, f.c2);
    auto rep = verify(S, ConvPotential::zero(), base_opts());
    REQUIRE(rep.structural_ok);
    CHECK(fails_with_witness(rep, "2"));
    const auto& w = rep.get("2").witness;
    CHECK((w.find(to_string(f.p1)) != std::string::npos || w.find(to_string(f.p2)) != std::string::npos));
}

TEST_CASE("mutation 3: a child without parents") {
    GenerationSet S = base3();
    const Freq orphan{100003, 7};
    S.generations[2].push_back(orphan);
    auto rep = verify(S, ConvPotential::zero(), base_opts());
    REQUIRE(rep.structural_ok);
    CHECK(fails_with_witness(rep, "3"));
    CHECK(rep.get("3").witness.find(to_string(orphan)) != std::string::npos);
}

TEST_CASE("mutation 4: spouse equal to sibling") {
    GenerationSet S;
    S.generations = {{{3, 4}, {-3, -4}}, {{5, 0}, {-5, 0}}, {{4, -3}, {-4, 3}}};
    S.families = {{{3, 4}, {-3, -4}, {5, 0}, {-5, 0}, 1}, {{5, 0}, {-5, 0}, {4, -3}, {-4, 3}, 2}};
    auto rep = verify(S, ConvPotential::zero(), base_opts());
    REQUIRE(rep.structural_ok);
    CHECK(fails_with_witness(rep, "4"));
}

TEST_CASE("mutation 5: an extra rectangle that is not a family") {
    GenerationSet S = base3();
    const Freq o{5000, 3000};
    const Freq a{700, 11}, b{11, -700};
    S.generations[0].push_back(o + a);
    S.generations[0].push_back(o - a);
    S.generations[2].push_back(o + b);
    S.generations[2].push_back(o - b);
    auto rep = verify(S, ConvPotential::zero(), base_opts());
    REQUIRE(rep.structural_ok);
    CHECK(fails_with_witness(rep, "5"));
    CHECK(rep.get("5").witness.find(to_string(o + a)) != std::string::npos);
}

TEST_CASE("mutation 6: three rectangles through one external mode") {
    GenerationSet S;
    S.generations = {{{3, 1}, {-1, 3}}, {{5, 2}, {-2, 5}}, {{7, 3}, {-3, 7}}};
    auto rep = verify(S, ConvPotential::zero(), base_opts());
    REQUIRE(rep.structural_ok);
    CHECK(fails_with_witness(rep, "6"));
    bool origin = false;
    for (const auto& p : rep.get("6").detail["points"]) origin = origin || (p[0] == 0 && p[1] == 0);
    CHECK(origin);
    CHECK(rep.get("6").detail["max_rectangles_at_external_mode"].get<std::size_t>() >= 3);
}

TEST_CASE("mutation 7: a resonant tuple with one low mode") {
    GenerationSet S;
    S.kappa0 = 2;
    S.generations = {{{10, 0}, {10, 10}, {0, 10}}};
    VerifyOptions o;
    o.mode = VerifyMode::Full;
    auto rep = verify(S, ConvPotential::zero(), o);
    REQUIRE(rep.structural_ok);
    CHECK(fails_with_witness(rep, "7"));
    CHECK(rep.get("7").witness.find("(0,0)") != std::string::npos);
}

TEST_CASE("mutation 8: two Lambda modes, a low mode and an external one") {
    GenerationSet S;
    S.kappa0 = 2;
    S.generations = {{{11, 0}, {11, 10}}};
    VerifyOptions o;
    o.mode = VerifyMode::Full;
    auto rep = verify(S, ConvPotential::zero(), o);
    REQUIRE(rep.structural_ok);
    CHECK(fails_with_witness(rep, "8"));
}

TEST_CASE("mutation 9': orthogonal pair") {
    GenerationSet S;
    S.generations = {{{1, 0}, {0, 1}}};
    auto rep = verify(S, ConvPotential::zero(), base_opts());
    CHECK(fails_with_witness(rep, "9'"));
}

TEST_CASE("mutation 10': (n2 - n1).n1 = 0") {
    GenerationSet S;
    S.generations = {{{3, 4}}, {{7, 1}}};
    auto rep = verify(S, ConvPotential::zero(), base_opts());
    CHECK(fails_with_witness(rep, "10'"));
    CHECK(rep.get("9'").passed);
}

TEST_CASE("condition 6 against a brute-force scan of the box |x| <= 3 max|Lambda|") {
    const auto& S = base3();
    auto rep = verify(S, ConvPotential::zero(), base_opts());
    const auto& c6 = rep.get("6");
    std::set<Freq> flagged;
    for (const auto& p : c6.detail["points"]) flagged.insert({p[0].get<std::int64_t>(), p[1].get<std::int64_t>()});
    REQUIRE(flagged.size() == c6.violations);  // fewer than 2000 at N = 3
    const auto L = S.all_modes();
    const std::set<Freq> in(L.begin(), L.end());
    // soundness: every flagged mode really has more than two rectangles
    for (Freq x : flagged) CHECK(brute_count(L, in, x) > 2);
    // completeness inside the box
    const auto R = static_cast<std::int64_t>(std::ceil(3 * S.max_radius()));
    std::size_t missed = 0, maxc = 0;
    for (std::int64_t x = -R; x <= R; ++x)
        for (std::int64_t y = -R; y <= R; ++y) {
            const std::size_t k = brute_count(L, in, {x, y});
            maxc = std::max(maxc, k);
            if (k > 2 && !flagged.count({x, y})) ++missed;
        }
    CHECK(missed == 0);
    CHECK(maxc <= c6.detail["max_rectangles_at_external_mode"].get<std::size_t>());
}

TEST_CASE("certify_full on N = 3 with the sample potential") {
    auto V = ConvPotential::sample_decaying();
    auto r = certify_full(base3(), V);
    CHECK(r.kappa0 == 2);
    CHECK(r.C1 == compute_C1(2, V.hs0_norm()));
    CHECK(r.set.kappa0 == 2);
    for (const auto& g : r.set.generations) CHECK(g.size() == 4);
    for (const char* id : {"1", "2", "3", "4", "5", "7", "8", "9'", "10'"}) {
        INFO("condition " << id);
        CHECK(r.report.get(id).passed);
    }
    CHECK(r.report.get("6").checked);
}
