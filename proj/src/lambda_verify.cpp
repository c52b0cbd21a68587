#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nlsv/lambda.hpp"
#include "nlsv/resonance.hpp"

namespace nlsv {

std::vector<Freq> GenerationSet::all_modes() const {
    std::vector<Freq> out;
    for (const auto& g : generations) out.insert(out.end(), g.begin(), g.end());
    return out;
}

double GenerationSet::max_radius() const {
    std::int64_t m = 0;
    for (const auto& g : generations)
        for (Freq n : g) m = std::max(m, n.norm2());
    return std::sqrt(static_cast<double>(m));
}

double GenerationSet::min_radius() const {
    std::int64_t m = -1;
    for (const auto& g : generations)
        for (Freq n : g) m = m < 0 ? n.norm2() : std::min(m, n.norm2());
    return m < 0 ? 0.0 : std::sqrt(static_cast<double>(m));
}

json to_json(const GenerationSet& s) {
    json gens = json::array();
    for (const auto& g : s.generations) {
        json a = json::array();
        for (Freq n : g) a.push_back(freq_to_json(n));
        gens.push_back(a);
    }
    json fams = json::array();
    for (const auto& f : s.families)
        fams.push_back({{"p", {freq_to_json(f.p1), freq_to_json(f.p2)}},
                        {"c", {freq_to_json(f.c1), freq_to_json(f.c2)}},
                        {"j", f.j}});
    return {{"N", s.N()}, {"kappa0", s.kappa0}, {"eta", s.eta}, {"generations", gens}, {"families", fams}};
}

GenerationSet generation_set_from_json(const json& j) {
    only_keys(j, {"N", "kappa0", "eta", "generations", "families"}, "generation set");
    GenerationSet s;
    s.kappa0 = j.at("kappa0").get<std::int64_t>();
    s.eta = j.at("eta").get<double>();
    for (const auto& g : j.at("generations")) {
        std::vector<Freq> v;
        for (const auto& n : g) v.push_back(freq_from_json(n));
        s.generations.push_back(std::move(v));
    }
    if (j.at("N").get<int>() != s.N()) throw std::invalid_argument("generation set: N does not match the generation list");
    for (const auto& f : j.at("families")) {
        only_keys(f, {"p", "c", "j"}, "family");
        const auto& p = f.at("p");
        const auto& c = f.at("c");
        if (p.size() != 2 || c.size() != 2) throw std::invalid_argument("family needs two parents and two children");
        s.families.push_back({freq_from_json(p[0]), freq_from_json(p[1]), freq_from_json(c[0]), freq_from_json(c[1]),
                              f.at("j").get<int>()});
    }
    return s;
}

namespace {

std::string tuple_str(Freq a, Freq b, Freq c, Freq d) {
    return "(" + to_string(a) + ", " + to_string(b) + ", " + to_string(c) + ", " + to_string(d) + ")";
}

std::string i128_str(i128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    std::string s;
    while (v != 0) {
        const int d = static_cast<int>(v % 10);
        s.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
        v /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

i128 iabs(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
    a = iabs(a);
    b = iabs(b);
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// ---- lattice points on circles: X^2 + Y^2 = n via Gaussian factorization

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    for (b %= m; e; e >>= 1, b = mulmod(b, b, m))
        if (e & 1) r = mulmod(r, b, m);
    return r;
}

bool is_prime64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (n % p == 0) return n == p;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < s && comp; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) comp = false;
        }
        if (comp) return false;
    }
    return true;
}

u64 rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor(u64 n, std::map<u64, int>& out) {
    if (n == 1) return;
    if (is_prime64(n)) {
        ++out[n];
        return;
    }
    const u64 d = rho(n);
    factor(d, out);
    factor(n / d, out);
}

struct Gi {
    i128 re = 0, im = 0;
};
Gi gmul(Gi a, Gi b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

// pi with |pi|^2 = p for a prime p = 1 mod 4
Gi gaussian_prime(u64 p) {
    u64 x = 0;
    for (u64 c = 2;; ++c) {
        x = powmod(c, (p - 1) / 4, p);
        if (mulmod(x, x, p) == p - 1) break;
    }
    // Euclid on (p, x) until the remainder drops below sqrt(p)
    u64 a = p, b = x;
    while (u128(b) * b > p) {
        const u64 t = a % b;
        a = b;
        b = t;
    }
    const u64 c2 = p - b * b;
    const u64 c = static_cast<u64>(std::llround(std::sqrt(static_cast<long double>(c2))));
    return {static_cast<i128>(b), static_cast<i128>(c)};
}

struct Pt {
    i128 x = 0, y = 0;
    bool operator<(const Pt& o) const { return x != o.x ? x < o.x : y < o.y; }
    bool operator==(const Pt& o) const { return x == o.x && y == o.y; }
};

// all (X, Y) with X^2 + Y^2 = n
std::vector<Pt> two_squares(u64 n) {
    std::map<u64, int> f;
    factor(n, f);
    std::vector<Gi> zs{{1, 0}};
    for (auto [p, e] : f) {
        std::vector<Gi> opts;
        if (p == 2) {
            Gi g{1, 0};
            for (int i = 0; i < e; ++i) g = gmul(g, {1, 1});
            opts.push_back(g);
        } else if (p % 4 == 3) {
            if (e % 2 != 0) return {};
            i128 q = 1;
            for (int i = 0; i < e / 2; ++i) q *= p;
            opts.push_back({q, 0});
        } else {
            const Gi pi = gaussian_prime(p), pc{pi.re, -pi.im};
            for (int a = 0; a <= e; ++a) {
                Gi g{1, 0};
                for (int i = 0; i < a; ++i) g = gmul(g, pi);
                for (int i = a; i < e; ++i) g = gmul(g, pc);
                opts.push_back(g);
            }
        }
        std::vector<Gi> next;
        for (const Gi& z : zs)
            for (const Gi& o : opts) next.push_back(gmul(z, o));
        zs = std::move(next);
    }
    std::vector<Pt> out;
    for (Gi z : zs)
        for (int k = 0; k < 4; ++k) {
            out.push_back({z.re, z.im});
            z = gmul(z, {0, 1});
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

constexpr std::int64_t kCoordGuard = std::int64_t(1) << 30;

// ---------------------------------------------------------------- context

struct Ctx {
    const GenerationSet& S;
    const ConvPotential& V;
    VerifyMode mode;
    ResonanceParams rp;
    std::vector<Freq> modes;
    FreqMap<int> gen;  // mode -> generation (1-based)

    bool in_lambda(Freq n) const { return gen.count(n) != 0; }
    bool in_lambda(const Pt& p) const {
        if (iabs(p.x) > kCoordGuard * 8 || iabs(p.y) > kCoordGuard * 8) return false;
        return in_lambda(Freq{static_cast<std::int64_t>(p.x), static_cast<std::int64_t>(p.y)});
    }
    bool high(Freq n) const { return !is_low(n, rp.kappa0); }
    bool high(const Pt& p) const { return p.x * p.x + p.y * p.y >= i128(rp.kappa0) * rp.kappa0; }
    // rectangle counts in the tested class: plain rectangles (Base) or high-mode ones (Full)
    bool rect_ok(Freq n) const { return mode == VerifyMode::Base || high(n); }
};

// All rectangles with four vertices in Lambda, one per trivial-permutation orbit:
// diagonals {a, c} and {b, d}.
struct Rect {
    Freq a, c, b, d;
};

std::vector<Rect> rectangles_in(const Ctx& X) {
    struct Key {
        Freq sum;
        std::int64_t len2;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, std::vector<std::pair<Freq, Freq>>> groups;
    const auto& m = X.modes;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            const auto [lo, hi] = std::minmax(m[i], m[j]);
            groups[{lo + hi, (hi - lo).norm2()}].push_back({lo, hi});
        }
    std::vector<Rect> out;
    for (const auto& [k, diags] : groups)
        for (std::size_t i = 0; i < diags.size(); ++i)
            for (std::size_t j = i + 1; j < diags.size(); ++j)
                out.push_back({diags[i].first, diags[i].second, diags[j].first, diags[j].second});
    return out;
}

// nuclear family view of a rectangle: returns j when one diagonal lies in Lambda_j and
// the other in Lambda_{j+1}; 0 otherwise. `parents_first` tells which diagonal are parents.
int family_generation(const Ctx& X, const Rect& r, bool& parents_first) {
    const int ga = X.gen.at(r.a), gc = X.gen.at(r.c), gb = X.gen.at(r.b), gd = X.gen.at(r.d);
    if (ga != gc || gb != gd) return 0;
    if (gb == ga + 1) {
        parents_first = true;
        return ga;
    }
    if (ga == gb + 1) {
        parents_first = false;
        return gb;
    }
    return 0;
}

ConditionResult make(const std::string& id) {
    ConditionResult c;
    c.id = id;
    c.checked = true;
    return c;
}

void violate(ConditionResult& c, const std::string& w) {
    if (c.passed) c.witness = w;
    c.passed = false;
    ++c.violations;
}

// ---------------------------------------------------------------- conditions 1-5

ConditionResult cond1(const Ctx& X) {
    ConditionResult r = make("1");
    const auto& m = X.modes;
    for (Freq b : m)
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == b) continue;
            const Freq ab = m[i] - b;
            for (std::size_t k = i + 1; k < m.size(); ++k) {
                if (m[k] == b) continue;
                if (dot128(ab, m[k] - b) != 0) continue;
                const Freq d = m[i] - b + m[k];
                if (!X.rect_ok(d) || X.in_lambda(d)) continue;
                violate(r, "three vertices " + to_string(m[i]) + ", " + to_string(b) + ", " + to_string(m[k]) +
                               " in Lambda, fourth " + to_string(d) + " missing");
            }
        }
    return r;
}

struct FamilyIndex {
    FreqMap<std::vector<Rect>> as_parent, as_child;  // rect normalised so (a, c) are parents
};

FamilyIndex index_families(const Ctx& X, const std::vector<Rect>& rects, ConditionResult& c5) {
    FamilyIndex fi;
    for (const auto& r : rects) {
        bool pf = true;
        const int j = family_generation(X, r, pf);
        if (j == 0) {
            violate(c5, "rectangle " + tuple_str(r.a, r.b, r.c, r.d) + " is not a nuclear family");
            continue;
        }
        const Rect f = pf ? r : Rect{r.b, r.d, r.a, r.c};
        fi.as_parent[f.a].push_back(f);
        fi.as_parent[f.c].push_back(f);
        fi.as_child[f.b].push_back(f);
        fi.as_child[f.d].push_back(f);
    }
    return fi;
}

ConditionResult cond2(const Ctx& X, const FamilyIndex& fi) {
    ConditionResult r = make("2");
    for (int j = 1; j < X.S.N(); ++j)
        for (Freq n : X.S.generations[j - 1]) {
            auto it = fi.as_parent.find(n);
            const std::size_t k = it == fi.as_parent.end() ? 0 : it->second.size();
            if (k != 1)
                violate(r, "mode " + to_string(n) + " of generation " + std::to_string(j) + " is a parent in " +
                               std::to_string(k) + " nuclear families");
        }
    return r;
}

ConditionResult cond3(const Ctx& X, const FamilyIndex& fi) {
    ConditionResult r = make("3");
    for (int j = 2; j <= X.S.N(); ++j)
        for (Freq n : X.S.generations[j - 1]) {
            auto it = fi.as_child.find(n);
            const std::size_t k = it == fi.as_child.end() ? 0 : it->second.size();
            if (k != 1)
                violate(r, "mode " + to_string(n) + " of generation " + std::to_string(j) + " is a child in " +
                               std::to_string(k) + " nuclear families");
        }
    return r;
}

ConditionResult cond4(const Ctx& X, const FamilyIndex& fi) {
    ConditionResult r = make("4");
    for (Freq n : X.modes) {
        auto ip = fi.as_parent.find(n);
        auto ic = fi.as_child.find(n);
        if (ip == fi.as_parent.end() || ic == fi.as_child.end()) continue;
        for (const auto& f : ip->second) {
            const Freq spouse = f.a == n ? f.c : f.a;
            for (const auto& g : ic->second) {
                const Freq sibling = g.b == n ? g.d : g.b;
                if (spouse == sibling)
                    violate(r, "mode " + to_string(n) + " has spouse = sibling = " + to_string(spouse));
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------- condition 6

struct Line {
    i128 a, b, c;  // a x + b y = c, primitive, (a, b) > 0 lexicographically
    auto operator<=>(const Line&) const = default;
};

struct Circle {
    i128 sx, sy, k;  // |x|^2 - s.x + k = 0
    auto operator<=>(const Circle&) const = default;
};

struct Source {
    bool circle;  // diameter (p, q) / right angle at q towards p
    Freq p, q;
};

struct Curve {
    bool circle;
    Line L{};
    Circle C{};
    std::vector<Source> src;
};

Line make_line(i128 a, i128 b, i128 c) {
    const i128 g = gcd128(gcd128(a, b), c);
    a /= g;
    b /= g;
    c /= g;
    if (a < 0 || (a == 0 && b < 0)) {
        a = -a;
        b = -b;
        c = -c;
    }
    return {a, b, c};
}

// extended gcd on non-negative inputs: returns g with x a + y b = g
i128 extgcd(i128 a, i128 b, i128& x, i128& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    i128 x1, y1;
    const i128 g = extgcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// lattice parametrisation x0 + t u of a line; false when the line has no lattice points
bool lattice_param(const Line& L, Pt& x0, Pt& u) {
    const i128 g = gcd128(L.a, L.b);
    if (L.c % g != 0) return false;
    const i128 a = L.a / g, b = L.b / g, c = L.c / g;
    u = {-b, a};
    if (b == 0) {
        x0 = {c / a, 0};  // a = 1
        return true;
    }
    i128 sa, sb;
    extgcd(iabs(a), iabs(b), sa, sb);
    if (a < 0) sa = -sa;  // sa a + sb' b = 1
    const i128 mb = iabs(b);
    i128 x = ((c % mb) * (sa % mb)) % mb;
    if (x < 0) x += mb;
    const i128 rem = c - a * x;
    x0 = {x, rem / b};
    return true;
}

void line_line(const Line& P, const Line& Q, std::vector<Pt>& out) {
    const i128 det = P.a * Q.b - Q.a * P.b;
    if (det == 0) return;
    const i128 nx = P.c * Q.b - Q.c * P.b;
    const i128 ny = P.a * Q.c - Q.a * P.c;
    if (nx % det != 0 || ny % det != 0) return;
    out.push_back({nx / det, ny / det});
}

void line_circle(const Line& L, const Circle& C, std::vector<Pt>& out) {
    Pt x0, u;
    if (!lattice_param(L, x0, u)) return;
    const i128 uu = u.x * u.x + u.y * u.y;
    // move x0 next to the foot of the perpendicular from the centre s/2
    const long double num = static_cast<long double>(C.sx - 2 * x0.x) * static_cast<long double>(u.x) +
                            static_cast<long double>(C.sy - 2 * x0.y) * static_cast<long double>(u.y);
    const i128 t0 = static_cast<i128>(std::llround(num / (2.0L * static_cast<long double>(uu))));
    const Pt x1{x0.x + t0 * u.x, x0.y + t0 * u.y};
    auto value = [&](i128 t) {
        const i128 X = x1.x + t * u.x, Y = x1.y + t * u.y;
        return X * X + Y * Y - C.sx * X - C.sy * Y + C.k;
    };
    // A t^2 + B t + C0 in long double to locate roots, exact check afterwards
    const long double A = static_cast<long double>(uu);
    const long double B = static_cast<long double>((2 * x1.x - C.sx) * u.x + (2 * x1.y - C.sy) * u.y);
    const long double C0 = static_cast<long double>(value(0));
    const long double disc = B * B - 4 * A * C0;
    if (disc < -1e-6L * (B * B + std::fabs(4 * A * C0))) return;
    const long double sq = std::sqrt(std::max(disc, 0.0L));
    std::set<i128> tried;
    for (long double root : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)}) {
        const i128 base = static_cast<i128>(std::floor(root));
        for (i128 t = base - 1; t <= base + 2; ++t) {
            if (!tried.insert(t).second) continue;
            if (value(t) == 0) out.push_back({x1.x + t * u.x, x1.y + t * u.y});
        }
    }
}

void circle_circle(const Circle& P, const Circle& Q, std::vector<Pt>& out) {
    const i128 a = Q.sx - P.sx, b = Q.sy - P.sy;
    if (a == 0 && b == 0) return;  // concentric, distinct
    line_circle(make_line(a, b, Q.k - P.k), P, out);
}

void intersect(const Curve& A, const Curve& B, std::vector<Pt>& out) {
    if (!A.circle && !B.circle) line_line(A.L, B.L, out);
    else if (!A.circle) line_circle(A.L, B.C, out);
    else if (!B.circle) line_circle(B.L, A.C, out);
    else circle_circle(A.C, B.C, out);
}

using RectKey = std::array<Pt, 4>;

// distinct rectangles (exactly two Lambda vertices not required) through x from the sources
std::size_t count_at(const Ctx& X, const Pt& x, const std::vector<const Curve*>& curves, std::string* w) {
    if (X.in_lambda(x)) return 0;
    if (X.mode == VerifyMode::Full && !X.high(x)) return 0;
    std::set<RectKey> keys;
    for (const Curve* c : curves)
        for (const auto& s : c->src) {
            const Pt p{s.p.x, s.p.y}, q{s.q.x, s.q.y};
            Pt m;
            if (s.circle) m = {p.x + q.x - x.x, p.y + q.y - x.y};
            else m = {x.x + p.x - q.x, x.y + p.y - q.y};
            if (X.mode == VerifyMode::Full && !X.high(m)) continue;
            RectKey k{x, p, q, m};
            std::sort(k.begin(), k.end());
            if (keys.insert(k).second && w) {
                std::ostringstream os;
                os << (keys.size() > 1 ? "; " : "") << "{(" << i128_str(x.x) << "," << i128_str(x.y) << "), "
                   << to_string(s.p) << ", " << to_string(s.q) << ", (" << i128_str(m.x) << "," << i128_str(m.y)
                   << ")}";
                *w += os.str();
            }
        }
    return keys.size();
}

ConditionResult cond6(const Ctx& X, int threshold) {
    ConditionResult r = make("6");
    std::map<Line, std::vector<Source>> lines;
    std::map<Circle, std::vector<Source>> circles;
    const auto& m = X.modes;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (i == j) continue;
            const Freq p = m[i], q = m[j];
            // right angle at q: (x - q).(p - q) = 0
            const i128 a = p.x - q.x, b = p.y - q.y;
            lines[make_line(a, b, a * q.x + b * q.y)].push_back({false, p, q});
            if (i < j) circles[{i128(p.x) + q.x, i128(p.y) + q.y, dot128(p, q)}].push_back({true, p, q});
        }
    std::vector<Curve> curves;
    curves.reserve(lines.size() + circles.size());
    for (auto& [L, s] : lines) curves.push_back({false, L, {}, std::move(s)});
    for (auto& [C, s] : circles) curves.push_back({true, {}, C, std::move(s)});

    std::size_t heavy = 0, max_count = 0;
    std::set<Pt> bad;
    auto check_point = [&](const Pt& x, const std::vector<const Curve*>& through) {
        if (bad.count(x)) return;
        std::string w;
        const std::size_t k = count_at(X, x, through, &w);
        max_count = std::max(max_count, k);
        if (k > static_cast<std::size_t>(threshold)) {
            bad.insert(x);
            violate(r, "external mode (" + i128_str(x.x) + "," + i128_str(x.y) + ") lies in " + std::to_string(k) +
                           " rectangles with two modes of Lambda: " + w);
        }
    };

    // a single curve carrying more than `threshold` sources
    for (const auto& c : curves) {
        if (c.src.size() <= static_cast<std::size_t>(threshold)) continue;
        ++heavy;
        std::vector<const Curve*> one{&c};
        if (!c.circle) {
            Pt x0, u;
            if (!lattice_param(c.L, x0, u)) continue;
            const Pt near{c.src[0].q.x, c.src[0].q.y};
            const long double t = (static_cast<long double>(near.x - x0.x) * static_cast<long double>(u.x) +
                                   static_cast<long double>(near.y - x0.y) * static_cast<long double>(u.y)) /
                                  static_cast<long double>(u.x * u.x + u.y * u.y);
            const i128 t0 = static_cast<i128>(std::llround(t));
            for (i128 s = t0 - 4; s <= t0 + 4; ++s) check_point({x0.x + s * u.x, x0.y + s * u.y}, one);
        } else {
            // lattice points of the circle: |2x - s|^2 = |s|^2 - 4k
            const i128 r2 = c.C.sx * c.C.sx + c.C.sy * c.C.sy - 4 * c.C.k;
            if (r2 <= 0) continue;
            for (const Pt& z : two_squares(static_cast<u64>(r2))) {
                const i128 px = z.x + c.C.sx, py = z.y + c.C.sy;
                if (px % 2 != 0 || py % 2 != 0) continue;
                check_point({px / 2, py / 2}, one);
            }
        }
    }

    // pairwise lattice intersections, grouped by point
    std::vector<std::pair<Pt, std::uint32_t>> hits;
    std::vector<Pt> pts;
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t j = i + 1; j < curves.size(); ++j) {
            pts.clear();
            intersect(curves[i], curves[j], pts);
            for (const Pt& p : pts) {
                hits.push_back({p, static_cast<std::uint32_t>(i)});
                hits.push_back({p, static_cast<std::uint32_t>(j)});
            }
        }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        return a.first == b.first ? a.second < b.second : a.first < b.first;
    });
    std::size_t points = 0;
    for (std::size_t i = 0; i < hits.size();) {
        std::size_t k = i;
        std::vector<const Curve*> through;
        while (k < hits.size() && hits[k].first == hits[i].first) {
            if (through.empty() || through.back() != &curves[hits[k].second]) through.push_back(&curves[hits[k].second]);
            ++k;
        }
        ++points;
        std::size_t weight = 0;
        for (const Curve* c : through) weight += c->src.size();
        if (weight > static_cast<std::size_t>(threshold)) check_point(hits[i].first, through);
        else max_count = std::max(max_count, count_at(X, hits[i].first, through, nullptr));
        i = k;
    }
    r.detail = {{"curves", curves.size()},
                {"lines", lines.size()},
                {"circles", circles.size()},
                {"heavy_curves", heavy},
                {"intersection_points", points},
                {"max_rectangles_at_external_mode", max_count},
                {"threshold", threshold}};
    json pl = json::array();
    for (const Pt& x : bad) {
        if (pl.size() == 2000) break;
        pl.push_back({static_cast<std::int64_t>(x.x), static_cast<std::int64_t>(x.y)});
    }
    r.detail["points"] = pl;  // first violating external modes, sorted
    return r;
}

// ---------------------------------------------------------------- conditions 7, 8

ConditionResult cond7(const Ctx& X) {
    ConditionResult r = make("7");
    const auto& m = X.modes;
    const auto& V = X.V;
    auto test = [&](Freq n1, Freq n2, Freq n3, Freq n4) {
        const double rho = small_divisor(n1, n2, n3, n4, V);
        const TupleClass c = class_of(n1, n2, n3, n4, rho, alt_sq(n1, n2, n3, n4), X.rp);
        if (c == TupleClass::A0) {
            std::ostringstream os;
            os << tuple_str(n1, n2, n3, n4) << " is in A0 (rho = " << rho << ")";
            violate(r, os.str());
        }
    };
    if (X.rp.kappa0 > 0)
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t k = i; k < m.size(); ++k)
                for (Freq b : m) {
                    // low mode in a conjugated slot: (a, b, c, l)
                    const Freq l = m[i] - b + m[k];
                    if (is_low(l, X.rp.kappa0)) test(m[i], b, m[k], l);
                }
    // low mode in a plain slot: (l, b, a, d) with l = b + d - a
    if (X.rp.kappa0 > 0)
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t k = i; k < m.size(); ++k)
                for (Freq a : m) {
                    const Freq l = m[i] + m[k] - a;
                    if (is_low(l, X.rp.kappa0)) test(l, m[i], a, m[k]);
                }
    r.detail = {{"kappa0", X.rp.kappa0}, {"eta", X.rp.eta}};
    return r;
}

ConditionResult cond8(const Ctx& X) {
    ConditionResult r = make("8");
    const std::int64_t k0 = X.rp.kappa0;
    std::vector<Freq> low;
    for (std::int64_t x = -k0; x <= k0; ++x)
        for (std::int64_t y = -k0; y <= k0; ++y)
            if (is_low({x, y}, k0)) low.push_back({x, y});
    const auto& m = X.modes;
    static const int sign[4] = {1, -1, 1, -1};
    std::size_t tested = 0;
    for (Freq l : low)
        for (Freq p : m)
            for (Freq q : m)
                for (int slot = 0; slot < 4; ++slot) {
                    // remaining slots receive (l, p, q) in every order
                    int rest[3], t = 0;
                    for (int s = 0; s < 4; ++s)
                        if (s != slot) rest[t++] = s;
                    std::array<Freq, 3> vals{l, p, q};
                    std::sort(vals.begin(), vals.end());
                    do {
                        Freq acc{0, 0};
                        std::array<Freq, 4> tup;
                        for (int u = 0; u < 3; ++u) {
                            tup[rest[u]] = vals[u];
                            acc = acc + vals[u] * sign[rest[u]];
                        }
                        // sign[slot] * x + acc = 0
                        const Freq x = acc * (-sign[slot]);
                        tup[slot] = x;
                        if (X.in_lambda(x)) continue;
                        ++tested;
                        const double rho = small_divisor(tup[0], tup[1], tup[2], tup[3], X.V);
                        const TupleClass c =
                            class_of(tup[0], tup[1], tup[2], tup[3], rho, alt_sq(tup[0], tup[1], tup[2], tup[3]), X.rp);
                        if (c == TupleClass::A0) {
                            std::ostringstream os;
                            os << tuple_str(tup[0], tup[1], tup[2], tup[3]) << " is in A0 with external "
                               << to_string(x) << " (rho = " << rho << ")";
                            violate(r, os.str());
                        }
                    } while (std::next_permutation(vals.begin(), vals.end()));
                }
    r.detail = {{"low_modes", low.size()}, {"tuples_tested", tested}};
    return r;
}

// ---------------------------------------------------------------- 9', 10'

ConditionResult cond9(const Ctx& X) {
    ConditionResult r = make("9'");
    const auto& m = X.modes;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (dot128(m[i], m[j]) == 0)
                violate(r, "|n1 + n2| = |n1 - n2| for n1 = " + to_string(m[i]) + ", n2 = " + to_string(m[j]));
    return r;
}

ConditionResult cond10(const Ctx& X) {
    ConditionResult r = make("10'");
    const auto& m = X.modes;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (i != j && dot128(m[j] - m[i], m[i]) == 0)
                violate(r, "(n2 - n1).n1 = 0 for n1 = " + to_string(m[i]) + ", n2 = " + to_string(m[j]));
    return r;
}

ConditionResult skipped(const std::string& id) {
    ConditionResult c;
    c.id = id;
    c.checked = false;
    return c;
}

}  // namespace

bool ConditionReport::all_passed() const {
    if (!structural_ok) return false;
    for (const auto& c : conditions)
        if (c.checked && !c.passed) return false;
    return true;
}

const ConditionResult& ConditionReport::get(const std::string& id) const {
    for (const auto& c : conditions)
        if (c.id == id) return c;
    throw std::out_of_range("no condition " + id);
}

std::string ConditionReport::text() const {
    std::ostringstream os;
    os << (all_passed() ? "PASS" : "FAIL") << " (" << (mode == VerifyMode::Base ? "base" : "full") << " conditions)\n";
    if (!structural_ok)
        for (const auto& e : structural_errors) os << "structural: " << e << "\n";
    for (const auto& c : conditions) {
        os << "condition " << c.id << ": " << (!c.checked ? "not checked" : c.passed ? "PASS" : "FAIL");
        if (c.checked && !c.passed) os << " (" << c.violations << " violations) witness: " << c.witness;
        os << "\n";
    }
    if (growth) {
        os << "growth s=" << growth->s << ":";
        for (auto v : growth->S) os << " " << static_cast<double>(v);
        if (growth->ratio_defined)
            os << " ratio=" << static_cast<double>(growth->ratio) << " bound=" << static_cast<double>(growth->bound);
        os << "\n";
    }
    return os.str();
}

json to_json(const GrowthStats& g) {
    json S = json::array();
    for (auto v : g.S) S.push_back(static_cast<double>(v));
    json j = {{"s", g.s},
              {"S", S},
              {"S_exact", g.exact},
              {"ratio_defined", g.ratio_defined},
              {"bound", static_cast<double>(g.bound)},
              {"satisfies", g.satisfies},
              {"min_radius", g.min_radius},
              {"max_radius", g.max_radius}};
    j["ratio"] = g.ratio_defined ? json(static_cast<double>(g.ratio)) : json(nullptr);
    return j;
}

json to_json(const ConditionReport& r) {
    json c = json::object();
    for (const auto& x : r.conditions) {
        json e = {{"checked", x.checked}, {"passed", x.passed}, {"violations", x.violations}};
        if (!x.witness.empty()) e["witness"] = x.witness;
        if (!x.detail.is_null()) e["detail"] = x.detail;
        c[x.id] = e;
    }
    json j = {{"mode", r.mode == VerifyMode::Base ? "base" : "full"},
              {"passed", r.all_passed()},
              {"structural_ok", r.structural_ok},
              {"structural_errors", r.structural_errors},
              {"conditions", c}};
    if (r.growth) j["growth"] = to_json(*r.growth);
    return j;
}

ConditionReport verify(const GenerationSet& S, const ConvPotential& V, const VerifyOptions& opt) {
    validate_eta(S.eta);
    ConditionReport rep;
    rep.mode = opt.mode;
    Ctx X{S, V, opt.mode, {S.eta, S.kappa0}, {}, {}};
    auto structural = [&](const std::string& e) {
        rep.structural_ok = false;
        rep.structural_errors.push_back(e);
    };
    if (S.N() < 1) structural("no generations");
    if (S.kappa0 < 0) structural("kappa0 must be non-negative");
    for (int j = 1; j <= S.N(); ++j)
        for (Freq n : S.generations[j - 1]) {
            if (n.x > kCoordGuard || n.x < -kCoordGuard || n.y > kCoordGuard || n.y < -kCoordGuard)
                structural("mode " + to_string(n) + " exceeds the exact-arithmetic range 2^30");
            if (!X.gen.emplace(n, j).second)
                structural("mode " + to_string(n) + " appears in more than one generation slot");
            else X.modes.push_back(n);
            if (opt.mode == VerifyMode::Full && is_low(n, S.kappa0))
                structural("mode " + to_string(n) + " lies in B(kappa0)");
        }
    std::sort(X.modes.begin(), X.modes.end());
    for (const auto& f : S.families) {
        const std::string t = tuple_str(f.p1, f.c1, f.p2, f.c2);
        if (f.j < 1 || f.j >= S.N()) {
            structural("family " + t + " has generation index " + std::to_string(f.j) + " out of range");
            continue;
        }
        auto g = [&](Freq n) { auto it = X.gen.find(n); return it == X.gen.end() ? 0 : it->second; };
        if (g(f.p1) != f.j || g(f.p2) != f.j || g(f.c1) != f.j + 1 || g(f.c2) != f.j + 1)
            structural("family " + t + " does not match generations " + std::to_string(f.j) + "/" +
                       std::to_string(f.j + 1));
        if (f.p1 == f.p2 || f.c1 == f.c2 || f.p1 - f.c1 + f.p2 != f.c2 || alt_sq(f.p1, f.c1, f.p2, f.c2) != 0)
            structural("family " + t + " is not a rectangle");
    }
    const char* ids[] = {"1", "2", "3", "4", "5", "6", "7", "8", "9'", "10'"};
    if (!rep.structural_ok) {
        for (const char* id : ids) rep.conditions.push_back(skipped(id));
        return rep;
    }

    const auto rects = rectangles_in(X);
    ConditionResult c5 = make("5");
    // Full mode counts only rectangles of high modes; Lambda is high by the structural check.
    const FamilyIndex fi = index_families(X, rects, c5);
    rep.conditions.push_back(cond1(X));
    rep.conditions.push_back(cond2(X, fi));
    rep.conditions.push_back(cond3(X, fi));
    rep.conditions.push_back(cond4(X, fi));
    c5.detail = {{"rectangles", rects.size()}};
    rep.conditions.push_back(c5);
    rep.conditions.push_back(opt.spreading ? cond6(X, opt.cond6_threshold) : skipped("6"));
    if (opt.mode == VerifyMode::Full) {
        rep.conditions.push_back(cond7(X));
        rep.conditions.push_back(cond8(X));
    } else {
        rep.conditions.push_back(skipped("7"));
        rep.conditions.push_back(skipped("8"));
    }
    rep.conditions.push_back(opt.auxiliary ? cond9(X) : skipped("9'"));
    rep.conditions.push_back(opt.auxiliary ? cond10(X) : skipped("10'"));
    return rep;
}

GrowthStats growth_stats(const GenerationSet& S, double s) {
    if (!(s > 1)) throw std::invalid_argument("growth_stats: s must be > 1");
    GrowthStats g;
    g.s = s;
    g.min_radius = S.min_radius();
    g.max_radius = S.max_radius();
    const bool integer_s = s == std::floor(s) && s <= 8;
    bool exact_ok = integer_s;
    if (exact_ok) {
        // |n|^{2s} = (|n|^2)^s must fit in i128 for every mode and every sum
        const long double est = std::pow(static_cast<long double>(g.max_radius) * g.max_radius, s) *
                                static_cast<long double>(std::max<std::size_t>(1, S.generations.empty() ? 1 : S.generations[0].size()));
        exact_ok = est < 1e37L;
    }
    for (const auto& gen : S.generations) {
        if (exact_ok) {
            i128 acc = 0;
            for (Freq n : gen) {
                i128 t = 1;
                for (int k = 0; k < static_cast<int>(s); ++k) t *= n.norm2();
                acc += t;
            }
            g.S.push_back(static_cast<long double>(acc));
            g.exact.push_back(i128_str(acc));
        } else {
            long double acc = 0;
            for (Freq n : gen) acc += std::pow(static_cast<long double>(n.norm2()), static_cast<long double>(s));
            g.S.push_back(acc);
        }
    }
    const int N = S.N();
    g.bound = 0.5L * std::pow(2.0L, static_cast<long double>((s - 1) * (N - 4)));
    if (N >= 4 && g.S[2] > 0) {
        g.ratio_defined = true;
        g.ratio = g.S[N - 2] / g.S[2];
        g.satisfies = g.ratio >= g.bound;
    }
    return g;
}

std::vector<Freq> lattice_points_on_circle(std::uint64_t n) {
    if (n == 0) return {Freq{0, 0}};
    std::vector<Freq> out;
    for (const Pt& p : two_squares(n)) out.push_back({static_cast<std::int64_t>(p.x), static_cast<std::int64_t>(p.y)});
    return out;
}

}  // namespace nlsv
