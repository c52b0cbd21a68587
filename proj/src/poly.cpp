#include "nlsv/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "nlsv/json_io.hpp"

namespace nlsv {

std::uint64_t Monomial::encode(PolyFactor f) {
    if (f.n.x <= -kCoordLimit || f.n.x >= kCoordLimit || f.n.y <= -kCoordLimit || f.n.y >= kCoordLimit)
        throw std::invalid_argument("monomial factor outside the encodable range: " + to_string(f.n));
    return (std::uint64_t(f.conj) << 42) | (std::uint64_t(f.n.x + kCoordLimit) << 21) |
           std::uint64_t(f.n.y + kCoordLimit);
}

PolyFactor Monomial::decode(std::uint64_t c) {
    const std::uint64_t mask = (std::uint64_t(1) << 21) - 1;
    return {{static_cast<std::int64_t>((c >> 21) & mask) - kCoordLimit,
             static_cast<std::int64_t>(c & mask) - kCoordLimit},
            ((c >> 42) & 1) != 0};
}

Monomial::Monomial(const std::vector<PolyFactor>& factors) {
    if (factors.size() > kMax) throw std::invalid_argument("monomial degree exceeds 6");
    deg_ = static_cast<std::uint8_t>(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) c_[i] = encode(factors[i]);
    sort();
}

Monomial Monomial::quartic(Freq n1, Freq n2, Freq n3, Freq n4) {
    return Monomial({{n1, false}, {n2, true}, {n3, false}, {n4, true}});
}

void Monomial::sort() { std::sort(c_.begin(), c_.begin() + deg_); }

std::vector<PolyFactor> Monomial::factors() const {
    std::vector<PolyFactor> f;
    for (std::size_t i = 0; i < deg_; ++i) f.push_back(decode(c_[i]));
    return f;
}

Freq Monomial::momentum() const {
    Freq s{0, 0};
    for (std::size_t i = 0; i < deg_; ++i) {
        PolyFactor f = decode(c_[i]);
        s = f.conj ? s - f.n : s + f.n;
    }
    return s;
}

Monomial Monomial::without(std::size_t i) const {
    Monomial r;
    for (std::size_t k = 0; k < deg_; ++k)
        if (k != i) r.c_[r.deg_++] = c_[k];
    return r;  // still sorted
}

Monomial Monomial::times(const Monomial& o) const {
    if (deg_ + o.deg_ > kMax) throw std::invalid_argument("monomial degree exceeds 6");
    Monomial r;
    std::merge(c_.begin(), c_.begin() + deg_, o.c_.begin(), o.c_.begin() + o.deg_, r.c_.begin());
    r.deg_ = static_cast<std::uint8_t>(deg_ + o.deg_);
    return r;
}

Monomial Monomial::conjugated() const {
    Monomial r = *this;
    for (std::size_t i = 0; i < deg_; ++i) r.c_[i] ^= std::uint64_t(1) << 42;
    r.sort();
    return r;
}

std::size_t Monomial::multiplicity(std::uint64_t code) const {
    return static_cast<std::size_t>(std::count(c_.begin(), c_.begin() + deg_, code));
}

bool Monomial::operator==(const Monomial& o) const {
    return deg_ == o.deg_ && std::equal(c_.begin(), c_.begin() + deg_, o.c_.begin());
}

bool Monomial::operator<(const Monomial& o) const {
    if (deg_ != o.deg_) return deg_ < o.deg_;
    return std::lexicographical_compare(c_.begin(), c_.begin() + deg_, o.c_.begin(), o.c_.begin() + o.deg_);
}

std::size_t Monomial::hash() const {
    std::uint64_t h = 0x243F6A8885A308D3ULL ^ deg_;
    for (std::size_t i = 0; i < deg_; ++i) {
        h ^= c_[i] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h *= 0xBF58476D1CE4E5B9ULL;
        h ^= h >> 31;
    }
    return static_cast<std::size_t>(h);
}

void PolyHamiltonian::finalize() {
    std::sort(terms_.begin(), terms_.end(), [](const PolyTerm& a, const PolyTerm& b) { return a.m < b.m; });
    std::vector<PolyTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!out.empty() && out.back().m == t.m) out.back().c += t.c;
        else out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const PolyTerm& t) { return t.c == cd{}; }), out.end());
    terms_ = std::move(out);
}

cd PolyHamiltonian::coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const PolyTerm& t, const Monomial& x) { return t.m < x; });
    return (it != terms_.end() && it->m == m) ? it->c : cd{};
}

PolyHamiltonian PolyHamiltonian::conjugated() const {
    PolyHamiltonian r;
    for (const auto& t : terms_) r.add(std::conj(t.c), t.m.conjugated());
    r.finalize();
    return r;
}

double PolyHamiltonian::reality_defect() const {
    double d = 0;
    for (const auto& t : terms_) d = std::max(d, std::abs(t.c - std::conj(coefficient(t.m.conjugated()))));
    return d;
}

namespace {

cd factor_value(const AmplitudeField& a, PolyFactor f) {
    cd v = a.get(f.n);
    return f.conj ? std::conj(v) : v;
}

cd monomial_value(const AmplitudeField& a, const Monomial& m, std::size_t skip = Monomial::kMax) {
    cd p = 1;
    for (std::size_t i = 0; i < m.degree(); ++i)
        if (i != skip) p *= factor_value(a, m.factor(i));
    return p;
}

}  // namespace

cd PolyHamiltonian::evaluate(const AmplitudeField& a) const {
    cd s = 0;
    for (const auto& t : terms_) s += t.c * monomial_value(a, t.m);
    return s;
}

AmplitudeField PolyHamiltonian::vector_field(const AmplitudeField& a) const {
    std::map<Freq, cd> acc;
    for (const auto& t : terms_)
        for (std::size_t i = 0; i < t.m.degree(); ++i) {
            // each conjugated factor contributes once per occurrence (product rule)
            PolyFactor f = t.m.factor(i);
            if (!f.conj) continue;
            acc[f.n] += t.c * monomial_value(a, t.m, i);
        }
    AmplitudeField out(a.frame());
    for (const auto& [n, v] : acc) out.set(n, cd(0, 2) * v);
    return out;
}

std::string PolyHamiltonian::to_jsonl() const {
    std::ostringstream os;
    for (const auto& t : terms_) {
        json f = json::array();
        for (const auto& x : t.m.factors()) f.push_back({{"n", freq_to_json(x.n)}, {"conj", x.conj}});
        os << json{{"re", t.c.real()}, {"im", t.c.imag()}, {"factors", f}}.dump() << "\n";
    }
    return os.str();
}

PolyHamiltonian operator+(const PolyHamiltonian& a, const PolyHamiltonian& b) {
    PolyHamiltonian r = a;
    r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
    r.finalize();
    return r;
}

PolyHamiltonian operator*(cd s, const PolyHamiltonian& a) {
    PolyHamiltonian r;
    for (const auto& t : a.terms_) r.add(s * t.c, t.m);
    r.finalize();
    return r;
}

PolyHamiltonian poisson_bracket(const PolyHamiltonian& H, const PolyHamiltonian& F) {
    // variable -> (term index, position of one occurrence)
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint32_t, std::uint8_t>>> index;
    const auto& ft = F.terms();
    for (std::uint32_t j = 0; j < ft.size(); ++j)
        for (std::size_t i = 0; i < ft[j].m.degree(); ++i) {
            if (i > 0 && ft[j].m.code(i) == ft[j].m.code(i - 1)) continue;
            index[ft[j].m.code(i)].push_back({j, static_cast<std::uint8_t>(i)});
        }
    std::unordered_map<Monomial, cd, MonomialHash> acc;
    const std::uint64_t flip = std::uint64_t(1) << 42;
    for (const auto& h : H.terms())
        for (std::size_t i = 0; i < h.m.degree(); ++i) {
            const std::uint64_t v = h.m.code(i);
            if (i > 0 && v == h.m.code(i - 1)) continue;
            auto it = index.find(v ^ flip);
            if (it == index.end()) continue;
            const double kh = static_cast<double>(h.m.multiplicity(v));
            const Monomial dh = h.m.without(i);
            // d/da on H pairs with d/dconj(a) on F (+); d/dconj(a) on H with d/da on F (-)
            const double sign = (v & flip) ? -1.0 : 1.0;
            for (const auto& [j, pos] : it->second) {
                const auto& f = ft[j];
                const double kf = static_cast<double>(f.m.multiplicity(v ^ flip));
                acc[dh.times(f.m.without(pos))] += cd(0, 2) * sign * kh * kf * h.c * f.c;
            }
        }
    PolyHamiltonian r;
    for (const auto& [m, c] : acc) r.add(c, m);
    r.finalize();
    return r;
}

}  // namespace nlsv
