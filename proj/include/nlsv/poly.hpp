#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "nlsv/field.hpp"
#include "nlsv/freq.hpp"

namespace nlsv {

struct PolyFactor {
    Freq n;
    bool conj = false;
    auto operator<=>(const PolyFactor&) const = default;
};

// Sorted product of up to six factors. The packed code orders factors by
// (conjugated, x, y), which is the canonical ordering used for like-term collection.
class Monomial {
public:
    static constexpr std::size_t kMax = 6;
    static constexpr std::int64_t kCoordLimit = std::int64_t(1) << 20;

    Monomial() = default;
    explicit Monomial(const std::vector<PolyFactor>& factors);
    static Monomial quartic(Freq n1, Freq n2, Freq n3, Freq n4);  // a1 conj(a2) a3 conj(a4)

    static std::uint64_t encode(PolyFactor f);
    static PolyFactor decode(std::uint64_t code);

    std::size_t degree() const { return deg_; }
    std::uint64_t code(std::size_t i) const { return c_[i]; }
    PolyFactor factor(std::size_t i) const { return decode(c_[i]); }
    std::vector<PolyFactor> factors() const;
    // momentum sum with sign (+ for plain, - for conjugated factors)
    Freq momentum() const;

    Monomial without(std::size_t i) const;
    Monomial times(const Monomial& o) const;
    Monomial conjugated() const;
    std::size_t multiplicity(std::uint64_t code) const;

    bool operator==(const Monomial& o) const;
    bool operator<(const Monomial& o) const;
    std::size_t hash() const;

private:
    std::array<std::uint64_t, kMax> c_{};
    std::uint8_t deg_ = 0;
    void sort();
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct PolyTerm {
    Monomial m;
    cd c;
};

class PolyHamiltonian {
public:
    void add(cd c, const Monomial& m) { terms_.push_back({m, c}); }
    void add(cd c, const std::vector<PolyFactor>& f) { add(c, Monomial(f)); }
    // sort, merge like terms, drop exact zeros
    void finalize();

    const std::vector<PolyTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    cd coefficient(const Monomial& m) const;  // requires finalize()

    PolyHamiltonian conjugated() const;
    // max |c_m - conj(c_{conj m})|: zero for real-valued Hamiltonians
    double reality_defect() const;

    cd evaluate(const AmplitudeField& a) const;
    // X_H(a)_n = 2i dH/d(conj a_n)
    AmplitudeField vector_field(const AmplitudeField& a) const;

    std::string to_jsonl() const;

    friend PolyHamiltonian operator+(const PolyHamiltonian& a, const PolyHamiltonian& b);
    friend PolyHamiltonian operator*(cd s, const PolyHamiltonian& a);

private:
    std::vector<PolyTerm> terms_;
};

// {H,F} = 2i sum_n (dH/da_n dF/dconj(a_n) - dH/dconj(a_n) dF/da_n)
PolyHamiltonian poisson_bracket(const PolyHamiltonian& H, const PolyHamiltonian& F);

}  // namespace nlsv
