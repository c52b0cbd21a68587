#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlsv/freq.hpp"
#include "nlsv/json_io.hpp"
#include "nlsv/potential.hpp"

namespace nlsv {

// A nuclear family: parents p1, p2 in generation j, children c1, c2 in generation j+1.
// As a tuple it reads (p1, c1, p2, c2).
struct Family {
    Freq p1, p2, c1, c2;
    int j = 1;  // 1-based
};

struct GenerationSet {
    std::vector<std::vector<Freq>> generations;  // Lambda_1 .. Lambda_N
    std::vector<Family> families;
    std::int64_t kappa0 = 0;
    double eta = 0.3;

    int N() const { return static_cast<int>(generations.size()); }
    std::vector<Freq> all_modes() const;
    double max_radius() const;
    double min_radius() const;
};

json to_json(const GenerationSet& s);
GenerationSet generation_set_from_json(const json& j);

// Base: conditions 1'-6' (plain rectangles), 9', 10'.
// Full: conditions 1-8 (rectangles of high modes; 7 and 8 against V), 9', 10'.
enum class VerifyMode { Base, Full };

struct VerifyOptions {
    VerifyMode mode = VerifyMode::Full;
    int cond6_threshold = 2;  // "at most two tuples"
    bool auxiliary = true;    // 9', 10' (not translation invariant)
    bool spreading = true;    // 6 (the expensive one)
};

struct ConditionResult {
    std::string id;  // "1".."8", "9'", "10'"
    bool checked = false;
    bool passed = true;
    std::size_t violations = 0;
    std::string witness;  // first violation, human readable
    json detail;          // condition-specific numbers
};

struct GrowthStats {
    double s = 2;
    std::vector<long double> S;      // S_1 .. S_N
    std::vector<std::string> exact;  // decimal S_j when 2s is an even integer, else empty
    bool ratio_defined = false;
    long double ratio = 0;  // S_{N-1} / S_3
    long double bound = 0;  // 1/2 * 2^{(s-1)(N-4)}
    bool satisfies = false;
    double min_radius = 0, max_radius = 0;
};

struct ConditionReport {
    VerifyMode mode = VerifyMode::Full;
    bool structural_ok = true;
    std::vector<std::string> structural_errors;
    std::vector<ConditionResult> conditions;
    std::optional<GrowthStats> growth;

    bool all_passed() const;
    const ConditionResult& get(const std::string& id) const;
    std::string text() const;
};

json to_json(const GrowthStats& g);
json to_json(const ConditionReport& r);

ConditionReport verify(const GenerationSet& S, const ConvPotential& V, const VerifyOptions& opt = {});

struct ConstructOptions {
    std::uint64_t seed = 1;
    std::size_t budget = 200000;  // search nodes (candidate placements tried)
    std::int64_t coeff_radius = 0;  // 0 = default for N
    double growth_s = 2;            // offset must give S_{N-1}/S_3 >= bound (N >= 5)
};

// Product-structure construction: n = c0 + sum_k z_k with z_k in {0, u_k + w_k} (parent side)
// or {u_k, w_k} (child side), u_k perpendicular to w_k, found by seeded backtracking.
// Throws std::runtime_error when the budget is exhausted.
GenerationSet construct_base(int N, const ConstructOptions& opt = {});

GenerationSet blow_up(const GenerationSet& S, std::int64_t C);

std::int64_t compute_C1(std::int64_t kappa0, double v_norm);
std::int64_t compute_C2(std::int64_t kappa0, double eta, double v_norm, std::int64_t C1, double radius_bound);

struct CertifyResult {
    GenerationSet set;
    ConditionReport report;
    std::int64_t kappa0 = 0;
    std::int64_t C1 = 0;
    std::int64_t C2 = 0;
};

struct CertifyOptions {
    double eta = 0.3;
    int cond6_threshold = 2;
};

CertifyResult certify_full(const GenerationSet& base, const ConvPotential& V, const CertifyOptions& opt = {});

GrowthStats growth_stats(const GenerationSet& S, double s);

// every (x, y) with x^2 + y^2 = n, sorted (Gaussian-integer factorization)
std::vector<Freq> lattice_points_on_circle(std::uint64_t n);

}  // namespace nlsv
