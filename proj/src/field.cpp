#include "nlsv/field.hpp"

#include <cmath>
#include <quadmath.h>
#include <stdexcept>

namespace nlsv {

std::string to_string(Frame f) {
    switch (f) {
        case Frame::Original: return "Original";
        case Frame::Gauged: return "Gauged";
        case Frame::NormalForm: return "NormalForm";
        case Frame::Rotating: return "Rotating";
    }
    return "?";
}

Frame frame_from_string(const std::string& s) {
    if (s == "Original") return Frame::Original;
    if (s == "Gauged") return Frame::Gauged;
    if (s == "NormalForm") return Frame::NormalForm;
    if (s == "Rotating") return Frame::Rotating;
    throw std::invalid_argument("unknown frame '" + s + "'");
}

AmplitudeField::AmplitudeField(Frame f, std::initializer_list<std::pair<const Freq, cd>> init)
    : frame_(f) {
    for (const auto& [n, v] : init) add(n, v);
}

cd AmplitudeField::get(Freq n) const {
    auto it = entries_.find(n);
    return it == entries_.end() ? cd{} : it->second;
}

void AmplitudeField::set(Freq n, cd v) {
    if (v == cd{}) entries_.erase(n);
    else entries_[n] = v;
}

void AmplitudeField::add(Freq n, cd v) { set(n, get(n) + v); }

std::vector<Freq> AmplitudeField::support() const {
    std::vector<Freq> s;
    s.reserve(entries_.size());
    for (const auto& [n, v] : entries_) s.push_back(n);
    return s;
}

AmplitudeField AmplitudeField::retagged(Frame f) const {
    AmplitudeField r = *this;
    r.frame_ = f;
    return r;
}

std::vector<cd> AmplitudeField::to_dense(const ModeIndex& idx) const {
    std::vector<cd> v(idx.size());
    for (const auto& [n, a] : entries_) {
        auto i = idx.find(n);
        if (i < 0) throw std::invalid_argument("field support leaves the box at " + to_string(n));
        v[static_cast<std::size_t>(i)] = a;
    }
    return v;
}

AmplitudeField AmplitudeField::from_dense(Frame f, const ModeIndex& idx, const std::vector<cd>& v) {
    if (v.size() != idx.size()) throw std::invalid_argument("dense vector size mismatch");
    AmplitudeField r(f);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != cd{}) r.entries_.emplace_hint(r.entries_.end(), idx[i], v[i]);
    return r;
}

AmplitudeField operator+(const AmplitudeField& a, const AmplitudeField& b) {
    if (a.frame() != b.frame()) throw std::invalid_argument("frame mismatch in field sum");
    AmplitudeField r = a;
    for (const auto& [n, v] : b) r.add(n, v);
    return r;
}

AmplitudeField operator-(const AmplitudeField& a, const AmplitudeField& b) {
    return a + cd(-1.0) * b;
}

AmplitudeField operator*(cd c, const AmplitudeField& a) {
    AmplitudeField r(a.frame());
    for (const auto& [n, v] : a) r.set(n, c * v);
    return r;
}

double japanese_bracket(Freq n) { return std::sqrt(1.0 + static_cast<double>(n.norm2())); }

double sobolev_norm(const AmplitudeField& f, double s) {
    if (s < 0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    double acc = 0;
    for (const auto& [n, v] : f) acc += std::pow(1.0 + static_cast<double>(n.norm2()), s) * std::norm(v);
    return std::sqrt(acc);
}

double mass(const AmplitudeField& f) {
    double acc = 0;
    for (const auto& [n, v] : f) acc += std::norm(v);
    return acc;
}

double l1_norm(const AmplitudeField& f) {
    double acc = 0;
    for (const auto& [n, v] : f) acc += std::abs(v);
    return acc;
}

cd unit_phase(std::int64_t k, double v, double t) {
    if (t == 0.0) return {1.0, 0.0};
    const __float128 two_pi = 2 * M_PIq;
    __float128 th = (static_cast<__float128>(k) + static_cast<__float128>(v)) * static_cast<__float128>(t);
    th = fmodq(th, two_pi);
    double d = static_cast<double>(th);
    return {std::cos(d), std::sin(d)};
}

}  // namespace nlsv
