#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "nlsv/freq.hpp"

namespace nlsv {

using cd = std::complex<double>;

enum class Frame { Original, Gauged, NormalForm, Rotating };

std::string to_string(Frame f);
Frame frame_from_string(const std::string& s);

// Finitely supported map Freq -> complex, tagged with its coordinate frame.
// Exact zeros are never stored.
class AmplitudeField {
public:
    using Map = std::map<Freq, cd>;

    AmplitudeField() = default;
    explicit AmplitudeField(Frame f) : frame_(f) {}
    AmplitudeField(Frame f, std::initializer_list<std::pair<const Freq, cd>> init);

    Frame frame() const { return frame_; }
    cd get(Freq n) const;
    void set(Freq n, cd v);
    void add(Freq n, cd v);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    bool contains(Freq n) const { return entries_.count(n) != 0; }
    const Map& entries() const { return entries_; }
    std::vector<Freq> support() const;

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    bool operator==(const AmplitudeField& o) const = default;

    // Only the transforms of the dynamics module should call this.
    AmplitudeField retagged(Frame f) const;

    // Dense vector over an index (entries outside the index are rejected).
    std::vector<cd> to_dense(const ModeIndex& idx) const;
    static AmplitudeField from_dense(Frame f, const ModeIndex& idx, const std::vector<cd>& v);

private:
    Frame frame_ = Frame::Original;
    Map entries_;
};

AmplitudeField operator+(const AmplitudeField& a, const AmplitudeField& b);
AmplitudeField operator-(const AmplitudeField& a, const AmplitudeField& b);
AmplitudeField operator*(cd c, const AmplitudeField& a);

double japanese_bracket(Freq n);
double sobolev_norm(const AmplitudeField& f, double s);
double mass(const AmplitudeField& f);
double l1_norm(const AmplitudeField& f);

// e^{i(k+v)t} for integer k; the phase is reduced in quad precision so that
// k t ~ 1e17 still carries ~1e-17 absolute phase error.
cd unit_phase(std::int64_t k, double v, double t);

}  // namespace nlsv
