#include "nlsv/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nlsv/json_io.hpp"

namespace nlsv {

namespace {

double omega(Freq n, const ConvPotential& V) { return static_cast<double>(n.norm2()) + V.value(n); }

void require_inside(const AmplitudeField& a, const ModeIndex& box) {
    for (const auto& [n, v] : a)
        if (!box.contains(n)) throw std::invalid_argument("support leaves the box at " + to_string(n));
}

void require_frame(const AmplitudeField& a, Frame f, const char* op) {
    if (a.frame() != f)
        throw std::invalid_argument(std::string(op) + ": expected frame " + to_string(f) + ", got " +
                                    to_string(a.frame()));
}

AmplitudeField cubic_rhs(const AmplitudeField& a, const ConvPotential& V, const ModeIndex& box, bool gauged) {
    require_inside(a, box);
    std::vector<std::pair<Freq, cd>> s(a.begin(), a.end());
    std::map<Freq, cd> acc;
    for (const auto& [n, v] : s) acc[n] += omega(n, V) * v;
    for (const auto& [n1, a1] : s)
        for (const auto& [n2, a2] : s) {
            const cd p = a1 * std::conj(a2);
            for (const auto& [n3, a3] : s) {
                const Freq n = n1 - n2 + n3;
                if (!box.contains(n)) continue;
                if (gauged && (n1 == n || n3 == n)) continue;
                acc[n] += p * a3;
            }
        }
    if (gauged)
        for (const auto& [n, v] : s) acc[n] -= std::norm(v) * v;
    AmplitudeField out(a.frame());
    const cd I(0, 1);
    for (const auto& [n, v] : acc) out.set(n, I * v);
    return out;
}

}  // namespace

AmplitudeField full_rhs(const AmplitudeField& a, const ConvPotential& V, const ModeIndex& box) {
    require_frame(a, Frame::Original, "full_rhs");
    return cubic_rhs(a, V, box, false);
}

AmplitudeField gauged_rhs(const AmplitudeField& r, const ConvPotential& V, const ModeIndex& box) {
    require_frame(r, Frame::Gauged, "gauged_rhs");
    return cubic_rhs(r, V, box, true);
}

double hamiltonian(const AmplitudeField& a, const ConvPotential& V) {
    require_frame(a, Frame::Original, "hamiltonian");
    double D = 0;
    for (const auto& [n, v] : a) D += 0.5 * omega(n, V) * std::norm(v);
    std::vector<std::pair<Freq, cd>> s(a.begin(), a.end());
    cd G = 0;
    for (const auto& [n1, a1] : s)
        for (const auto& [n2, a2] : s) {
            const cd p = a1 * std::conj(a2);
            for (const auto& [n3, a3] : s) {
                cd a4 = a.get(n1 - n2 + n3);
                if (a4 != cd{}) G += p * a3 * std::conj(a4);
            }
        }
    G *= 0.25;
    const double value = D + G.real();
    if (std::abs(G.imag()) > 1e-12 * std::max(std::abs(value), 1e-300))
        throw std::logic_error("hamiltonian: imaginary part exceeds round-off");
    return value;
}

AmplitudeField gauge_forward(const AmplitudeField& r, double t) {
    require_frame(r, Frame::Gauged, "gauge_forward");
    const cd ph = std::polar(1.0, 2.0 * mass(r) * t);
    AmplitudeField out(Frame::Original);
    for (const auto& [n, v] : r) out.set(n, ph * v);
    return out;
}

AmplitudeField gauge_backward(const AmplitudeField& a, double t) {
    require_frame(a, Frame::Original, "gauge_backward");
    const cd ph = std::polar(1.0, -2.0 * mass(a) * t);
    AmplitudeField out(Frame::Gauged);
    for (const auto& [n, v] : a) out.set(n, ph * v);
    return out;
}

AmplitudeField rotate_forward(const AmplitudeField& beta, const ConvPotential& V, double t) {
    require_frame(beta, Frame::Rotating, "rotate_forward");
    AmplitudeField out(Frame::NormalForm);
    for (const auto& [n, v] : beta) out.set(n, unit_phase(n.norm2(), V.value(n), t) * v);
    return out;
}

AmplitudeField rotate_backward(const AmplitudeField& alpha, const ConvPotential& V, double t) {
    require_frame(alpha, Frame::NormalForm, "rotate_backward");
    AmplitudeField out(Frame::Rotating);
    for (const auto& [n, v] : alpha) out.set(n, std::conj(unit_phase(n.norm2(), V.value(n), t)) * v);
    return out;
}

BoxSystem::BoxSystem(Equation eq, const ConvPotential& V, ModeIndex box) : eq_(eq), box_(std::move(box)) {
    const auto& m = box_.modes();
    const std::int32_t n = static_cast<std::int32_t>(m.size());
    omega_.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) omega_[i] = omega(m[i], V);
    const cd I(0, 1);
    for (std::int32_t a = 0; a < n; ++a)
        for (std::int32_t b = 0; b < n; ++b)
            for (std::int32_t c = 0; c < n; ++c) {
                auto o = box_.find(m[a] - m[b] + m[c]);
                if (o < 0) continue;
                if (eq_ == Equation::Gauged && (a == o || c == o)) continue;
                plan_.add(static_cast<std::int32_t>(o), a, b, c, I);
            }
    if (eq_ == Equation::Gauged)
        for (std::int32_t a = 0; a < n; ++a) plan_.add(a, a, a, a, -I);
}

void BoxSystem::rhs(double, const cd* y, cd* dy) const {
    const cd I(0, 1);
    for (std::size_t i = 0; i < omega_.size(); ++i) dy[i] = I * omega_[i] * y[i];
    kernels::cubic_accumulate(plan_, y, dy);
}

Rhs BoxSystem::as_rhs() const {
    return [this](double t, const cd* y, cd* dy) { rhs(t, y, dy); };
}

Trajectory<AmplitudeField> integrate_field(const BoxSystem& sys, const AmplitudeField& y0, double t0, double t1,
                                           const std::vector<double>& samples, const OdeOptions& opts) {
    const Frame want = sys.equation() == Equation::Full ? Frame::Original : Frame::Gauged;
    require_frame(y0, want, "integrate_field");
    auto tr = integrate(sys.as_rhs(), y0.to_dense(sys.box()), t0, t1, samples, opts);
    Trajectory<AmplitudeField> out;
    out.times = tr.times;
    out.meta = tr.meta;
    out.states.reserve(tr.states.size());
    for (const auto& s : tr.states) out.states.push_back(AmplitudeField::from_dense(want, sys.box(), s));
    return out;
}

std::string trajectory_csv(const Trajectory<AmplitudeField>& tr, const ConvPotential& V, double s,
                           const std::vector<Freq>& tracked) {
    std::ostringstream os;
    os << "t,mass,hamiltonian,sobolev_s,l1";
    for (Freq n : tracked) os << ",\"re_" << to_string(n) << "\",\"im_" << to_string(n) << "\"";
    os << "\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const auto& f = tr.states[k];
        AmplitudeField orig = f.frame() == Frame::Gauged ? gauge_forward(f, tr.times[k]) : f;
        os << num(tr.times[k]) << "," << num(mass(f)) << ","
           << (orig.frame() == Frame::Original ? num(hamiltonian(orig, V)) : std::string("nan")) << ","
           << num(sobolev_norm(f, s)) << "," << num(l1_norm(f));
        for (Freq n : tracked) {
            cd v = f.get(n);
            os << "," << num(v.real()) << "," << num(v.imag());
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace nlsv
