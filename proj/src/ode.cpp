#include "nlsv/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlsv/kernels.hpp"

namespace nlsv {

namespace {

// Dormand & Prince (1980) 5(4) tableau with Hairer's dense output.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

bool all_finite(const State& y) {
    for (const cd& z : y)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

}  // namespace

void DenseStep::eval(double t, cd* out) const {
    const double h = t_new - t_old;
    const double th = h == 0 ? 1.0 : (t - t_old) / h;
    const double th1 = 1.0 - th;
    for (std::size_t i = 0; i < r1_.size(); ++i)
        out[i] = r1_[i] + th * (r2_[i] + th1 * (r3_[i] + th * (r4_[i] + th1 * r5_[i])));
}

Dopri5::Dopri5(Rhs f, std::size_t dim, OdeOptions opts) : f_(std::move(f)), n_(dim), o_(opts) {
    if (!(o_.rtol > 0) || !(o_.atol > 0)) throw std::invalid_argument("integrate: rel_tol and abs_tol must be > 0");
}

double Dopri5::initial_step(double t0, const State& y0, const State& f0, double dir) const {
    if (o_.h0 > 0) return o_.h0;
    double sk = 0, d0 = 0, d1n = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        double s = o_.atol + o_.rtol * std::abs(y0[i]);
        d0 += std::norm(y0[i]) / (s * s);
        d1n += std::norm(f0[i]) / (s * s);
        sk += 1;
    }
    d0 = std::sqrt(d0 / std::max(sk, 1.0));
    d1n = std::sqrt(d1n / std::max(sk, 1.0));
    double h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min(h, o_.h_max);
    // explicit Euler probe for the second derivative
    State y1(n_), f1(n_);
    for (std::size_t i = 0; i < n_; ++i) y1[i] = y0[i] + dir * h * f0[i];
    f_(t0 + dir * h, y1.data(), f1.data());
    double d2 = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        double s = o_.atol + o_.rtol * std::abs(y0[i]);
        d2 += std::norm(f1[i] - f0[i]) / (s * s);
    }
    d2 = std::sqrt(d2 / std::max(sk, 1.0)) / h;
    double m = std::max(d1n, d2);
    double h1 = m <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / m, 1.0 / 5);
    return std::min({100 * h, h1, o_.h_max});
}

Trajectory<State> Dopri5::run(const State& y0, double t0, const std::vector<double>& samples,
                              const StepObserver& observer) {
    if (y0.size() != n_) throw std::invalid_argument("integrate: state dimension mismatch");
    Trajectory<State> tr;
    tr.meta.rtol = o_.rtol;
    tr.meta.atol = o_.atol;
    if (samples.empty()) return tr;
    const double t_end = samples.back();
    const double dir = t_end >= t0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (dir * (samples[i] - t0) < 0) throw std::invalid_argument("integrate: sample before start time");
        if (i > 0 && !(dir * (samples[i] - samples[i - 1]) > 0))
            throw std::invalid_argument("integrate: sample times must be strictly monotone");
    }
    if (!all_finite(y0)) throw IntegrationError("integrate: non-finite initial state", tr);

    const auto& K = kernels::active();
    std::size_t next = 0;
    while (next < samples.size() && samples[next] == t0) {
        tr.times.push_back(t0);
        tr.states.push_back(y0);
        ++next;
    }
    if (next == samples.size()) return tr;

    State y = y0, k1(n_), k2(n_), k3(n_), k4(n_), k5(n_), k6(n_), k7(n_), ys(n_), y1(n_), err(n_);
    f_(t0, y.data(), k1.data());
    tr.meta.rhs_evals += 1;
    double t = t0;
    double h = initial_step(t0, y, k1, dir);
    tr.meta.rhs_evals += 1;
    DenseStep ds;
    bool last_rejected = false;

    auto fail = [&](const std::string& msg) {
        std::ostringstream os;
        os << msg << " at t=" << t << " (h=" << h << ", steps=" << tr.meta.steps << ")";
        tr.meta.stopped_early = true;
        throw IntegrationError(os.str(), tr);
    };

    while (next < samples.size()) {
        if (tr.meta.steps + tr.meta.rejected >= o_.max_steps) fail("integrate: step budget exhausted");
        double hh = std::min(h, std::abs(t_end - t));
        // don't leave a sliver behind
        if (std::abs(t_end - t) - hh <= 1e-8 * hh) hh = std::abs(t_end - t);
        if (hh < o_.h_min * std::max(1.0, std::abs(t))) fail("integrate: step size underflow");
        const double hs = dir * hh;

        {
            const double a[] = {hs * a21};
            const cd* k[] = {k1.data()};
            K.lincomb(n_, y.data(), 1, a, k, ys.data());
        }
        f_(t + c2 * hs, ys.data(), k2.data());
        {
            const double a[] = {hs * a31, hs * a32};
            const cd* k[] = {k1.data(), k2.data()};
            K.lincomb(n_, y.data(), 2, a, k, ys.data());
        }
        f_(t + c3 * hs, ys.data(), k3.data());
        {
            const double a[] = {hs * a41, hs * a42, hs * a43};
            const cd* k[] = {k1.data(), k2.data(), k3.data()};
            K.lincomb(n_, y.data(), 3, a, k, ys.data());
        }
        f_(t + c4 * hs, ys.data(), k4.data());
        {
            const double a[] = {hs * a51, hs * a52, hs * a53, hs * a54};
            const cd* k[] = {k1.data(), k2.data(), k3.data(), k4.data()};
            K.lincomb(n_, y.data(), 4, a, k, ys.data());
        }
        f_(t + c5 * hs, ys.data(), k5.data());
        {
            const double a[] = {hs * a61, hs * a62, hs * a63, hs * a64, hs * a65};
            const cd* k[] = {k1.data(), k2.data(), k3.data(), k4.data(), k5.data()};
            K.lincomb(n_, y.data(), 5, a, k, ys.data());
        }
        const double t_new = (hh == std::abs(t_end - t)) ? t_end : t + hs;
        f_(t_new, ys.data(), k6.data());
        {
            const double a[] = {hs * a71, hs * a73, hs * a74, hs * a75, hs * a76};
            const cd* k[] = {k1.data(), k3.data(), k4.data(), k5.data(), k6.data()};
            K.lincomb(n_, y.data(), 5, a, k, y1.data());
        }
        f_(t_new, y1.data(), k7.data());
        tr.meta.rhs_evals += 6;
        {
            const double a[] = {hs * e1, hs * e3, hs * e4, hs * e5, hs * e6, hs * e7};
            const cd* k[] = {k1.data(), k3.data(), k4.data(), k5.data(), k6.data(), k7.data()};
            std::fill(err.begin(), err.end(), cd{});
            K.lincomb(n_, err.data(), 6, a, k, err.data());
        }
        const double en = n_ == 0 ? 0.0 : std::sqrt(K.err_sumsq(n_, err.data(), y.data(), y1.data(), o_.rtol, o_.atol) /
                                                    static_cast<double>(2 * n_));
        if (!std::isfinite(en)) fail("integrate: non-finite state");

        if (en <= 1.0) {
            if (!all_finite(y1)) fail("integrate: non-finite state");
            // dense output coefficients
            bool need_dense = static_cast<bool>(observer) ||
                              (next < samples.size() && dir * (samples[next] - t_new) <= 0);
            if (need_dense) {
                ds.t_old = t;
                ds.t_new = t_new;
                ds.r1_ = y;
                ds.r2_.resize(n_);
                ds.r3_.resize(n_);
                ds.r4_.resize(n_);
                ds.r5_.resize(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    cd ydiff = y1[i] - y[i];
                    cd bspl = hs * k1[i] - ydiff;
                    ds.r2_[i] = ydiff;
                    ds.r3_[i] = bspl;
                    ds.r4_[i] = ydiff - hs * k7[i] - bspl;
                    ds.r5_[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                }
            }
            while (next < samples.size() && dir * (samples[next] - t_new) <= 0) {
                State out(n_);
                if (samples[next] == t_new) out = y1;
                else ds.eval(samples[next], out.data());
                tr.times.push_back(samples[next]);
                tr.states.push_back(std::move(out));
                ++next;
            }
            tr.meta.steps += 1;
            t = t_new;
            y.swap(y1);
            k1.swap(k7);
            if (observer && !observer(ds)) {
                tr.meta.stopped_early = true;
                break;
            }
            double fac = en == 0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            if (last_rejected) fac = std::min(fac, 1.0);
            h = std::min(hh * fac, o_.h_max);
            last_rejected = false;
        } else {
            tr.meta.rejected += 1;
            h = hh * std::max(0.2, 0.9 * std::pow(en, -0.2));
            last_rejected = true;
        }
    }
    return tr;
}

std::vector<double> linspace(double t0, double t1, std::size_t n) {
    std::vector<double> v;
    if (n == 0) return v;
    if (n == 1) return {t1};
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(i + 1 == n ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

Trajectory<State> integrate(const Rhs& f, const State& y0, double t0, double t1, const std::vector<double>& samples,
                            const OdeOptions& opts, const StepObserver& observer) {
    Dopri5 solver(f, y0.size(), opts);
    std::vector<double> s = samples;
    if (s.empty()) s = t1 == t0 ? std::vector<double>{t0} : std::vector<double>{t0, t1};
    if (s.back() != t1) throw std::invalid_argument("integrate: last sample must equal the end time");
    return solver.run(y0, t0, s, observer);
}

}  // namespace nlsv
