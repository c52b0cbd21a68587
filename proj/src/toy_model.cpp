#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nlsv/json_io.hpp"
#include "nlsv/toy_model.hpp"

namespace nlsv {

void toy_rhs(const cd* b, cd* db, std::size_t N) {
    const cd I{0, 1};
    for (std::size_t j = 0; j < N; ++j) {
        cd nb = 0;
        if (j > 0) nb += b[j - 1] * b[j - 1];
        if (j + 1 < N) nb += b[j + 1] * b[j + 1];
        db[j] = -I * std::norm(b[j]) * b[j] + 2.0 * I * std::conj(b[j]) * nb;
    }
}

ToyState toy_rhs(const ToyState& b) {
    ToyState d(b.size());
    toy_rhs(b.data(), d.data(), b.size());
    return d;
}

double toy_mass(const ToyState& b) {
    double m = 0;
    for (const cd& v : b) m += std::norm(v);
    return m;
}

double slot_fraction(const ToyState& b, int slot) {
    const double m = toy_mass(b);
    return m > 0 ? std::norm(b.at(slot - 1)) / m : 0.0;
}

Trajectory<ToyState> toy_integrate(const ToyState& b0, const std::vector<double>& samples, const OdeOptions& opt) {
    const std::size_t N = b0.size();
    Rhs f = [N](double, const cd* y, cd* dy) { toy_rhs(y, dy, N); };
    return integrate(f, b0, 0.0, samples.empty() ? 0.0 : samples.back(), samples, opt);
}

Trajectory<ToyState> rescale_solution(const Trajectory<ToyState>& tr, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("rescale_solution: lambda must be > 0");
    Trajectory<ToyState> out = tr;
    for (double& t : out.times) t *= lambda * lambda;
    for (auto& s : out.states)
        for (cd& v : s) v /= lambda;
    return out;
}

double rescale_residual(const ToyState& b0, double T, double lambda, int n) {
    const double h = 1e-3;  // original time
    std::vector<double> samples;
    for (int k = 0; k < n; ++k) {
        const double tk = T * (k + 0.5) / n;
        for (int j = -2; j <= 2; ++j) samples.push_back(tk + j * h);
    }
    OdeOptions o;
    o.rtol = 1e-13;
    o.atol = 1e-15;
    const auto tr = rescale_solution(toy_integrate(b0, samples, o), lambda);
    const double H = lambda * lambda * h;
    double worst = 0;
    for (int k = 0; k < n; ++k) {
        const auto& s = tr.states;
        const std::size_t c = 5 * k + 2;
        const ToyState f = toy_rhs(s[c]);
        for (std::size_t i = 0; i < b0.size(); ++i) {
            const cd d = (s[c - 2][i] - 8.0 * s[c - 1][i] + 8.0 * s[c + 1][i] - s[c + 2][i]) / (12.0 * H);
            worst = std::max(worst, std::abs(d - f[i]));
        }
    }
    return worst;
}

namespace {

struct Scan {
    double peak = 0, t_peak = 0;
    double t_cross = -1;  // first time the fraction reaches `level`, -1 if never
};

// peak share of `slot` on [0, T], sampled inside every accepted step
Scan scan(const ToyState& b0, int slot, double T, double level, double rtol) {
    const std::size_t N = b0.size();
    Rhs f = [N](double, const cd* y, cd* dy) { toy_rhs(y, dy, N); };
    OdeOptions o;
    o.rtol = rtol;
    o.atol = rtol * 1e-3;
    Scan s;
    std::vector<cd> y(N);
    auto frac = [&](const DenseStep& st, double t) {
        st.eval(t, y.data());
        return slot_fraction(y, slot);
    };
    auto observer = [&](const DenseStep& st) {
        constexpr int kSub = 8;
        double prev_t = st.t_old, prev_f = frac(st, st.t_old);
        for (int k = 1; k <= kSub; ++k) {
            const double t = st.t_old + (st.t_new - st.t_old) * k / kSub;
            const double fv = frac(st, t);
            if (fv > s.peak) s.peak = fv, s.t_peak = t;
            if (s.t_cross < 0 && fv >= level) {
                double lo = prev_t, hi = t;
                if (prev_f >= level) hi = lo;
                for (int it = 0; it < 60 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (frac(st, mid) >= level ? hi : lo) = mid;
                }
                s.t_cross = hi;
            }
            prev_t = t;
            prev_f = fv;
        }
        return true;
    };
    s.peak = slot_fraction(b0, slot);
    if (s.peak >= level) s.t_cross = 0;
    Dopri5(f, N, o).run(b0, 0.0, {T}, observer);
    return s;
}

}  // namespace

SliderResult slider_search(int N, int start, int end, double eps, const SliderOptions& opt) {
    if (N < 2) throw std::invalid_argument("slider_search: N must be >= 2");
    if (start < 1 || start > end || end > N) throw std::invalid_argument("slider_search: need 1 <= start <= end <= N");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("slider_search: eps must be in (0, 1)");
    if (!(opt.delta_seed > 0 && opt.delta_seed < 1)) throw std::invalid_argument("slider_search: delta_seed must be in (0, 1)");
    SliderResult r;
    const int seeds = end - start;
    std::vector<double> phase(seeds, 0.0);
    auto initial = [&]() {
        ToyState b(N, cd{0, 0});
        b[start - 1] = std::sqrt(1.0 - seeds * opt.delta_seed * opt.delta_seed);
        for (int k = 0; k < seeds; ++k) b[start + k] = std::polar(opt.delta_seed, phase[k]);
        return b;
    };
    const double level = 1.0 - opt.eps_prime;
    if (seeds == 0) {
        r.b0 = initial();
        r.start_fraction = slot_fraction(r.b0, start);
        r.achieved = 1.0 - r.start_fraction;
        r.success = r.start_fraction >= 1.0 - eps;
        return r;
    }

    constexpr double kTwoPi = 2 * std::numbers::pi;
    for (int k = 0; k < seeds; ++k) {
        const int target = start + k + 1;
        const double T = opt.horizon * (k + 1);
        auto objective = [&](double phi) {
            if (r.evaluations >= opt.budget) throw std::runtime_error("budget");
            ++r.evaluations;
            phase[k] = phi;
            return scan(initial(), target, T, level, opt.rtol).peak;
        };
        SliderStage st{start + k, target, 0, -1, 0};
        try {
            double best_phi = 0, best = -1;
            for (int g = 0; g < opt.phase_grid; ++g) {
                const double phi = kTwoPi * g / opt.phase_grid;
                const double v = objective(phi);
                if (v > best) best = v, best_phi = phi;
            }
            // golden section on the bracket around the best grid phase
            const double gr = (std::sqrt(5.0) - 1) / 2;
            double a = best_phi - kTwoPi / opt.phase_grid, b = best_phi + kTwoPi / opt.phase_grid;
            double c = b - gr * (b - a), d = a + gr * (b - a);
            double fc = objective(c), fd = objective(d);
            for (int it = 0; it < opt.golden_iters; ++it) {
                if (fc > fd) {
                    b = d, d = c, fd = fc;
                    c = b - gr * (b - a);
                    fc = objective(c);
                } else {
                    a = c, c = d, fc = fd;
                    d = a + gr * (b - a);
                    fd = objective(d);
                }
            }
            const double phi = fc > fd ? c : d;
            const double v = std::max(fc, fd);
            if (v > best) best = v, best_phi = phi;
            st.phase = std::fmod(std::fmod(best_phi, kTwoPi) + kTwoPi, kTwoPi);
            st.peak_fraction = best;
        } catch (const std::runtime_error&) {
            r.stages.push_back(st);
            r.b0 = initial();
            r.start_fraction = slot_fraction(r.b0, start);
            r.success = false;
            return r;
        }
        phase[k] = st.phase;
        r.stages.push_back(st);
    }
    r.b0 = initial();
    r.start_fraction = slot_fraction(r.b0, start);
    const Scan s = scan(r.b0, end, opt.horizon * seeds, level, opt.rtol);
    ++r.evaluations;
    r.t_peak = s.t_peak;
    r.achieved = 1.0 - s.peak;
    r.T0 = s.t_cross;
    r.success = s.t_cross >= 0 && r.start_fraction >= 1.0 - eps;
    return r;
}

ToyState restrict_to_mtilde(const AmplitudeField& beta, const GenerationSet& S, double tol) {
    std::map<Freq, int> gen;
    for (int j = 0; j < S.N(); ++j)
        for (Freq n : S.generations[j]) gen[n] = j;
    for (const auto& [n, v] : beta)
        if (!gen.count(n)) throw std::invalid_argument("restrict_to_mtilde: support leaves Lambda at " + to_string(n));
    ToyState b(S.N());
    for (int j = 0; j < S.N(); ++j) {
        const auto& g = S.generations[j];
        if (g.empty()) continue;
        b[j] = beta.get(g.front());
        for (Freq n : g) {
            const cd v = beta.get(n);
            if (std::abs(v - b[j]) > tol * std::max(1.0, std::abs(b[j])))
                throw std::invalid_argument("restrict_to_mtilde: generation " + std::to_string(j + 1) +
                                            " is not constant (" + to_string(n) + ")");
        }
    }
    return b;
}

AmplitudeField lift_from_mtilde(const ToyState& b, const GenerationSet& S) {
    if (static_cast<int>(b.size()) != S.N()) throw std::invalid_argument("lift_from_mtilde: N mismatch");
    AmplitudeField f(Frame::Rotating);
    for (int j = 0; j < S.N(); ++j)
        for (Freq n : S.generations[j]) f.set(n, b[j]);
    return f;
}

std::string toy_csv(const Trajectory<ToyState>& tr) {
    std::ostringstream os;
    const std::size_t N = tr.states.empty() ? 0 : tr.states.front().size();
    os << "t";
    for (std::size_t j = 1; j <= N; ++j) os << ",|b_" << j << "|^2";
    os << ",mass\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        os << num(tr.times[k]);
        for (const cd& v : tr.states[k]) os << "," << num(std::norm(v));
        os << "," << num(toy_mass(tr.states[k])) << "\n";
    }
    return os.str();
}

}  // namespace nlsv
