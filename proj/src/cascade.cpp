#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nlsv/cascade.hpp"
#include "nlsv/json_io.hpp"
#include "nlsv/dynamics.hpp"
#include "nlsv/normal_form.hpp"

namespace nlsv {

namespace {

const cd I{0, 1};

bool is_resonant(TupleClass c) { return c == TupleClass::A0 || c == TupleClass::A1; }

cd phase(double rho, double t) { return rho == 0 || t == 0 ? cd{1, 0} : std::polar(1.0, rho * t); }

i128 n2(Freq n) { return norm2_128(n); }

}  // namespace

Trajectory<AmplitudeField> embed_beta_lambda(const GenerationSet& S, const Trajectory<ToyState>& toy, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("embed_beta_lambda: lambda must be > 0");
    Trajectory<AmplitudeField> out;
    out.meta = toy.meta;
    for (std::size_t k = 0; k < toy.times.size(); ++k) {
        if (static_cast<int>(toy.states[k].size()) != S.N()) throw std::invalid_argument("embed_beta_lambda: N mismatch");
        ToyState b = toy.states[k];
        for (cd& v : b) v /= lambda;
        out.times.push_back(toy.times[k] * lambda * lambda);
        out.states.push_back(lift_from_mtilde(b, S));
    }
    return out;
}

AmplitudeField truncated_rhs(const AmplitudeField& beta, const ConvPotential& V, const ResonanceParams& p, double t) {
    AmplitudeField out(Frame::Rotating);
    const std::vector<Freq> s = beta.support();
    for (Freq a : s)
        for (Freq b : s)
            for (Freq c : s) {
                const Freq n = a - b + c;
                const cd m = beta.get(a) * std::conj(beta.get(b)) * beta.get(c);
                if (a == n || c == n) {
                    if (a == b && b == c) out.add(n, -I * m);
                    continue;
                }
                const Tuple4 q = classify(a, b, c, n, V, p);
                if (q.cls == TupleClass::A0) out.add(n, I * m * phase(q.rho, t));
                else if (q.cls == TupleClass::A1) out.add(n, I * m);
            }
    return out;
}

AmplitudeField family_rhs(const AmplitudeField& beta, const GenerationSet& S) {
    AmplitudeField out(Frame::Rotating);
    for (const auto& [n, v] : beta) out.add(n, -I * std::norm(v) * v);
    for (const Family& f : S.families) {
        const cd p1 = beta.get(f.p1), p2 = beta.get(f.p2), c1 = beta.get(f.c1), c2 = beta.get(f.c2);
        out.add(f.p1, 2.0 * I * c1 * c2 * std::conj(p2));
        out.add(f.p2, 2.0 * I * c1 * c2 * std::conj(p1));
        out.add(f.c1, 2.0 * I * p1 * p2 * std::conj(c2));
        out.add(f.c2, 2.0 * I * p1 * p2 * std::conj(c1));
    }
    return out;
}

AmplitudeField remainder_J_rhs(const AmplitudeField& beta, const ConvPotential& V, const ResonanceParams& p, double t) {
    AmplitudeField out(Frame::Rotating);
    const std::vector<Freq> s = beta.support();
    for (Freq a : s)
        for (Freq b : s)
            for (Freq c : s) {
                const Freq n = a - b + c;
                if (a == n || c == n) continue;
                const Tuple4 q = classify(a, b, c, n, V, p);
                if (q.cls != TupleClass::A1) continue;
                out.add(n, I * beta.get(a) * std::conj(beta.get(b)) * beta.get(c) * (phase(q.rho, t) - 1.0));
            }
    return out;
}

// ---------------------------------------------------------------- quintic remainder

std::vector<QuinticTerm> quintic_terms(const std::vector<Freq>& support, const ConvPotential& V,
                                       const ResonanceParams& p, bool resonant_only) {
    auto cA = [&](Freq a, Freq b, Freq c, Freq d) { return coeff_Gprime(a, b, c, d) + coeff_Gtilde(a, b, c, d, V, p); };
    auto cF = [&](Freq a, Freq b, Freq c, Freq d) { return coeff_F(a, b, c, d, V, p); };
    auto w = [&](Freq n) { return V.value(n); };

    using Key = std::tuple<Freq, std::array<Freq, 3>, std::array<Freq, 2>>;
    std::map<Key, QuinticTerm> acc;
    auto put = [&](Freq n, std::array<Freq, 3> u, std::array<Freq, 2> c, i128 om, cd k) {
        if (k == cd{}) return;
        std::sort(u.begin(), u.end());
        std::sort(c.begin(), c.end());
        auto [it, fresh] = acc.try_emplace(Key{n, u, c});
        QuinticTerm& q = it->second;
        if (fresh) {
            q.n = n;
            q.u = u;
            q.c = c;
            q.omega_int = static_cast<std::int64_t>(om);
            q.omega_v = (w(u[0]) + w(u[1]) + w(u[2])) - (w(c[0]) + w(c[1])) - w(n);
        }
        q.coef += k;
    };

    const std::size_t S = support.size();
    std::vector<i128> sq(S);
    for (std::size_t i = 0; i < S; ++i) sq[i] = n2(support[i]);
    for (std::size_t ip = 0; ip < S; ++ip)
        for (std::size_t iq = 0; iq < S; ++iq)
            for (std::size_t ir = 0; ir < S; ++ir) {
                const Freq P = support[ip], Q = support[iq], R = support[ir];
                const Freq m = P - Q + R;
                const i128 inner = sq[ip] - sq[iq] + sq[ir];
                bool have = false;
                cd fA = 0, fF = 0;  // inner coefficients, computed lazily
                auto inner_coefs = [&]() {
                    if (!have) fA = cA(P, Q, R, m), fF = cF(P, Q, R, m), have = true;
                };
                for (std::size_t ix = 0; ix < S; ++ix)
                    for (std::size_t iy = 0; iy < S; ++iy) {
                        const Freq X = support[ix], Y = support[iy];
                        // m in an unconjugated outer slot (slots 1 and 3 merged)
                        {
                            const Freq n = m - X + Y;
                            const i128 om = inner - sq[ix] + sq[iy] - n2(n);
                            if (!resonant_only || om == 0) {
                                inner_coefs();
                                const cd k = -cA(m, X, Y, n) * fF + cF(m, X, Y, n) * fA;
                                put(n, {P, R, Y}, {Q, X}, om, k);
                            }
                        }
                        // m in the conjugated outer slot
                        {
                            const Freq n = X - m + Y;
                            const i128 om = sq[ix] + sq[iy] - inner - n2(n);
                            if (!resonant_only || om == 0) {
                                inner_coefs();
                                const cd k = 0.5 * (cA(X, m, Y, n) * std::conj(fF) - cF(X, m, Y, n) * std::conj(fA));
                                put(n, {X, Y, Q}, {P, R}, om, k);
                            }
                        }
                    }
            }
    std::vector<QuinticTerm> out;
    out.reserve(acc.size());
    for (auto& [k, q] : acc)
        if (q.coef != cd{}) out.push_back(q);
    return out;
}

AmplitudeField quintic_rhs(const std::vector<QuinticTerm>& terms, const AmplitudeField& beta, double t) {
    AmplitudeField out(Frame::Rotating);
    for (const auto& q : terms) {
        const cd m = beta.get(q.u[0]) * beta.get(q.u[1]) * beta.get(q.u[2]) * std::conj(beta.get(q.c[0])) *
                     std::conj(beta.get(q.c[1]));
        if (m == cd{}) continue;
        out.add(q.n, q.coef * m * unit_phase(q.omega_int, q.omega_v, t));
    }
    return out;
}

// ---------------------------------------------------------------- comparison dynamics

CascadeSystem::CascadeSystem(const GenerationSet& S, const std::vector<Freq>& source, const ConvPotential& V,
                             const ResonanceParams& p, const FullSystemOptions& opt) {
    std::vector<QuinticTerm> q;
    if (opt.with_quintic) q = quintic_terms(source, V, p, true);
    std::vector<Freq> modes = S.all_modes();
    for (const auto& t : q) modes.push_back(t.n);
    box_ = ModeIndex(std::move(modes));
    const auto& m = box_.modes();

    // all momentum tuples inside the box: ordered pairs grouped by their sum
    std::map<Freq, std::vector<std::pair<std::int32_t, std::int32_t>>> by_sum;
    for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t c = 0; c < m.size(); ++c)
            by_sum[m[a] + m[c]].push_back({static_cast<std::int32_t>(a), static_cast<std::int32_t>(c)});
    for (const auto& [sum, pairs] : by_sum)
        for (auto [a, c] : pairs)
            for (auto [b, o] : pairs) {
                if (a == o || c == o) {
                    if (a == b && b == c) {
                        cubic_.add(o, a, b, c, -I);
                        rho_.push_back(0);
                        a1_.push_back(0);
                    }
                    continue;
                }
                const Tuple4 t = classify(m[a], m[b], m[c], m[o], V, p);
                if (!is_resonant(t.cls)) continue;
                cubic_.add(o, a, b, c, I);
                const bool a1 = t.cls == TupleClass::A1;
                const double r = (a1 && !opt.with_J) ? 0.0 : t.rho;
                rho_.push_back(r);
                a1_.push_back(a1 ? 1 : 0);
                max_rho_ = std::max(max_rho_, std::abs(t.rho));
                if (r != 0) phased_cubic_ = true;
            }
    for (const auto& t : q) {
        quintic_.add(static_cast<std::int32_t>(box_.find(t.n)), static_cast<std::int32_t>(box_.find(t.u[0])),
                     static_cast<std::int32_t>(box_.find(t.u[1])), static_cast<std::int32_t>(box_.find(t.u[2])),
                     static_cast<std::int32_t>(box_.find(t.c[0])), static_cast<std::int32_t>(box_.find(t.c[1])), t.coef);
        omega_v_.push_back(t.omega_v);
        if (t.omega_v != 0) phased_quintic_ = true;
    }
}

void CascadeSystem::rhs(double t, const cd* y, cd* dy) const {
    std::fill(dy, dy + box_.size(), cd{});
    if (phased_cubic_) {
        scratch_.resize(cubic_.size());
        for (std::size_t k = 0; k < cubic_.size(); ++k) scratch_[k] = cubic_.coef[k] * phase(rho_[k], t);
        kernels::cubic_accumulate(cubic_, scratch_, y, dy);
    } else {
        kernels::cubic_accumulate(cubic_, y, dy);
    }
    if (quintic_.size() == 0) return;
    if (phased_quintic_) {
        scratch_.resize(quintic_.size());
        for (std::size_t k = 0; k < quintic_.size(); ++k) scratch_[k] = quintic_.coef[k] * phase(omega_v_[k], t);
        kernels::quintic_accumulate(quintic_, scratch_, y, dy);
    } else {
        kernels::quintic_accumulate(quintic_, y, dy);
    }
}

void CascadeSystem::truncated(double t, const cd* y, cd* dy) const {
    std::fill(dy, dy + box_.size(), cd{});
    scratch_.resize(cubic_.size());
    for (std::size_t k = 0; k < cubic_.size(); ++k) scratch_[k] = a1_[k] ? cubic_.coef[k] : cubic_.coef[k] * phase(rho_[k], t);
    kernels::cubic_accumulate(cubic_, scratch_, y, dy);
}

// ---------------------------------------------------------------- experiment

void validate(const ExperimentConfig& cfg) {
    const int N = cfg.set.N();
    if (N < 2) throw std::invalid_argument("cascade: the generation set needs N >= 2");
    if (!(cfg.lambda > 0)) throw std::invalid_argument("cascade: lambda must be > 0");
    if (!(cfg.s > 1)) throw std::invalid_argument("cascade: s must be > 1");
    if (!(cfg.eps > 0 && cfg.eps < 1)) throw std::invalid_argument("cascade: eps must be in (0, 1)");
    if (cfg.samples < 2) throw std::invalid_argument("cascade: samples must be >= 2");
    if (!(cfg.rtol > 0) || !(cfg.atol > 0)) throw std::invalid_argument("cascade: tolerances must be > 0");
    validate_eta(cfg.set.eta);
    const int a = cfg.start ? cfg.start : std::max(1, N - 2);
    const int b = cfg.end ? cfg.end : std::max(2, N - 1);
    if (a < 1 || a > b || b > N) throw std::invalid_argument("cascade: need 1 <= start <= end <= N");
}

namespace {

std::pair<int, int> slots(const ExperimentConfig& cfg) {
    const int N = cfg.set.N();
    return {cfg.start ? cfg.start : std::max(1, N - 2), cfg.end ? cfg.end : std::max(2, N - 1)};
}

ResonanceParams params(const GenerationSet& S) { return {S.eta, S.kappa0}; }

std::vector<Freq> source_support(const GenerationSet& S, const ToyState& b0) {
    std::vector<Freq> out;
    for (int j = 0; j < S.N(); ++j)
        if (b0[j] != cd{})
            for (Freq n : S.generations[j]) out.push_back(n);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<cd> lift_dense(const ToyState& b, const GenerationSet& S, const ModeIndex& box) {
    std::vector<cd> y(box.size());
    for (int j = 0; j < S.N(); ++j)
        for (Freq n : S.generations[j]) y[box.find(n)] = b[j];
    return y;
}

}  // namespace

ExperimentRun approximation_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const GenerationSet& S = cfg.set;
    const int N = S.N();
    const auto [a, b] = slots(cfg);
    ExperimentRun run;
    run.slider = slider_search(N, a, b, cfg.eps, cfg.slider);
    double T0 = run.slider.T0;
    if (!run.slider.success || T0 <= 0) {
        run.flagged = true;
        run.message = "slider did not reach the transfer threshold; using the peak time";
        T0 = run.slider.t_peak > 0 ? run.slider.t_peak : cfg.slider.horizon;
    }
    const double lam = cfg.lambda;
    run.T = lam * lam * T0;

    ToyState b0 = run.slider.b0;
    for (cd& v : b0) v /= lam;
    const CascadeSystem sys(S, source_support(S, b0), cfg.V, params(S), cfg.dynamics);
    run.box_size = sys.box().size();
    run.cubic_terms = sys.cubic_terms();
    run.quintic_terms = sys.quintic_count();
    run.max_abs_rho = sys.max_abs_rho();

    // augmented state: [b^lambda (N) | full system on the box]
    const std::size_t M = sys.box().size();
    State y0(N + M);
    std::copy(b0.begin(), b0.end(), y0.begin());
    const std::vector<cd> f0 = lift_dense(b0, S, sys.box());
    std::copy(f0.begin(), f0.end(), y0.begin() + N);
    const CascadeSystem* sp = &sys;
    const std::size_t NN = static_cast<std::size_t>(N);
    Rhs f = [sp, NN](double t, const cd* y, cd* dy) {
        toy_rhs(y, dy, NN);
        sp->rhs(t, y + NN, dy + NN);
    };
    OdeOptions o;
    o.rtol = cfg.rtol;
    o.atol = cfg.atol;
    const std::vector<double> samples = linspace(0, run.T, cfg.samples);
    Trajectory<State> tr;
    try {
        tr = integrate(f, y0, 0, run.T, samples, o);
    } catch (const IntegrationError& e) {
        tr = e.partial();
        run.flagged = true;
        run.message = e.what();
    }
    run.stats = tr.meta;

    run.deviation.bound = 1.0 / (lam * lam);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const State& y = tr.states[k];
        ToyState ref(y.begin(), y.begin() + N);
        State full(y.begin() + N, y.end());
        const std::vector<cd> r = lift_dense(ref, S, sys.box());
        double d = 0;
        for (std::size_t i = 0; i < M; ++i) d += std::abs(full[i] - r[i]);
        run.deviation.times.push_back(tr.times[k]);
        run.deviation.l1_deviation.push_back(d);
        run.deviation.peak = std::max(run.deviation.peak, d);
        run.reference.times.push_back(tr.times[k]);
        run.reference.states.push_back(std::move(ref));
        run.full.times.push_back(tr.times[k]);
        run.full.states.push_back(AmplitudeField::from_dense(Frame::Rotating, sys.box(), full));
    }
    run.reference.meta = run.full.meta = tr.meta;
    return run;
}

// ---------------------------------------------------------------- Sobolev report

SobolevReport sobolev_growth_report(const ExperimentConfig& cfg, const ExperimentRun& run) {
    validate(cfg);
    const GenerationSet& S = cfg.set;
    const auto [a, b] = slots(cfg);
    const ResonanceParams p = params(S);
    const double lam = cfg.lambda;
    SobolevReport rep;
    const GrowthStats g = growth_stats(S, cfg.s);
    rep.S = g.S;
    const long double Sa = g.S[a - 1], Sb = g.S[b - 1];
    rep.sqrt_growth = static_cast<double>(std::sqrt(Sb / Sa));
    if (run.full.states.empty()) return rep;

    // Gamma to first order, r = alpha + X_F(alpha), X_F fed by the Lambda entries of alpha
    const std::vector<Freq> lam_modes = [&] {
        auto m = S.all_modes();
        std::sort(m.begin(), m.end());
        return m;
    }();
    struct FTerm {
        Freq n;
        std::size_t i1, i2, i3;
        cd k;
    };
    std::vector<FTerm> fterms;
    for (std::size_t i1 = 0; i1 < lam_modes.size(); ++i1)
        for (std::size_t i2 = 0; i2 < lam_modes.size(); ++i2)
            for (std::size_t i3 = 0; i3 < lam_modes.size(); ++i3) {
                const Freq n = lam_modes[i1] - lam_modes[i2] + lam_modes[i3];
                const cd k = coeff_F(lam_modes[i1], lam_modes[i2], lam_modes[i3], n, cfg.V, p);
                if (k != cd{}) fterms.push_back({n, i1, i2, i3, I * k});
            }

    std::vector<double> hs;
    for (std::size_t k = 0; k < run.full.times.size(); ++k) {
        const double t = run.full.times[k];
        AmplitudeField alpha = rotate_forward(run.full.states[k], cfg.V, t);
        std::vector<cd> v(lam_modes.size());
        for (std::size_t i = 0; i < lam_modes.size(); ++i) v[i] = alpha.get(lam_modes[i]);
        AmplitudeField corr(Frame::NormalForm);
        for (const auto& f : fterms) corr.add(f.n, f.k * v[f.i1] * std::conj(v[f.i2]) * v[f.i3]);
        rep.gamma_minus_id = std::max(rep.gamma_minus_id, l1_norm(corr));
        const AmplitudeField r = (alpha + corr).retagged(Frame::Gauged);
        const double h = sobolev_norm(r, cfg.s);
        double e = 0;
        for (const auto& [n, z] : r) e += 0.5 * (static_cast<double>(n.norm2()) + cfg.V.value(n)) * std::norm(z);
        rep.times.push_back(t);
        rep.hs.push_back(h);
        rep.mass.push_back(mass(r));
        rep.energy.push_back(e);
        std::vector<double> share(S.N());
        const double m = mass(r);
        for (int j = 0; j < S.N(); ++j) {
            double mj = 0;
            for (Freq n : S.generations[j]) mj += std::norm(r.get(n));
            share[j] = m > 0 ? mj / m : 0.0;
        }
        rep.generation_share.push_back(std::move(share));
    }
    rep.initial = rep.hs.front();
    rep.final_value = rep.hs.back();
    rep.ratio = rep.final_value / rep.initial;

    const double il = 1.0 / lam, il2 = il * il;
    double min_end = INFINITY;
    for (Freq n : S.generations[b - 1]) min_end = std::min(min_end, std::abs(run.full.states.back().get(n)));
    auto check = [&](std::string name, double lhs, double rhs) { rep.chain.push_back({std::move(name), lhs, rhs, lhs <= rhs}); };
    check("end generation amplitude: 3/4 lambda^-1 <= min |beta_n(T)|", 0.75 * il, min_end);
    check("deviation <= lambda^-1 / 8", run.deviation.peak, il / 8);
    check("deviation <= lambda^-2", run.deviation.peak, il2);
    check("||Gamma - Id||_1 <= lambda^-1 / 8", rep.gamma_minus_id, il / 8);
    check("(lambda^-2 / 4) S_end <= ||r(T)||^2", static_cast<double>(il2 / 4 * Sb), rep.final_value * rep.final_value);
    check("||r(0)||^2 <= 2 lambda^-2 S_start", rep.initial * rep.initial, static_cast<double>(2 * il2 * Sa));
    check("1/2 sqrt(S_end / S_start) <= ||r(T)|| / ||r(0)||", 0.5 * rep.sqrt_growth, rep.ratio);
    rep.all_ok = !run.flagged && std::all_of(rep.chain.begin(), rep.chain.end(), [](const ChainCheck& c) { return c.ok; });
    return rep;
}

// ---------------------------------------------------------------- Z decomposition

ZProbe z_decomposition_probe(const ExperimentConfig& cfg, const ExperimentRun& run, std::size_t stride) {
    validate(cfg);
    const GenerationSet& S = cfg.set;
    ZProbe z;
    z.bootstrap_bound = cfg.bootstrap_C * std::pow(cfg.lambda, -1.5) * std::ldexp(1.0, -S.N());
    z.bootstrap_ok = true;
    if (run.full.states.empty()) return z;
    ToyState b0 = run.slider.b0;
    for (cd& v : b0) v /= cfg.lambda;
    const CascadeSystem sys(S, source_support(S, b0), cfg.V, params(S), cfg.dynamics);
    const ModeIndex& box = sys.box();
    const std::size_t M = box.size();
    std::vector<cd> f0(M), ft(M), fp(M), fm(M), fx(M), tmp(M);
    auto l1 = [](const std::vector<cd>& v) {
        double s = 0;
        for (const cd& x : v) s += std::abs(x);
        return s;
    };
    stride = std::max<std::size_t>(1, stride);
    for (std::size_t k = 0; k < run.full.times.size(); k += stride) {
        const double t = run.full.times[k];
        const std::vector<cd> ref = lift_dense(run.reference.states[k], S, box);
        const std::vector<cd> y = run.full.states[k].to_dense(box);
        std::vector<cd> xi(M), p(M), m(M);
        for (std::size_t i = 0; i < M; ++i) xi[i] = y[i] - ref[i], p[i] = ref[i] + xi[i], m[i] = ref[i] - xi[i];
        sys.rhs(t, ref.data(), f0.data());
        sys.truncated(t, ref.data(), ft.data());
        sys.rhs(t, p.data(), fp.data());
        sys.rhs(t, m.data(), fm.data());
        for (std::size_t i = 0; i < M; ++i) {
            tmp[i] = f0[i] - ft[i];
            fx[i] = 0.5 * (fp[i] - fm[i]);
        }
        const double z0 = l1(tmp), z1 = l1(fx);
        for (std::size_t i = 0; i < M; ++i) tmp[i] = fp[i] - f0[i] - fx[i];
        const double z2 = l1(tmp), xn = l1(xi);
        z.times.push_back(t);
        z.z0.push_back(z0);
        z.z1.push_back(z1);
        z.z2.push_back(z2);
        z.xi.push_back(xn);
        z.z0_peak = std::max(z.z0_peak, z0);
        z.z1_peak = std::max(z.z1_peak, z1);
        z.z2_peak = std::max(z.z2_peak, z2);
        if (xn > z.bootstrap_bound) z.bootstrap_ok = false;
    }
    return z;
}

// ---------------------------------------------------------------- output

std::string deviation_csv(const DeviationSeries& d) {
    std::ostringstream os;
    os << "t,l1_dev,bound\n";
    for (std::size_t k = 0; k < d.times.size(); ++k)
        os << num(d.times[k]) << "," << num(d.l1_deviation[k]) << "," << num(d.bound) << "\n";
    return os.str();
}

std::string sobolev_csv(const SobolevReport& r) {
    std::ostringstream os;
    os << "t,H^s,mass,energy\n";
    for (std::size_t k = 0; k < r.times.size(); ++k)
        os << num(r.times[k]) << "," << num(r.hs[k]) << "," << num(r.mass[k]) << "," << num(r.energy[k]) << "\n";
    return os.str();
}

std::string generations_csv(const SobolevReport& r) {
    std::ostringstream os;
    os << "t";
    const std::size_t N = r.generation_share.empty() ? 0 : r.generation_share.front().size();
    for (std::size_t j = 1; j <= N; ++j) os << ",gen_" << j;
    os << "\n";
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        os << num(r.times[k]);
        for (double v : r.generation_share[k]) os << "," << num(v);
        os << "\n";
    }
    return os.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 matching points");
    double mx = 0, my = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]) / n, my += std::log(y[i]) / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    return sxy / sxx;
}

}  // namespace nlsv
