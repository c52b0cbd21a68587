#include "nlsv/normal_form.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlsv {

namespace {

bool is_self(Freq a, Freq b, Freq c, Freq d) { return a == b && b == c && c == d; }

bool is_iprime(TupleClass c) { return c == TupleClass::IPrime_i || c == TupleClass::IPrime_ii; }

cd F_of(double rho, TupleClass cls) { return is_iprime(cls) ? cd(0, -1.0 / rho) : cd{}; }

double Gtilde_of(Freq a, Freq b, Freq c, Freq d, TupleClass cls) {
    if (is_self(a, b, c, d)) return -1;
    return (cls == TupleClass::A0 || cls == TupleClass::A1) ? 1 : 0;
}

// Builds 1/4 sum c_tuple a1 conj(a2) a3 conj(a4) by visiting one representative per
// trivial-permutation orbit; c must be invariant under those permutations.
template <class Coef>
PolyHamiltonian build_quartic(const ModeIndex& box, const ConvPotential& V, const ResonanceParams& p, Coef coef) {
    PolyHamiltonian H;
    scan_box(box, V, p, [&](const Tuple4& t) {
        const cd c = coef(t);
        if (c == cd{}) return;
        const double mult = (t.n1 != t.n3 ? 2.0 : 1.0) * (t.n2 != t.n4 ? 2.0 : 1.0);
        H.add(0.25 * mult * c, Monomial::quartic(t.n1, t.n2, t.n3, t.n4));
    });
    H.finalize();
    return H;
}

}  // namespace

cd coeff_F(Freq n1, Freq n2, Freq n3, Freq n4, const ConvPotential& V, const ResonanceParams& p) {
    const Tuple4 t = classify(n1, n2, n3, n4, V, p);
    return F_of(t.rho, t.cls);
}

double coeff_Gprime(Freq n1, Freq n2, Freq n3, Freq n4) {
    if (is_self(n1, n2, n3, n4)) return -1;
    return (n1 != n4 && n3 != n4) ? 1 : 0;
}

double coeff_Gtilde(Freq n1, Freq n2, Freq n3, Freq n4, const ConvPotential& V, const ResonanceParams& p) {
    const Tuple4 t = classify(n1, n2, n3, n4, V, p);
    return Gtilde_of(n1, n2, n3, n4, t.cls);
}

PolyHamiltonian build_D(const ModeIndex& box, const ConvPotential& V) {
    PolyHamiltonian H;
    for (Freq n : box.modes()) {
        const double w = static_cast<double>(n.norm2()) + V.value(n);
        if (w != 0) H.add(0.5 * w, Monomial({{n, false}, {n, true}}));
    }
    H.finalize();
    return H;
}

PolyHamiltonian build_G(const ModeIndex& box) {
    return build_quartic(box, ConvPotential::zero(), {}, [](const Tuple4&) { return cd(1); });
}

PolyHamiltonian build_G_prime(const ModeIndex& box) {
    return build_quartic(box, ConvPotential::zero(), {},
                         [](const Tuple4& t) { return cd(coeff_Gprime(t.n1, t.n2, t.n3, t.n4)); });
}

PolyHamiltonian build_G_tilde(const ModeIndex& box, const ConvPotential& V, const ResonanceParams& p) {
    return build_quartic(box, V, p, [](const Tuple4& t) { return cd(Gtilde_of(t.n1, t.n2, t.n3, t.n4, t.cls)); });
}

PolyHamiltonian build_F(const ModeIndex& box, const ConvPotential& V, const ResonanceParams& p) {
    return build_quartic(box, V, p, [](const Tuple4& t) {
        const cd f = F_of(t.rho, t.cls);
        if (std::abs(f) > 4.0) {
            std::ostringstream os;
            os << "|F| = " << std::abs(f) << " > 4 at (" << t.n1 << "," << t.n2 << "," << t.n3 << "," << t.n4 << ")";
            throw std::logic_error(os.str());
        }
        return f;
    });
}

std::string CancellationReport::text() const {
    std::ostringstream os;
    os << (passed ? "PASS" : "FAIL") << " cancellation check\n";
    os << "monomials checked: " << monomials_checked << "\n";
    for (const auto& [c, k] : counts) os << "class " << to_string(c) << ": " << k << "\n";
    os << "max I' residual: " << max_iprime_residual << "\n";
    os << "max mismatch vs G~: " << max_mismatch << "\n";
    os << "self terms: " << (self_terms_ok ? "ok" : "BROKEN") << "\n";
    if (!first_offender.empty()) os << "first offender: " << first_offender << "\n";
    return os.str();
}

CancellationReport cancellation_check(const ModeIndex& box, const ConvPotential& V, const ResonanceParams& p,
                                      bool inject_fault) {
    constexpr double tol = 1e-12;
    CancellationReport r;
    r.counts = scan_box(box, V, p).counts;
    if (box.empty()) return r;

    PolyHamiltonian F = build_F(box, V, p);
    if (inject_fault && !F.empty()) {
        PolyHamiltonian bad;
        for (std::size_t i = 0; i < F.size(); ++i)
            bad.add(i == 0 ? F.terms()[i].c * (1.0 + 1e-6) : F.terms()[i].c, F.terms()[i].m);
        bad.finalize();
        F = std::move(bad);
    }
    const PolyHamiltonian K = build_G_prime(box) + poisson_bracket(build_D(box, V), F);
    const PolyHamiltonian Gt = build_G_tilde(box, V, p);

    auto offend = [&](const std::string& what) {
        r.passed = false;
        if (r.first_offender.empty()) r.first_offender = what;
    };
    auto describe = [](const Tuple4& t, cd got, cd want) {
        std::ostringstream os;
        os << "(" << t.n1 << "," << t.n2 << "," << t.n3 << "," << t.n4 << ") class " << to_string(t.cls)
           << " rho=" << t.rho << " coefficient " << got << " expected " << want;
        return os.str();
    };

    for (const auto& term : K.terms()) {
        ++r.monomials_checked;
        if (term.m.degree() != 4) {
            offend("non-quartic monomial in G' + {D,F}");
            continue;
        }
        // sorted codes: two plain factors (n1 <= n3) then two conjugated ones (n2 <= n4)
        const Freq a = term.m.factor(0).n, c = term.m.factor(1).n;
        const Freq b = term.m.factor(2).n, d = term.m.factor(3).n;
        const Tuple4 t = classify(a, b, c, d, V, p);
        if (is_iprime(t.cls)) {
            const double res = std::abs(term.c);
            r.max_iprime_residual = std::max(r.max_iprime_residual, res);
            if (res > tol) offend(describe(t, term.c, 0));
            continue;
        }
        const cd want = Gt.coefficient(term.m);
        const double mis = std::abs(term.c - want);
        r.max_mismatch = std::max(r.max_mismatch, mis);
        if (mis > tol) {
            if (is_self(a, b, c, d)) r.self_terms_ok = false;
            offend(describe(t, term.c, want));
        }
    }
    for (const auto& term : Gt.terms()) {
        if (K.coefficient(term.m) != cd{}) continue;
        r.max_mismatch = std::max(r.max_mismatch, std::abs(term.c));
        const Freq a = term.m.factor(0).n, c = term.m.factor(1).n;
        const Freq b = term.m.factor(2).n, d = term.m.factor(3).n;
        if (is_self(a, b, c, d)) r.self_terms_ok = false;
        offend(describe(classify(a, b, c, d, V, p), 0, term.c));
    }
    return r;
}

void FieldPlan::eval(const cd* y, cd* out) const {
    std::fill(out, out + dim(), cd{});
    kernels::cubic_accumulate(plan_, y, out);
}

void FieldPlan::derivative(const cd* y, const cd* w, cd* out) const {
    std::fill(out, out + dim(), cd{});
    const auto& P = plan_;
    for (std::size_t k = 0; k < P.size(); ++k) {
        const cd y1 = y[P.i1[k]], y2 = std::conj(y[P.i2[k]]), y3 = y[P.i3[k]];
        const cd w1 = w[P.i1[k]], w2 = std::conj(w[P.i2[k]]), w3 = w[P.i3[k]];
        out[P.out[k]] += P.coef[k] * (w1 * y2 * y3 + y1 * w2 * y3 + y1 * y2 * w3);
    }
}

void FieldPlan::second(const cd* y, const cd* u, const cd* v, cd* out) const {
    std::fill(out, out + dim(), cd{});
    const auto& P = plan_;
    for (std::size_t k = 0; k < P.size(); ++k) {
        const cd y1 = y[P.i1[k]], y2 = std::conj(y[P.i2[k]]), y3 = y[P.i3[k]];
        const cd u1 = u[P.i1[k]], u2 = std::conj(u[P.i2[k]]), u3 = u[P.i3[k]];
        const cd v1 = v[P.i1[k]], v2 = std::conj(v[P.i2[k]]), v3 = v[P.i3[k]];
        out[P.out[k]] += P.coef[k] * (u1 * v2 * y3 + v1 * u2 * y3 + u1 * y2 * v3 + v1 * y2 * u3 +
                                      y1 * u2 * v3 + y1 * v2 * u3);
    }
}

FieldPlan plan_from_coefficients(QuarticKind kind, const ModeIndex& box, const ConvPotential& V,
                                 const ResonanceParams& p) {
    validate_eta(p.eta);
    CubicPlan plan;
    const auto& m = box.modes();
    std::vector<double> vv(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) vv[i] = V.value(m[i]);
    for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t b = 0; b < m.size(); ++b)
            for (std::size_t c = 0; c < m.size(); ++c) {
                const Freq n = m[a] - m[b] + m[c];
                const auto o = box.find(n);
                if (o < 0) continue;
                cd k;
                if (kind == QuarticKind::Gprime) {
                    k = coeff_Gprime(m[a], m[b], m[c], n);
                } else {
                    const std::int64_t alt = m[a].norm2() - m[b].norm2() + m[c].norm2() - n.norm2();
                    const double rho = static_cast<double>(alt) + ((vv[a] + vv[c]) - (vv[b] + vv[static_cast<std::size_t>(o)]));
                    const TupleClass cls = class_of(m[a], m[b], m[c], n, rho, alt, p);
                    k = kind == QuarticKind::F ? F_of(rho, cls) : cd(Gtilde_of(m[a], m[b], m[c], n, cls));
                }
                if (k == cd{}) continue;
                plan.add(static_cast<std::int32_t>(o), static_cast<std::int32_t>(a), static_cast<std::int32_t>(b),
                         static_cast<std::int32_t>(c), cd(0, 1) * k);
            }
    return FieldPlan(box, std::move(plan));
}

FieldPlan plan_from_poly(const PolyHamiltonian& H, const ModeIndex& box) {
    CubicPlan plan;
    for (const auto& t : H.terms()) {
        if (t.m.degree() != 4) throw std::invalid_argument("plan_from_poly: only quartic terms are supported");
        const auto f = t.m.factors();
        if (f[0].conj || f[1].conj || !f[2].conj || !f[3].conj)
            throw std::invalid_argument("plan_from_poly: monomial is not of type a a conj(a) conj(a)");
        const auto a = box.find(f[0].n), c = box.find(f[1].n);
        const auto b = box.find(f[2].n), d = box.find(f[3].n);
        if (a < 0 || b < 0 || c < 0 || d < 0) continue;
        // X_n = 2i dH/dconj(a_n): one entry per conjugated occurrence
        const cd k = cd(0, 2) * t.c;
        plan.add(static_cast<std::int32_t>(d), static_cast<std::int32_t>(a), static_cast<std::int32_t>(b),
                 static_cast<std::int32_t>(c), k);
        plan.add(static_cast<std::int32_t>(b), static_cast<std::int32_t>(a), static_cast<std::int32_t>(d),
                 static_cast<std::int32_t>(c), k);
    }
    return FieldPlan(box, std::move(plan));
}

namespace {

State flow(const FieldPlan& X, const State& y0, double t, double rtol) {
    if (t == 0) return y0;
    OdeOptions o;
    o.rtol = rtol;
    o.atol = 1e-18;
    const FieldPlan* Xp = &X;
    Rhs f = [Xp](double, const cd* y, cd* dy) { Xp->eval(y, dy); };
    auto tr = integrate(f, y0, 0.0, t, {t}, o);
    return tr.states.back();
}

}  // namespace

LieResult lie_transform(const AmplitudeField& state, const FieldPlan& XF, const LieOptions& opt) {
    if (opt.order < 0 || opt.order > 3) throw std::invalid_argument("lie_transform: order must be 0 (flow) or 1..3");
    const double l1 = l1_norm(state);
    if (l1 > opt.radius) {
        std::ostringstream os;
        os << "lie_transform: ||state||_1 = " << l1 << " exceeds the admissible radius " << opt.radius;
        throw std::invalid_argument(os.str());
    }
    const Frame out_frame = state.frame() == Frame::NormalForm ? Frame::Gauged : state.frame();
    const ModeIndex& box = XF.box();
    const State y = state.to_dense(box);
    const std::size_t n = y.size();
    State g;
    if (opt.order == 0) {
        g = flow(XF, y, opt.t, opt.rtol);
    } else {
        const double t = opt.t;
        State x1(n), x2(n), tmp(n);
        XF.eval(y.data(), x1.data());
        g = y;
        for (std::size_t i = 0; i < n; ++i) g[i] += t * x1[i];
        if (opt.order >= 2) {
            XF.derivative(y.data(), x1.data(), x2.data());  // DX X
            for (std::size_t i = 0; i < n; ++i) g[i] += 0.5 * t * t * x2[i];
        }
        if (opt.order >= 3) {
            // third derivative of the flow: D^2X[X,X] + DX DX X
            XF.second(y.data(), x1.data(), x1.data(), tmp.data());
            State dd(n);
            XF.derivative(y.data(), x2.data(), dd.data());
            for (std::size_t i = 0; i < n; ++i) g[i] += t * t * t / 6.0 * (tmp[i] + dd[i]);
        }
    }
    LieResult r;
    r.value = AmplitudeField::from_dense(out_frame, box, g);
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) d += std::abs(g[i] - y[i]);
    r.gamma_minus_id_l1 = d;
    r.K = l1 > 0 ? d / (l1 * l1 * l1) : 0.0;
    return r;
}

LieResult lie_transform(const AmplitudeField& state, const PolyHamiltonian& F, const LieOptions& opt) {
    std::vector<Freq> modes = state.support();
    for (const auto& t : F.terms())
        for (const auto& f : t.m.factors()) modes.push_back(f.n);
    const ModeIndex box(std::move(modes));
    return lie_transform(state, plan_from_poly(F, box), opt);
}

void pullback(const FieldPlan& X, const std::vector<cd>& y, const std::vector<cd>& w, double t,
              std::vector<cd>& w_out, double rtol) {
    const std::size_t n = X.dim();
    double scale = 0;
    for (const cd& v : w) scale = std::max(scale, std::abs(v));
    w_out.assign(n, cd{});
    if (scale == 0) return;
    if (t == 0) {
        w_out = w;
        return;
    }
    // (z, delta) with z' = -X(z), delta' = -DX(z) delta; delta is normalised to O(1)
    State s0(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        s0[i] = y[i];
        s0[n + i] = w[i] / scale;
    }
    const FieldPlan* Xp = &X;
    Rhs f = [Xp, n](double, const cd* s, cd* ds) {
        Xp->eval(s, ds);
        Xp->derivative(s, s + n, ds + n);
        for (std::size_t i = 0; i < 2 * n; ++i) ds[i] = -ds[i];
    };
    OdeOptions o;
    o.rtol = rtol;
    o.atol = 1e-18;
    auto tr = integrate(f, s0, 0.0, t, {t}, o);
    const State& e = tr.states.back();
    for (std::size_t i = 0; i < n; ++i) w_out[i] = e[n + i] * scale;
}

namespace {

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0);
    w.assign(m, 0);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (m + 0.5)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int k = 1; k <= m; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = m * (z * p0 - p1) / (z * z - 1);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = 0.5 * (1 - z);
        w[i] = 1.0 / ((1 - z * z) * dp * dp);
    }
}

// DX_A(y) X_B(y) - DX_B(y) X_A(y), the field of {A, B}
State bracket_field(const FieldPlan& A, const FieldPlan& B, const State& y) {
    const std::size_t n = y.size();
    State xa(n), xb(n), u(n), v(n);
    A.eval(y.data(), xa.data());
    B.eval(y.data(), xb.data());
    A.derivative(y.data(), xb.data(), u.data());
    B.derivative(y.data(), xa.data(), v.data());
    for (std::size_t i = 0; i < n; ++i) u[i] -= v[i];
    return u;
}

}  // namespace

AmplitudeField remainder_field(const AmplitudeField& state, const ModeIndex& box, const ConvPotential& V,
                               const ResonanceParams& p, int quadrature) {
    if (quadrature < 1) throw std::invalid_argument("remainder_field: quadrature must be >= 1");
    const State a = state.to_dense(box);
    const std::size_t n = a.size();
    State acc(n);
    bool zero = true;
    for (const cd& v : a) zero = zero && v == cd{};
    if (!zero) {
        const FieldPlan XF = plan_from_coefficients(QuarticKind::F, box, V, p);
        const FieldPlan XGp = plan_from_coefficients(QuarticKind::Gprime, box, V, p);
        const FieldPlan XGt = plan_from_coefficients(QuarticKind::Gtilde, box, V, p);
        std::vector<double> nodes, weights;
        gauss_legendre(quadrature, nodes, weights);
        // R = int_0^1 [ {G',F} + (1-t) {G~ - G', F} ] o Phi^t dt = int_0^1 [t {G',F} + (1-t) {G~,F}] o Phi^t dt
        for (int k = 0; k < quadrature; ++k) {
            const double t = nodes[k];
            const State y = flow(XF, a, t, 1e-13);
            const State bp = bracket_field(XGp, XF, y);
            const State bt = bracket_field(XGt, XF, y);
            State wv(n), pulled;
            for (std::size_t i = 0; i < n; ++i) wv[i] = t * bp[i] + (1 - t) * bt[i];
            pullback(XF, y, wv, t, pulled);
            for (std::size_t i = 0; i < n; ++i) acc[i] += weights[k] * pulled[i];
        }
    }
    return AmplitudeField::from_dense(Frame::NormalForm, box, acc);
}

AmplitudeField remainder_leading_field(const AmplitudeField& state, const ModeIndex& box, const ConvPotential& V,
                                       const ResonanceParams& p) {
    const State a = state.to_dense(box);
    const FieldPlan XF = plan_from_coefficients(QuarticKind::F, box, V, p);
    const State bp = bracket_field(plan_from_coefficients(QuarticKind::Gprime, box, V, p), XF, a);
    const State bt = bracket_field(plan_from_coefficients(QuarticKind::Gtilde, box, V, p), XF, a);
    State r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = 0.5 * (bp[i] + bt[i]);
    return AmplitudeField::from_dense(Frame::NormalForm, box, r);
}

double remainder_norm_probe(const AmplitudeField& state, const ModeIndex& box, const ConvPotential& V,
                            const ResonanceParams& p) {
    return l1_norm(remainder_field(state, box, V, p));
}

}  // namespace nlsv
