#ifndef ORBIGW_MIRROR_HPP
#define ORBIGW_MIRROR_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbigw/errors.hpp"
#include "orbigw/extended_git.hpp"
#include "orbigw/i_function.hpp"
#include "orbigw/series.hpp"

namespace orbigw {

// The z^1 and z^0 rows of zI - z1: the scalar series I_0, the hyperplane row
// I_{1,H}, one row per extension class, and whatever degree-2 classes fell
// outside the extension span.
struct MuDecomposition {
    ScalarSeries I0;
    ScalarSeries I1H;
    std::vector<ScalarSeries> I1phi;

    struct Residual {
        int class_index;
        std::string label;
        std::vector<MultiIndex> witnesses;
    };
    std::vector<Residual> residual;
};

inline MuDecomposition extract_mu(const ExtendedGIT& git, const CohomSeries& I) {
    const CohomologyModel& model = git.model();
    MuDecomposition mu;
    int D = I.truncation();
    mu.I0 = ScalarSeries(I.variables(), D);
    mu.I1H = ScalarSeries(I.variables(), D);
    mu.I1phi.assign(git.m(), ScalarSeries(I.variables(), D));

    std::map<int, int> phi_of_class;
    for (int i = 0; i < git.m(); ++i) phi_of_class[git.phi_classes()[i]] = i;
    int h_class = model.untwisted_power(1);
    int one_class = model.untwisted_power(0);
    std::map<int, std::size_t> residual_of_class;

    for (const auto& [d, val] : I.terms())
        for (const auto& [idx, coef] : val.components()) {
            if (idx == one_class) {
                mu.I0.add_term(d, coef);
            } else if (idx == h_class) {
                mu.I1H.add_term(d, coef);
            } else if (auto it = phi_of_class.find(idx); it != phi_of_class.end()) {
                mu.I1phi[it->second].add_term(d, coef);
            } else if (model.basis()[idx].cr_degree == 2) {
                auto [rit, fresh] = residual_of_class.try_emplace(idx, mu.residual.size());
                if (fresh)
                    mu.residual.push_back(
                        MuDecomposition::Residual{idx, model.basis()[idx].label, {}});
                mu.residual[rit->second].witnesses.push_back(d);
            }
            // cr_degree >= 4 rows sit below z^0 and are not part of mu
        }
    return mu;
}

inline void validate_extension(const MuDecomposition& mu) {
    if (mu.residual.empty()) return;
    std::string msg = "mirror map is not invertible; the extension misses";
    for (const auto& r : mu.residual) {
        msg += " " + r.label + " (curve classes";
        for (const auto& d : r.witnesses) {
            msg += " [";
            for (int i = 0; i < d.size(); ++i) msg += (i ? "," : "") + std::to_string(d[i]);
            msg += "]";
        }
        msg += ")";
    }
    throw NonInvertibleExtension(msg);
}

// The coordinate change (q_0..q_m) -> (Q, t_1..t_m):
//   Q = q_0 exp(I_{1,H} / (w I_0)),   t_i = I_{1,phi_i} / I_0.
// forward is expressed in the q-variables; inverse (filled by invert()) in
// the (Q,t)-variables.
struct MirrorMap {
    std::vector<ScalarSeries> forward;
    std::vector<ScalarSeries> inverse;
};

inline MirrorMap build_mirror_map(const ExtendedGIT& git, const MuDecomposition& mu) {
    MirrorMap map;
    ScalarSeries i0inv = series_reciprocal(mu.I0);
    ScalarSeries qvar = ScalarSeries::variable(mu.I0.variables(), mu.I0.truncation(), 0, Rational(1));
    ScalarSeries arg = series_scale(series_mul(mu.I1H, i0inv), Rational(1, git.w()));
    map.forward.push_back(series_mul(qvar, series_exp(arg)));
    for (int i = 0; i < git.m(); ++i)
        map.forward.push_back(series_mul(mu.I1phi[i], i0inv));
    return map;
}

inline void invert_mirror_map(const ExtendedGIT& git, MirrorMap& map) {
    map.inverse = invert_triangular_map(map.forward, git.qt_names());
}

// exp(-I_1/(z I_0)) * I / I_0, re-expressed in (Q, t). The H-multiplication
// inside the exponential acts through the coefficient algebra, and the
// implied z-exponents track CR-degree exactly as in the I-function.
inline CohomSeries transform_to_j(const ExtendedGIT& git, const CohomSeries& I,
                                  const MuDecomposition& mu,
                                  const std::vector<ScalarSeries>& inverse) {
    const CohomologyModel& model = git.model();
    const CoefficientAlgebra* alg = &model.algebra();
    ScalarSeries i0inv = series_reciprocal(mu.I0);
    CohomSeries base = series_mul_scalar(i0inv, I);

    auto mul_coeffs = [](const CohomSeries& s, const AlgebraElement& x) {
        CohomSeries r(s.variables(), s.truncation());
        std::vector<std::pair<MultiIndex, AlgebraElement>> out;
        for (const auto& [m, c] : s.terms()) {
            AlgebraElement v = c * x;
            if (!v.is_zero()) out.emplace_back(m, std::move(v));
        }
        r.adopt_sorted(std::move(out));
        return r;
    };

    // exp(-(I_{1,H}/I_0) H/z): H is nilpotent, so four terms suffice.
    ScalarSeries e = series_neg(series_mul(mu.I1H, i0inv));
    AlgebraElement hclass = AlgebraElement::basis(alg, model.untwisted_power(1));
    CohomSeries jq = base;
    ScalarSeries epow = e;
    AlgebraElement hpow = hclass;
    for (int k = 1; k <= 3; ++k) {
        CohomSeries shifted = mul_coeffs(base, hpow);
        if (!shifted.is_zero() && !epow.is_zero())
            jq = series_add(jq, series_scale(series_mul_scalar(epow, shifted),
                                             Rational(1) / Rational::factorial(k)));
        if (k < 3) {
            epow = series_mul(epow, e);
            hpow = hpow * hclass;
        }
    }

    // Substitute the inverse coordinate change, component by component.
    int nb = static_cast<int>(model.basis().size());
    std::vector<ScalarSeries> comps(nb, ScalarSeries(jq.variables(), jq.truncation()));
    for (const auto& [d, val] : jq.terms())
        for (const auto& [idx, coef] : val.components()) comps[idx].add_term(d, coef);
    std::vector<const ScalarSeries*> ptrs;
    for (const auto& s : comps) ptrs.push_back(&s);
    std::vector<ScalarSeries> composed = series_substitute_batch(ptrs, inverse);

    std::unordered_map<MultiIndex, AlgebraElement, MultiIndexHash> acc;
    for (int idx = 0; idx < nb; ++idx)
        for (const auto& [d, c] : composed[idx].terms())
            acc[d] += AlgebraElement::basis(alg, idx, c);
    CohomSeries j(inverse[0].variables(), composed[0].truncation());
    j.adopt_sorted(detail::collect_sorted(std::move(acc)));
    return j;
}

// Shape invariants of the J-side series: the z^0 row is the unit and the
// z^(-1) row is exactly sum t_i phi_i (no hyperplane component).
inline void check_j_shape(const ExtendedGIT& git, const CohomSeries& j) {
    const CohomologyModel& model = git.model();
    int one_class = model.untwisted_power(0);
    int h_class = model.untwisted_power(1);
    for (const auto& [d, val] : j.terms())
        for (const auto& [idx, coef] : val.components()) {
            if (idx == one_class) {
                if (!d.is_zero())
                    throw InternalError("J-series z^0 row is not constant 1");
            } else if (idx == h_class) {
                throw InternalError("J-series z^-1 row has a hyperplane component");
            } else if (model.basis()[idx].cr_degree == 2) {
                auto phis = git.phi_classes();
                auto pos = std::find(phis.begin(), phis.end(), idx);
                if (pos == phis.end())
                    throw InternalError("J-series z^-1 row leaves the extension span");
                int i = static_cast<int>(pos - phis.begin());
                bool is_ti = d.total_degree() == 1 && d[1 + i] == 1;
                if (!is_ti || !coef.is_one())
                    throw InternalError("J-series z^-1 row is not sum t_i phi_i");
            }
        }
    if (!j.constant_term().component(one_class).is_one())
        throw InternalError("J-series does not start at the unit");
}

// The generating function of invariants: for each (d, k), the coefficient of
// Q^d t^k in F plus the bracket normalization prod(k_i!) * coefficient.
struct GeneratingFunction {
    struct Entry {
        long d;
        MultiIndex k; // exponents of t_1..t_m
        Rational coeff;
        Rational bracket;
    };
    int m = 0;
    long w = 1;
    std::vector<Entry> entries; // sorted by (total degree, d, k)

    const Rational* find(long d, const MultiIndex& k) const {
        for (const auto& e : entries)
            if (e.d == d && e.k == k) return &e.coeff;
        return nullptr;
    }

    Rational coeff_or_zero(long d, const MultiIndex& k) const {
        const Rational* p = find(d, k);
        return p ? *p : Rational(0);
    }
};

namespace detail {

inline MultiIndex strip_q(const MultiIndex& dk) { // drop the Q-exponent
    std::vector<int> v = dk.as_vector();
    v.erase(v.begin());
    return MultiIndex(v);
}

} // namespace detail

// Reads F off the J-side series: (a) the degree-4 twisted rows give
// dF/dt_i via the pairing; (b) the t = 0 slice of the H^2 row gives the
// pure-Q invariants through the divisor reduction; (c) integration in t
// with cross-checked mixed partials fills in the rest.
inline GeneratingFunction extract_f(const ExtendedGIT& git, const CohomSeries& j,
                                    PairingConvention conv = PairingConvention::InertiaIntegral) {
    const CohomologyModel& model = git.model();
    auto pairing = model.pairing_matrix(conv);
    int m = git.m();
    int D = j.truncation();
    long w = git.w();

    // Component series of every degree-4 class.
    std::vector<int> deg4;
    for (std::size_t i = 0; i < model.basis().size(); ++i)
        if (model.basis()[i].cr_degree == 4 && !model.sectors()[model.basis()[i].sector].untwisted())
            deg4.push_back(static_cast<int>(i));
    int h2 = model.untwisted_power(2);

    std::map<int, ScalarSeries> comp;
    comp.emplace(h2, ScalarSeries(j.variables(), D));
    for (int idx : deg4) comp.emplace(idx, ScalarSeries(j.variables(), D));
    for (const auto& [d, val] : j.terms())
        for (const auto& [idx, coef] : val.components())
            if (auto it = comp.find(idx); it != comp.end()) it->second.add_term(d, coef);

    // g_i = dF/dt_i = sum_a (phi_i, psi_a) * c_a
    std::vector<ScalarSeries> g;
    for (int i = 0; i < m; ++i) {
        ScalarSeries gi(j.variables(), D);
        int phi_idx = git.phi_classes()[i];
        for (int idx : deg4) {
            const Rational& p = pairing[phi_idx][idx];
            if (p.is_zero()) continue;
            gi = series_add(gi, series_scale(comp.at(idx), p));
        }
        g.push_back(std::move(gi));
    }

    std::map<std::pair<long, MultiIndex>, Rational> N;

    // (b) pure-Q invariants from the H^2 row at t = 0.
    Rational kappa = model.kappa();
    for (const auto& [dk, c] : comp.at(h2).terms()) {
        if (dk.total_degree() != dk[0]) continue; // t = 0 slice
        long d = dk[0];
        if (d == 0) throw ExtractionInconsistency("H^2 row has a Q^0 term at t = 0");
        N[{d, MultiIndex::zero(m)}] = kappa * Rational(w, d) * c;
    }

    // (c) integrate the dF/dt_i rows; every overlapping determination must
    // agree exactly.
    for (int i = 0; i < m; ++i) {
        for (const auto& [dk, c] : g[i].terms()) {
            long d = dk[0];
            MultiIndex k = detail::strip_q(dk).plus_unit(i);
            if (d == 0 && k.total_degree() < 3)
                throw ExtractionInconsistency("unstable invariant produced by the t-rows");
            if (1 + dk.total_degree() > D) continue; // integrated monomial beyond truncation
            Rational val = c / Rational(k[i]);
            auto it = N.find({d, k});
            if (it == N.end()) {
                N[{d, k}] = val;
            } else if (it->second != val) {
                std::vector<std::string> qt = git.qt_names();
                std::vector<std::string> tnames(qt.begin() + 1, qt.end());
                throw ExtractionInconsistency("mixed-partial mismatch at Q^" + std::to_string(d) +
                                              " " + k.to_string(tnames) + ": " +
                                              it->second.to_string() + " vs " + val.to_string());
            }
        }
    }

    GeneratingFunction F;
    F.m = m;
    F.w = w;
    for (auto& [key, val] : N) {
        if (val.is_zero()) continue;
        const auto& [d, k] = key;
        if (d == 0 && k.total_degree() < 3) continue; // unstable, never emitted
        Rational bracket = val;
        for (int i = 0; i < m; ++i)
            bracket *= Rational::factorial(static_cast<unsigned long>(k[i]));
        F.entries.push_back(GeneratingFunction::Entry{d, k, val, std::move(bracket)});
    }
    std::sort(F.entries.begin(), F.entries.end(), [](const auto& a, const auto& b) {
        long ta = a.d + a.k.total_degree(), tb = b.d + b.k.total_degree();
        if (ta != tb) return ta < tb;
        if (a.d != b.d) return a.d < b.d;
        return a.k < b.k;
    });
    return F;
}

// Divisor-equation consistency of the H^2 row against the extracted F:
// for d >= 1, [Q^d t^k] c_{H^2} = (d / (w kappa)) [Q^d t^k] F.
inline bool check_divisor_row(const ExtendedGIT& git, const CohomSeries& j,
                              const GeneratingFunction& F) {
    const CohomologyModel& model = git.model();
    ScalarSeries h2row(j.variables(), j.truncation());
    int h2 = model.untwisted_power(2);
    for (const auto& [d, val] : j.terms()) {
        Rational c = val.component(h2);
        if (!c.is_zero()) h2row.add_term(d, c);
    }
    Rational kw = model.kappa() * Rational(git.w());
    for (const auto& e : F.entries) {
        if (e.d == 0) continue;
        std::vector<int> dk{static_cast<int>(e.d)};
        for (int i = 0; i < e.k.size(); ++i) dk.push_back(e.k[i]);
        if (h2row.coefficient(MultiIndex(dk)) != Rational(e.d) / kw * e.coeff) return false;
    }
    for (const auto& [dk, c] : h2row.terms()) {
        if (dk[0] == 0) continue; // classical corrections live at Q^0
        MultiIndex k = detail::strip_q(dk);
        if (c != Rational(dk[0]) / kw * F.coeff_or_zero(dk[0], k)) return false;
    }
    return true;
}

// Specialization of F to a line t_i = c_i * s (all Q = 0): the coefficient
// series of s^deg, exact.
inline std::map<long, Rational> degree_zero_specialization(const GeneratingFunction& F,
                                                           const std::vector<Rational>& dirs) {
    std::map<long, Rational> out;
    for (const auto& e : F.entries) {
        if (e.d != 0) continue;
        Rational v = e.coeff;
        bool live = true;
        for (int i = 0; i < e.k.size() && live; ++i) {
            if (e.k[i] == 0) continue;
            if (dirs[i].is_zero())
                live = false;
            else
                v *= dirs[i].pow(e.k[i]);
        }
        if (!live || v.is_zero()) continue;
        auto [it, fresh] = out.try_emplace(e.k.total_degree(), v);
        if (!fresh) it->second += v;
        if (it->second.is_zero()) out.erase(it);
    }
    return out;
}

struct CrossCheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

} // namespace orbigw

#endif
