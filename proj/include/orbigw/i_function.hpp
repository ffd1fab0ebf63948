#ifndef ORBIGW_I_FUNCTION_HPP
#define ORBIGW_I_FUNCTION_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "orbigw/algebra.hpp"
#include "orbigw/basis.hpp"
#include "orbigw/errors.hpp"
#include "orbigw/extended_git.hpp"
#include "orbigw/series.hpp"

namespace orbigw {

using CohomSeries = TruncatedSeries<AlgebraElement>;

namespace detail {

// Polynomial in the hyperplane class (nilpotent, capped) with exact Laurent
// coefficients in the localization parameter z. Keyed by (h-power, z-power).
struct HzPoly {
    int hcap;
    std::map<std::pair<int, int>, Rational> c;

    static HzPoly one(int hcap) {
        HzPoly p{hcap, {}};
        p.c[{0, 0}] = Rational(1);
        return p;
    }

    bool is_zero() const { return c.empty(); }

    // multiply by (wH + kz)
    void mul_linear(long w, const Rational& k) {
        std::map<std::pair<int, int>, Rational> out;
        for (const auto& [hz, v] : c) {
            auto [h, z] = hz;
            if (h + 1 <= hcap && w != 0) out[{h + 1, z}] += v * Rational(w);
            if (!k.is_zero()) out[{h, z + 1}] += v * k;
        }
        prune(out);
        c = std::move(out);
    }

    // multiply by (wH + kz)^(-1), k != 0, expanded against nilpotency of H
    void div_linear(long w, const Rational& k) {
        if (k.is_zero()) throw InternalError("division by a pure-H factor");
        std::map<std::pair<int, int>, Rational> out;
        Rational kinv = k.inverse();
        for (const auto& [hz, v] : c) {
            auto [h, z] = hz;
            Rational coef = v * kinv;
            for (int t = 0; h + t <= hcap; ++t) {
                out[{h + t, z - 1 - t}] += coef;
                coef *= Rational(-w) * kinv;
                if (w == 0) break;
            }
        }
        prune(out);
        c = std::move(out);
    }

    void scale(const Rational& s) {
        for (auto& [hz, v] : c) v *= s;
    }

    void shift_z(int dz) {
        if (dz == 0) return;
        std::map<std::pair<int, int>, Rational> out;
        for (const auto& [hz, v] : c) out[{hz.first, hz.second + dz}] = v;
        c = std::move(out);
    }

    static void prune(std::map<std::pair<int, int>, Rational>& m) {
        for (auto it = m.begin(); it != m.end();)
            it = it->second.is_zero() ? m.erase(it) : std::next(it);
    }
};

// k-values with <k> = <anchor>, lo < k <= hi, walked as exact rationals
// stepping by 1 from the fractional anchor. k = 0 is never emitted; the
// k = 0 factors are the H-powers handled through vdeg and the scalar below.
inline std::vector<Rational> k_range(const Rational& anchor, const Rational& lo,
                                     const Rational& hi) {
    std::vector<Rational> ks;
    Rational fr = anchor.frac();
    long tmin = (lo - fr).floor_long() + 1;
    long tmax = (hi - fr).floor_long();
    for (long t = tmin; t <= tmax; ++t) {
        Rational k = fr + Rational(t);
        if (!k.is_zero()) ks.push_back(std::move(k));
    }
    return ks;
}

} // namespace detail

// The fractional part <-e_0>: the label of the sector the class evaluates to.
inline Rational target_sector_alpha(const Rational& e0) { return (-e0).frac(); }

// One summand of the I-function. value is the fully assembled coefficient of
// q^d (classes with implied z-exponent -cr_degree/2); vdeg is the virtual
// codimension; empty contributions (pruned by nilpotency or an unpopulated
// stratum) have value zero.
struct ClassContribution {
    CurveClass cls;
    long vdeg = 0;
    AlgebraElement value;
};

inline ClassContribution i_class_contribution(const ExtendedGIT& git, const CurveClass& cls) {
    const CohomologyModel& model = git.model();
    const TargetSpec& t = model.target();
    const Sector& sec = model.sectors().at(cls.sector);
    int n1 = static_cast<int>(t.weights.size());
    int ne = static_cast<int>(t.degrees.size());

    ClassContribution out;
    out.cls = cls;

    std::vector<Rational> pchi(n1), pxi(ne);
    long neg_chi = 0, neg_xi = 0;
    for (int i = 0; i < n1; ++i) {
        pchi[i] = cls.pair_chi(git, i);
        if (pchi[i].is_integer() && pchi[i].sign() < 0) ++neg_chi;
    }
    for (int j = 0; j < ne; ++j) {
        pxi[j] = cls.pair_xi(git, j);
        if (pxi[j].is_integer() && pxi[j].sign() < 0) ++neg_xi;
    }
    out.vdeg = neg_chi - neg_xi;
    if (out.vdeg < 0)
        throw InternalError("negative virtual codimension on a nonempty sector");
    if (out.vdeg > sec.dim) return out; // killed by nilpotency of H

    int hcap = sec.dim - static_cast<int>(out.vdeg);
    detail::HzPoly f = detail::HzPoly::one(hcap);
    Rational zero(0);
    for (int i = 0; i < n1; ++i) {
        for (const Rational& k : detail::k_range(pchi[i], pchi[i], zero))
            f.mul_linear(t.weights[i], k);
        for (const Rational& k : detail::k_range(pchi[i], zero, pchi[i]))
            f.div_linear(t.weights[i], k);
        if (f.is_zero()) return out;
    }
    for (int j = 0; j < ne; ++j) {
        for (const Rational& k : detail::k_range(pxi[j], zero, pxi[j]))
            f.mul_linear(t.degrees[j], k);
        for (const Rational& k : detail::k_range(pxi[j], pxi[j], zero))
            f.div_linear(t.degrees[j], k);
        if (f.is_zero()) return out;
    }

    // prefactor 1 / (prod_a d_a! z^{d_a})
    Rational pref(1);
    int zshift = 0;
    for (int a = 1; a <= git.m(); ++a) {
        pref /= Rational::factorial(static_cast<unsigned long>(cls.d[a]));
        zshift -= cls.d[a];
    }
    f.scale(pref);
    f.shift_z(zshift);

    // Unit class and the k = 0 scalars. For positive-dimensional sectors the
    // k = 0 factors contribute prod w_i / prod b_j against the sector unit;
    // on dimension-0 sectors that scalar cancels against the normalization
    // of the pushed-forward point class, leaving the plain closure class of
    // the stratum where the negatively-paired coordinates vanish.
    AlgebraElement value;
    const CoefficientAlgebra* alg = &model.algebra();
    if (sec.dim > 0) {
        Rational k0(1);
        for (int i = 0; i < n1; ++i)
            if (pchi[i].is_integer() && pchi[i].sign() < 0) k0 *= Rational(t.weights[i]);
        for (int j = 0; j < ne; ++j)
            if (pxi[j].is_integer() && pxi[j].sign() < 0) k0 /= Rational(t.degrees[j]);
        f.scale(k0);
        for (const auto& [hz, v] : f.c) {
            int p = hz.first + static_cast<int>(out.vdeg);
            int cls_idx = model.sector_class(cls.sector, p, -1);
            if (cls_idx < 0) throw InternalError("missing basis class for sector H-power");
            long expect_z = -(p + sec.age);
            if (hz.second != expect_z)
                throw InternalError("I-function coefficient violates degree-0 homogeneity");
            value += AlgebraElement::basis(alg, cls_idx, v);
        }
    } else {
        std::vector<int> lambda;
        for (int i = 0; i < n1; ++i)
            if (pchi[i].is_integer() && pchi[i].sign() < 0) lambda.push_back(i);
        auto expansion = model.closure_expansion(cls.sector, lambda);
        if (expansion.empty()) return out; // stratum closure carries no points
        for (const auto& [hz, v] : f.c) {
            if (hz.first != 0) throw InternalError("H-power on a dimension-0 sector");
            if (hz.second != -sec.age)
                throw InternalError("I-function coefficient violates degree-0 homogeneity");
            for (const auto& [cyc, mult] : expansion) {
                int cls_idx = model.sector_class(cls.sector, 0, cyc);
                if (cls_idx < 0) throw InternalError("missing special-cycle basis class");
                value += AlgebraElement::basis(alg, cls_idx, v * Rational(mult));
            }
        }
    }
    out.value = std::move(value);
    return out;
}

// The extended I-function through total degree D, as a series in q_0..q_m
// with coefficients in the admissible-class algebra. The z-exponent of each
// class component is implied by homogeneity: z^(-cr_degree/2).
inline CohomSeries assemble_i_function(const ExtendedGIT& git, int D) {
    CohomSeries I(git.q_names(), D);
    std::vector<std::pair<MultiIndex, AlgebraElement>> terms;
    for (const CurveClass& cls : enumerate_curve_classes(git, D)) {
        ClassContribution c = i_class_contribution(git, cls);
        if (!c.value.is_zero()) terms.emplace_back(cls.d, std::move(c.value));
    }
    I.adopt_sorted(std::move(terms));
    return I;
}

// Raw dump record of one monomial of the I-function.
struct IDumpRecord {
    MultiIndex d;
    Rational alpha;
    std::string class_label;
    int h_power;
    int z_exponent;
    Rational coefficient;
};

inline std::vector<IDumpRecord> dump_i_function(const ExtendedGIT& git, const CohomSeries& I) {
    const CohomologyModel& model = git.model();
    std::vector<IDumpRecord> out;
    for (const auto& [d, val] : I.terms())
        for (const auto& [idx, coef] : val.components()) {
            const BasisClass& b = model.basis().at(idx);
            out.push_back(IDumpRecord{d, model.sectors()[b.sector].alpha, b.label, b.h_power,
                                      static_cast<int>(-b.cr_degree / 2), coef});
        }
    return out;
}

} // namespace orbigw

#endif
