#ifndef ORBIGW_SECTORS_HPP
#define ORBIGW_SECTORS_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "orbigw/errors.hpp"
#include "orbigw/rational.hpp"
#include "orbigw/target.hpp"

namespace orbigw {

// One component X_alpha of the inertia stack: the fixed locus of
// exp(2*pi*i*alpha), itself a complete intersection in the coordinate
// subspace stack spanned by the fixed coordinates.
struct Sector {
    Rational alpha;
    long r = 1;                   // order of exp(2*pi*i*alpha)
    std::vector<int> fixed_coords; // C_alpha = { i : alpha*w_i integral }
    std::vector<int> fixed_eqs;    // { j : alpha*b_j integral }
    int dim = 0;                   // dim of the sector (generic equations)
    long age = 0;

    bool untwisted() const { return alpha.is_zero(); }
};

inline long sector_age(const TargetSpec& t, const Rational& alpha) {
    long a = 0;
    for (long b : t.degrees) a += (alpha * Rational(b)).floor_long();
    for (long w : t.weights) a -= (alpha * Rational(w)).floor_long();
    return a;
}

// Is b a non-negative integer combination of the given weights?
inline bool representable(long b, const std::vector<long>& weights) {
    if (b == 0) return true;
    std::vector<char> hit(static_cast<std::size_t>(b) + 1, 0);
    hit[0] = 1;
    for (long v = 1; v <= b; ++v)
        for (long w : weights)
            if (w <= v && hit[v - w]) {
                hit[v] = 1;
                break;
            }
    return hit[b] != 0;
}

// All sectors with nonempty fixed locus, ascending in alpha, the untwisted
// sector (alpha = 0) first.
inline std::vector<Sector> enumerate_sectors(const TargetSpec& t) {
    std::vector<Rational> alphas;
    for (long w : t.weights)
        for (long k = 0; k < w; ++k) alphas.push_back(Rational(k, w));
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

    std::vector<Sector> out;
    for (const Rational& a : alphas) {
        Sector s;
        s.alpha = a;
        s.r = a.is_zero() ? 1 : a.den_long();
        for (int i = 0; i < static_cast<int>(t.weights.size()); ++i)
            if ((a * Rational(t.weights[i])).is_integer()) s.fixed_coords.push_back(i);
        for (int j = 0; j < static_cast<int>(t.degrees.size()); ++j)
            if ((a * Rational(t.degrees[j])).is_integer()) s.fixed_eqs.push_back(j);
        int dim_ambient = static_cast<int>(s.fixed_coords.size()) - 1;
        s.dim = dim_ambient - static_cast<int>(s.fixed_eqs.size());
        if (s.dim < 0) continue; // empty fixed locus for generic equations
        s.age = sector_age(t, a);
        // Structural screens for a smooth Calabi-Yau threefold: twisted
        // sectors are points or curves, ages are 1 or 2, and curve sectors
        // have age 1. Weight systems that break these have no smooth
        // representative (the generic member is singular along the stratum
        // or contained in a coordinate subspace).
        if (!a.is_zero()) {
            if (s.dim >= 2)
                throw ValidationError("no smooth Calabi-Yau threefold with generic equations: "
                                      "the fixed stratum of alpha=" + a.to_string() +
                                      " has dimension " + std::to_string(s.dim));
            if (s.age < 1 || s.age > 2 || (s.dim == 1 && s.age != 1))
                throw ValidationError("no smooth Calabi-Yau threefold with generic equations: "
                                      "the sector alpha=" + a.to_string() + " has age " +
                                      std::to_string(s.age) + " in dimension " +
                                      std::to_string(s.dim));
        }
        // Generic equations must restrict to nonzero polynomials on the
        // fixed subspace; otherwise the dimension bookkeeping above is wrong.
        std::vector<long> cw;
        for (int i : s.fixed_coords) cw.push_back(t.weights[i]);
        for (int j : s.fixed_eqs)
            if (!representable(t.degrees[j], cw))
                throw ValidationError("no smooth Calabi-Yau threefold with generic equations: "
                                      "a degree-" + std::to_string(t.degrees[j]) +
                                      " equation vanishes identically on the fixed subspace of "
                                      "alpha=" + a.to_string());
        out.push_back(std::move(s));
    }
    return out;
}

// A nonempty open coordinate stratum of a dimension-0 sector: the subset
// Lambda of vanishing fixed coordinates, the equations Gamma that die on the
// stratum closure, the degree of the closure cycle and the mass of the open
// stratum itself.
struct SpecialCycle {
    std::vector<int> lambda; // subset of fixed_coords, sorted
    std::vector<int> gamma;  // fixed equations identically zero on the closure
    Rational closure_degree;
    Rational open_mass;
};

namespace detail {

inline std::vector<int> cycle_gamma(const TargetSpec& t, const Sector& s,
                                    const std::vector<int>& lambda) {
    std::vector<long> visible;
    for (int i : s.fixed_coords)
        if (std::find(lambda.begin(), lambda.end(), i) == lambda.end())
            visible.push_back(t.weights[i]);
    std::vector<int> gamma;
    for (int j : s.fixed_eqs)
        if (!representable(t.degrees[j], visible)) gamma.push_back(j);
    return gamma;
}

inline Rational cycle_closure_degree(const TargetSpec& t, const Sector& s,
                                     const std::vector<int>& lambda,
                                     const std::vector<int>& gamma) {
    Rational deg(1);
    for (int j : s.fixed_eqs)
        if (std::find(gamma.begin(), gamma.end(), j) == gamma.end()) deg *= Rational(t.degrees[j]);
    for (int i : s.fixed_coords)
        if (std::find(lambda.begin(), lambda.end(), i) == lambda.end())
            deg /= Rational(t.weights[i]);
    return deg;
}

} // namespace detail

// All Lambda with nonempty open stratum, by the counting filters and
// inclusion-exclusion over the stratum poset. Sorted by Lambda
// lexicographically (as sorted index lists), which keeps basis order stable.
inline std::vector<SpecialCycle> enumerate_special_cycles(const TargetSpec& t, const Sector& s) {
    if (s.dim != 0) throw DomainError("special cycles only live in dimension-0 sectors");
    int nc = static_cast<int>(s.fixed_coords.size());
    if (nc > 20) throw DomainError("sector has too many fixed coordinates");

    struct Cand {
        std::vector<int> lambda;
        unsigned mask;
        std::vector<int> gamma;
        Rational closure;
        Rational mass;
    };
    std::vector<Cand> cands;
    for (unsigned mask = 0; mask < (1u << nc); ++mask) {
        std::vector<int> lambda;
        for (int b = 0; b < nc; ++b)
            if (mask & (1u << b)) lambda.push_back(s.fixed_coords[b]);
        // weight-disjointness between Lambda and its complement in C_alpha
        bool disjoint = true;
        for (int i : lambda)
            for (int i2 : s.fixed_coords)
                if (std::find(lambda.begin(), lambda.end(), i2) == lambda.end() &&
                    t.weights[i2] == t.weights[i])
                    disjoint = false;
        if (!disjoint) continue;
        std::vector<int> gamma = detail::cycle_gamma(t, s, lambda);
        if (gamma.size() != lambda.size()) continue;
        Cand c;
        c.lambda = lambda;
        c.mask = mask;
        c.gamma = std::move(gamma);
        c.closure = detail::cycle_closure_degree(t, s, lambda, c.gamma);
        cands.push_back(std::move(c));
    }
    // Masses: subtract deeper strata, largest Lambda first.
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.lambda.size() != b.lambda.size()) return a.lambda.size() > b.lambda.size();
        return a.lambda < b.lambda;
    });
    for (std::size_t i = 0; i < cands.size(); ++i) {
        cands[i].mass = cands[i].closure;
        for (std::size_t j = 0; j < i; ++j)
            if ((cands[j].mask & cands[i].mask) == cands[i].mask && cands[j].mask != cands[i].mask)
                cands[i].mass -= cands[j].mass;
    }
    std::vector<SpecialCycle> out;
    for (auto& c : cands) {
        if (c.mass.sign() <= 0) continue;
        out.push_back(SpecialCycle{c.lambda, c.gamma, c.closure, c.mass});
    }
    std::sort(out.begin(), out.end(),
              [](const SpecialCycle& a, const SpecialCycle& b) { return a.lambda < b.lambda; });
    return out;
}

} // namespace orbigw

#endif
