#ifndef ORBIGW_BASIS_HPP
#define ORBIGW_BASIS_HPP

#include <algorithm>
#include <iterator>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "orbigw/algebra.hpp"
#include "orbigw/errors.hpp"
#include "orbigw/rational.hpp"
#include "orbigw/sectors.hpp"
#include "orbigw/target.hpp"

namespace orbigw {

enum class ClassKind {
    UntwistedPower,   // H^p on the untwisted sector, p = 0..3
    SectorUnit,       // 1_alpha on a dimension-1 twisted sector
    SectorHyperplane, // H * 1_alpha on a dimension-1 twisted sector
    SpecialCycle      // closure class of a coordinate stratum in a dim-0 sector
};

struct BasisClass {
    ClassKind kind;
    int sector;  // index into the sector list
    int h_power; // 0..3 (UntwistedPower), 0/1 (SectorUnit/Hyperplane)
    int cycle;   // index into the sector's special-cycle list, or -1
    long cr_degree;
    std::string label;
};

// How integrals over positive-dimensional twisted (gerby) sectors are
// normalized when pairing. InertiaIntegral is the plain integral over the
// inertia-stack component (classes identified by pullback); RigidifiedGerby
// multiplies those sectors by the order r of the band. Calibration note:
// only InertiaIntegral reproduces the published invariant tables. The
// alternative breaks the mixed-partial consistency of the extraction by
// exactly the factor r wherever a gerby-curve row couples to a point row
// (X_17's 5 Q^3 t_2 t_4 becomes 10, X_24's 3/4 t_1^2 t_2 becomes 3/2), so
// the pipeline fixes InertiaIntegral for every sector kind and the knob
// stays available for the calibration tests. Dimension-0 sectors and the
// untwisted sector pair by point masses / degree either way.
enum class PairingConvention { InertiaIntegral, RigidifiedGerby };

// The admissible state space of a target: the sector list, the special
// cycles of its dimension-0 sectors, the canonical class basis, the pairing,
// and the coefficient algebra the I-function takes values in.
class CohomologyModel {
public:
    explicit CohomologyModel(TargetSpec t) : target_(std::move(t)) {
        sectors_ = enumerate_sectors(target_);
        cycles_.resize(sectors_.size());
        for (std::size_t s = 0; s < sectors_.size(); ++s) {
            alpha_to_sector_[sectors_[s].alpha] = static_cast<int>(s);
            if (!sectors_[s].untwisted() && sectors_[s].dim == 0)
                cycles_[s] = enumerate_special_cycles(target_, sectors_[s]);
        }
        build_basis();
        build_open_class_expansions();
        algebra_ = build_algebra();
        algebra_->validate_associative();
    }

    const TargetSpec& target() const { return target_; }
    const std::vector<Sector>& sectors() const { return sectors_; }

    int sector_index(const Rational& alpha) const {
        auto it = alpha_to_sector_.find(alpha);
        return it == alpha_to_sector_.end() ? -1 : it->second;
    }

    const std::vector<SpecialCycle>& cycles(int sector) const { return cycles_.at(sector); }

    const std::vector<BasisClass>& basis() const { return basis_; }
    const std::vector<int>& degree2_twisted() const { return phi_; }

    int untwisted_power(int p) const { return untwisted_power_.at(p); }

    int class_index(ClassKind kind, int sector, int h_power, int cycle) const {
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            const BasisClass& b = basis_[i];
            if (b.kind == kind && b.sector == sector && b.h_power == h_power && b.cycle == cycle)
                return static_cast<int>(i);
        }
        return -1;
    }

    // Index of the basis class for a given sector with a given H-power
    // (dim > 0) resp. cycle (dim 0); -1 when absent.
    int sector_class(int sector, int h_power, int cycle) const {
        const Sector& s = sectors_[sector];
        if (s.untwisted()) return untwisted_power_.at(h_power);
        if (s.dim == 1)
            return class_index(h_power == 0 ? ClassKind::SectorUnit : ClassKind::SectorHyperplane,
                               sector, h_power, -1);
        return class_index(ClassKind::SpecialCycle, sector, 0, cycle);
    }

    const CoefficientAlgebra& algebra() const { return *algebra_; }

    Rational kappa() const { // integral of H^3 over the untwisted sector
        Rational k(1);
        for (long b : target_.degrees) k *= Rational(b);
        for (long w : target_.weights) k /= Rational(w);
        return k;
    }

    // Expansion of the closure class of the stratum Lambda (any subset of the
    // sector's fixed coordinates) over the sector's emitted special-cycle
    // classes. Empty when the closure misses every populated stratum.
    std::vector<std::pair<int, long>> closure_expansion(int sector,
                                                        const std::vector<int>& lambda) const {
        const auto& cyc = cycles_.at(sector);
        std::vector<long> total(cyc.size(), 0);
        for (std::size_t c = 0; c < cyc.size(); ++c) {
            if (!std::includes(cyc[c].lambda.begin(), cyc[c].lambda.end(), lambda.begin(),
                               lambda.end()))
                continue;
            for (std::size_t k = 0; k < cyc.size(); ++k) total[k] += open_expansion_.at(sector)[c][k];
        }
        std::vector<std::pair<int, long>> out;
        for (std::size_t k = 0; k < cyc.size(); ++k)
            if (total[k] != 0) out.emplace_back(static_cast<int>(k), total[k]);
        return out;
    }

    std::vector<std::vector<Rational>> pairing_matrix(
        PairingConvention conv = PairingConvention::InertiaIntegral) const {
        int n = static_cast<int>(basis_.size());
        std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n, Rational(0)));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                Rational v = pair_classes(basis_[i], basis_[j], conv);
                p[i][j] = v;
                p[j][i] = std::move(v);
            }
        if (!nondegenerate(p))
            throw InternalError("pairing matrix is singular on the admissible basis");
        return p;
    }

private:
    void build_basis() {
        for (int pw = 0; pw <= 3; ++pw) {
            static const char* names[4] = {"1", "H", "H^2", "H^3"};
            untwisted_power_.push_back(static_cast<int>(basis_.size()));
            basis_.push_back(BasisClass{ClassKind::UntwistedPower, untwisted_sector(), pw, -1,
                                        2L * pw, names[pw]});
        }
        for (std::size_t s = 0; s < sectors_.size(); ++s) {
            const Sector& sec = sectors_[s];
            if (sec.untwisted()) continue;
            std::string a = sec.alpha.to_string();
            if (sec.dim == 1) {
                if (sec.age != 1)
                    throw InternalError("dimension-1 twisted sector with age != 1");
                basis_.push_back(BasisClass{ClassKind::SectorUnit, static_cast<int>(s), 0, -1,
                                            2 * sec.age, "1_(" + a + ")"});
                basis_.push_back(BasisClass{ClassKind::SectorHyperplane, static_cast<int>(s), 1, -1,
                                            2 * sec.age + 2, "H.1_(" + a + ")"});
            } else {
                const auto& cyc = cycles_[s];
                for (std::size_t c = 0; c < cyc.size(); ++c) {
                    std::string label;
                    if (cyc[c].lambda.empty()) {
                        label = "1_(" + a + ")";
                    } else {
                        label = "cyc_(" + a + ")[";
                        for (std::size_t k = 0; k < cyc[c].lambda.size(); ++k)
                            label += (k ? "," : "") + std::to_string(cyc[c].lambda[k]);
                        label += "]";
                    }
                    basis_.push_back(BasisClass{ClassKind::SpecialCycle, static_cast<int>(s), 0,
                                                static_cast<int>(c), 2 * sec.age, label});
                }
            }
        }
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i].cr_degree == 2 && !sectors_[basis_[i].sector].untwisted())
                phi_.push_back(static_cast<int>(i));
    }

    // open_expansion_[sector][c] = the open-stratum class of cycle c written
    // over the closure-class basis (integer Moebius coefficients).
    void build_open_class_expansions() {
        open_expansion_.resize(sectors_.size());
        for (std::size_t s = 0; s < sectors_.size(); ++s) {
            const auto& cyc = cycles_[s];
            auto& exp = open_expansion_[s];
            exp.assign(cyc.size(), std::vector<long>(cyc.size(), 0));
            // cycles are sorted lexicographically; process largest Lambda first
            std::vector<std::size_t> order(cyc.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return cyc[a].lambda.size() > cyc[b].lambda.size();
            });
            for (std::size_t oi : order) {
                exp[oi][oi] = 1;
                for (std::size_t oj = 0; oj < cyc.size(); ++oj) {
                    if (oj == oi || cyc[oj].lambda.size() <= cyc[oi].lambda.size()) continue;
                    if (!std::includes(cyc[oj].lambda.begin(), cyc[oj].lambda.end(),
                                       cyc[oi].lambda.begin(), cyc[oi].lambda.end()))
                        continue;
                    for (std::size_t k = 0; k < cyc.size(); ++k) exp[oi][k] -= exp[oj][k];
                }
            }
        }
    }

    int untwisted_sector() const {
        for (std::size_t s = 0; s < sectors_.size(); ++s)
            if (sectors_[s].untwisted()) return static_cast<int>(s);
        throw InternalError("no untwisted sector");
    }

    Rational sector_h_integral(const Sector& s) const { // integral of H^dim over X_alpha
        Rational v(1);
        for (int j : s.fixed_eqs) v *= Rational(target_.degrees[j]);
        for (int i : s.fixed_coords) v /= Rational(target_.weights[i]);
        return v;
    }

    Rational pair_classes(const BasisClass& a, const BasisClass& b, PairingConvention conv) const {
        const Sector& sa = sectors_[a.sector];
        const Sector& sb = sectors_[b.sector];
        // Sectors pair across the banding involution alpha <-> <1 - alpha>.
        Rational need = sa.untwisted() ? Rational(0) : Rational(1) - sa.alpha;
        if (!(sb.alpha == need)) return Rational(0);
        if (sa.untwisted())
            return (a.h_power + b.h_power == 3) ? kappa() : Rational(0);
        if (sa.dim == 1) {
            if (a.h_power + b.h_power != 1) return Rational(0);
            Rational v = sector_h_integral(sa);
            if (conv == PairingConvention::RigidifiedGerby) v *= Rational(sa.r);
            return v;
        }
        // dimension-0: summed point masses over the common support
        std::vector<int> lam;
        std::set_union(cycles_[a.sector][a.cycle].lambda.begin(),
                       cycles_[a.sector][a.cycle].lambda.end(),
                       cycles_[b.sector][b.cycle].lambda.begin(),
                       cycles_[b.sector][b.cycle].lambda.end(), std::back_inserter(lam));
        Rational mass(0);
        for (const SpecialCycle& c : cycles_[a.sector])
            if (std::includes(c.lambda.begin(), c.lambda.end(), lam.begin(), lam.end()))
                mass += c.open_mass;
        return mass;
    }

    static bool nondegenerate(std::vector<std::vector<Rational>> m) {
        int n = static_cast<int>(m.size());
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (!m[r][col].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) return false;
            std::swap(m[col], m[piv]);
            for (int r = col + 1; r < n; ++r) {
                if (m[r][col].is_zero()) continue;
                Rational f = m[r][col] / m[col][col];
                for (int c2 = col; c2 < n; ++c2) m[r][c2] -= f * m[col][c2];
            }
        }
        return true;
    }

    // The coefficient algebra: basis classes with the hyperplane action.
    // H^a * H^b multiplies inside each sector (nilpotent past the sector
    // dimension); products of two twisted classes are not needed by any
    // series manipulation here and are set to zero, which keeps the table
    // commutative and associative.
    std::unique_ptr<CoefficientAlgebra> build_algebra() const {
        std::vector<std::string> labels;
        for (const auto& b : basis_) labels.push_back(b.label);
        auto alg = std::make_unique<CoefficientAlgebra>(labels, untwisted_power_.at(0));
        int n = static_cast<int>(basis_.size());
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                if (i == alg->unit_index() || j == alg->unit_index()) continue;
                const BasisClass& x = basis_[i];
                const BasisClass& y = basis_[j];
                CoefficientAlgebra::SparseVec prod; // default: zero
                if (x.kind == ClassKind::UntwistedPower && y.kind == ClassKind::UntwistedPower) {
                    if (x.h_power + y.h_power <= 3)
                        prod.emplace_back(untwisted_power_.at(x.h_power + y.h_power), Rational(1));
                } else if (x.kind == ClassKind::UntwistedPower || y.kind == ClassKind::UntwistedPower) {
                    const BasisClass& h = x.kind == ClassKind::UntwistedPower ? x : y;
                    const BasisClass& tw = x.kind == ClassKind::UntwistedPower ? y : x;
                    const Sector& s = sectors_[tw.sector];
                    int p = h.h_power + tw.h_power;
                    if (p <= s.dim && s.dim == 1) {
                        int idx = sector_class(tw.sector, p, -1);
                        prod.emplace_back(idx, Rational(1));
                    }
                    // dim-0 sectors: any positive H-power kills the class
                }
                alg->set_product(i, j, std::move(prod));
            }
        return alg;
    }

    TargetSpec target_;
    std::vector<Sector> sectors_;
    std::map<Rational, int> alpha_to_sector_;
    std::vector<std::vector<SpecialCycle>> cycles_;
    std::vector<BasisClass> basis_;
    std::vector<int> phi_;
    std::vector<int> untwisted_power_;
    std::vector<std::vector<std::vector<long>>> open_expansion_;
    std::unique_ptr<CoefficientAlgebra> algebra_;
};

} // namespace orbigw

#endif
