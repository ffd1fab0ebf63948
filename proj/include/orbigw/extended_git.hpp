#ifndef ORBIGW_EXTENDED_GIT_HPP
#define ORBIGW_EXTENDED_GIT_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "orbigw/basis.hpp"
#include "orbigw/errors.hpp"
#include "orbigw/multi_index.hpp"
#include "orbigw/rational.hpp"

namespace orbigw {

// The extended GIT presentation: one extra torus factor (row of the weight
// matrix) per chosen degree-2 twisted class, plus the extended multi-degrees
// of the defining equations.
class ExtendedGIT {
public:
    // phi: basis indices of the chosen degree-2 twisted classes, in order.
    ExtendedGIT(const CohomologyModel& model, std::vector<int> phi)
        : model_(&model), phi_(std::move(phi)) {
        const TargetSpec& t = model.target();
        int n1 = static_cast<int>(t.weights.size());
        m_ = static_cast<int>(phi_.size());
        w_ = t.lcm_weights();

        for (int idx : phi_) {
            const BasisClass& b = model.basis().at(idx);
            if (b.cr_degree != 2 || model.sectors()[b.sector].untwisted())
                throw ValidationError("extension class is not a degree-2 twisted class: " + b.label);
            alphas_.push_back(model.sectors()[b.sector].alpha);
        }

        a_.assign(m_ + 1, std::vector<long>(n1 + m_, 0));
        for (int j = 0; j < n1; ++j) a_[0][j] = t.weights[j];
        for (int i = 0; i < m_; ++i) {
            const BasisClass& b = model.basis().at(phi_[i]);
            const Rational& alpha = alphas_[i];
            const std::vector<int>* lambda = nullptr;
            if (b.kind == ClassKind::SpecialCycle)
                lambda = &model.cycles(b.sector)[b.cycle].lambda;
            for (int j = 0; j < n1; ++j) {
                long aij = (alpha * Rational(t.weights[j])).floor_long();
                if (lambda && std::find(lambda->begin(), lambda->end(), j) != lambda->end()) --aij;
                a_[i + 1][j] = aij;
                if (aij >= t.weights[j] || aij < -1)
                    throw InternalError("weight-matrix entry out of range");
            }
            a_[i + 1][n1 + i] = 1;
        }

        int ne = static_cast<int>(t.degrees.size());
        xi_.assign(ne, std::vector<long>(m_ + 1, 0));
        for (int j = 0; j < ne; ++j) {
            xi_[j][0] = t.degrees[j];
            for (int i = 0; i < m_; ++i) {
                const BasisClass& b = model.basis().at(phi_[i]);
                long bij = (alphas_[i] * Rational(t.degrees[j])).floor_long();
                if (b.kind == ClassKind::SpecialCycle) {
                    const auto& gamma = model.cycles(b.sector)[b.cycle].gamma;
                    if (std::find(gamma.begin(), gamma.end(), j) != gamma.end()) --bij;
                }
                xi_[j][i + 1] = bij;
            }
        }
    }

    const CohomologyModel& model() const { return *model_; }
    int m() const { return m_; }
    long w() const { return w_; } // lcm of the weights
    const std::vector<std::vector<long>>& weight_matrix() const { return a_; }
    const std::vector<std::vector<long>>& multidegrees() const { return xi_; }
    const std::vector<Rational>& alphas() const { return alphas_; }
    const std::vector<int>& phi_classes() const { return phi_; }

    int columns() const { return static_cast<int>(a_[0].size()); }

    // Column chi_i of the weight matrix.
    std::vector<long> chi(int i) const {
        std::vector<long> c(m_ + 1);
        for (int r = 0; r <= m_; ++r) c[r] = a_[r][i];
        return c;
    }

    std::vector<std::string> q_names() const {
        std::vector<std::string> v;
        for (int i = 0; i <= m_; ++i) v.push_back("q" + std::to_string(i));
        return v;
    }

    std::vector<std::string> qt_names() const {
        std::vector<std::string> v{"Q"};
        for (int i = 1; i <= m_; ++i) v.push_back("t" + std::to_string(i));
        return v;
    }

private:
    const CohomologyModel* model_;
    std::vector<int> phi_;
    int m_;
    long w_;
    std::vector<std::vector<long>> a_;
    std::vector<std::vector<long>> xi_;
    std::vector<Rational> alphas_;
};

// Column-sum identity of the extended data: the sum of the columns of the
// weight matrix must equal the componentwise sum of the multi-degrees.
// Returns normally or throws CYViolation naming the offending row.
inline void verify_calabi_yau(const std::vector<std::vector<long>>& a,
                              const std::vector<std::vector<long>>& xi) {
    for (std::size_t r = 0; r < a.size(); ++r) {
        long cols = 0;
        for (long v : a[r]) cols += v;
        long degs = 0;
        for (const auto& x : xi) degs += x.at(r);
        if (cols != degs)
            throw CYViolation("Calabi-Yau column identity fails in row " + std::to_string(r) +
                                  ": column sum " + std::to_string(cols) + " != degree sum " +
                                  std::to_string(degs),
                              static_cast<int>(r));
    }
}

inline void verify_calabi_yau(const ExtendedGIT& git) {
    verify_calabi_yau(git.weight_matrix(), git.multidegrees());
}

// One lattice point of the curve-class bookkeeping: the integral exponent
// tuple d, the rational class tuple e it encodes, and the target sector.
struct CurveClass {
    MultiIndex d;
    std::vector<Rational> e;   // e_0 = d_0/w - sum alpha_i d_i, e_i = d_i
    Rational target_alpha;     // <-e_0>
    int sector;                // index into model.sectors()

    Rational pair_chi(const ExtendedGIT& git, int i) const {
        Rational v(0);
        for (int r = 0; r <= git.m(); ++r) v += e[r] * Rational(git.weight_matrix()[r][i]);
        return v;
    }

    Rational pair_xi(const ExtendedGIT& git, int j) const {
        Rational v(0);
        for (int r = 0; r <= git.m(); ++r) v += e[r] * Rational(git.multidegrees()[j][r]);
        return v;
    }
};

inline CurveClass make_curve_class(const ExtendedGIT& git, const MultiIndex& d) {
    CurveClass c;
    c.d = d;
    c.e.resize(git.m() + 1);
    Rational e0 = Rational(d[0], git.w());
    for (int i = 1; i <= git.m(); ++i) {
        c.e[i] = Rational(d[i]);
        e0 -= git.alphas()[i - 1] * Rational(d[i]);
    }
    c.e[0] = e0;
    c.target_alpha = (-e0).frac();
    c.sector = git.model().sector_index(c.target_alpha);
    return c;
}

// All d in Z_{>=0}^{m+1} of total degree <= D whose target sector is
// nonempty, in graded-lexicographic order.
inline std::vector<CurveClass> enumerate_curve_classes(const ExtendedGIT& git, int D) {
    std::vector<CurveClass> out;
    int n = git.m() + 1;
    std::vector<int> e(n, 0);
    // iterate all compositions with sum <= D in lex order, then sort graded
    while (true) {
        CurveClass c = make_curve_class(git, MultiIndex(e));
        if (c.sector >= 0) out.push_back(std::move(c));
        // next vector with sum <= D
        int i = n - 1;
        int sum = 0;
        for (int v : e) sum += v;
        while (i >= 0) {
            if (sum < D) {
                ++e[i];
                break;
            }
            sum -= e[i];
            e[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    std::sort(out.begin(), out.end(),
              [](const CurveClass& a, const CurveClass& b) { return a.d < b.d; });
    return out;
}

} // namespace orbigw

#endif
