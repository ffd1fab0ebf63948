#ifndef ORBIGW_ALGEBRA_HPP
#define ORBIGW_ALGEBRA_HPP

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "orbigw/errors.hpp"
#include "orbigw/rational.hpp"

namespace orbigw {

// Finite-dimensional commutative associative algebra over Q, given by a
// labelled basis and structure constants. Series over such an algebra are
// the coefficient spaces of the cohomology-valued series downstream.
class CoefficientAlgebra {
public:
    using SparseVec = std::vector<std::pair<int, Rational>>; // sorted by index

    CoefficientAlgebra(std::vector<std::string> labels, int unit_index)
        : labels_(std::move(labels)), unit_(unit_index) {
        int n = static_cast<int>(labels_.size());
        if (n == 0 || unit_ < 0 || unit_ >= n) throw StructuralError("bad algebra basis");
        table_.assign(n, std::vector<SparseVec>(n));
        // unit row/column
        for (int j = 0; j < n; ++j) set_product(unit_, j, {{j, Rational(1)}});
    }

    int dim() const { return static_cast<int>(labels_.size()); }
    int unit_index() const { return unit_; }
    const std::string& label(int i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    // Installs e_i * e_j (and by commutativity e_j * e_i).
    void set_product(int i, int j, SparseVec value) {
        std::sort(value.begin(), value.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if ((i == unit_ && !(value.size() == 1 && value[0].first == j && value[0].second.is_one())) ||
            (j == unit_ && !(value.size() == 1 && value[0].first == i && value[0].second.is_one())))
            throw StructuralError("unit row of the multiplication table must be the identity");
        table_.at(i).at(j) = value;
        table_.at(j).at(i) = std::move(value);
    }

    const SparseVec& product(int i, int j) const { return table_[i][j]; }

    // Full associativity check, O(dim^3); used when the table is built.
    void validate_associative() const;

private:
    std::vector<std::string> labels_;
    int unit_;
    std::vector<std::vector<SparseVec>> table_;
};

// A sparse element of a CoefficientAlgebra. Default-constructed elements are
// the zero of any algebra (null context); nonzero elements carry a pointer
// to their algebra, which the owner must keep alive.
class AlgebraElement {
public:
    AlgebraElement() : alg_(nullptr) {}

    AlgebraElement(const CoefficientAlgebra* alg, CoefficientAlgebra::SparseVec comps)
        : alg_(alg), comps_(std::move(comps)) {
        normalize();
    }

    static AlgebraElement basis(const CoefficientAlgebra* alg, int i, Rational c = Rational(1)) {
        return AlgebraElement(alg, {{i, std::move(c)}});
    }

    static AlgebraElement unit(const CoefficientAlgebra* alg) {
        return basis(alg, alg->unit_index());
    }

    const CoefficientAlgebra* algebra() const { return alg_; }
    bool is_zero() const { return comps_.empty(); }
    const CoefficientAlgebra::SparseVec& components() const { return comps_; }

    Rational component(int i) const {
        for (const auto& [k, c] : comps_)
            if (k == i) return c;
        return Rational(0);
    }

    AlgebraElement& operator+=(const AlgebraElement& o) {
        if (o.is_zero()) return *this;
        if (is_zero()) {
            *this = o;
            return *this;
        }
        require_same(o);
        CoefficientAlgebra::SparseVec out;
        out.reserve(comps_.size() + o.comps_.size());
        auto ia = comps_.begin(), ea = comps_.end();
        auto ib = o.comps_.begin(), eb = o.comps_.end();
        while (ia != ea || ib != eb) {
            if (ib == eb || (ia != ea && ia->first < ib->first)) {
                out.push_back(*ia++);
            } else if (ia == ea || ib->first < ia->first) {
                out.push_back(*ib++);
            } else {
                Rational c = ia->second + ib->second;
                if (!c.is_zero()) out.emplace_back(ia->first, std::move(c));
                ++ia;
                ++ib;
            }
        }
        comps_ = std::move(out);
        return *this;
    }

    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
        a += b;
        return a;
    }

    AlgebraElement operator-() const {
        AlgebraElement r(*this);
        for (auto& [k, c] : r.comps_) c = -c;
        return r;
    }

    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
        return a + (-b);
    }

    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
        if (a.is_zero() || b.is_zero()) return AlgebraElement();
        a.require_same(b);
        std::vector<Rational> dense(a.alg_->dim(), Rational(0));
        for (const auto& [i, ci] : a.comps_)
            for (const auto& [j, cj] : b.comps_) {
                Rational cij = ci * cj;
                for (const auto& [k, s] : a.alg_->product(i, j)) dense[k].add_mul(cij, s);
            }
        CoefficientAlgebra::SparseVec out;
        for (int k = 0; k < static_cast<int>(dense.size()); ++k)
            if (!dense[k].is_zero()) out.emplace_back(k, std::move(dense[k]));
        AlgebraElement r;
        r.alg_ = a.alg_;
        r.comps_ = std::move(out);
        return r;
    }

    AlgebraElement scaled(const Rational& c) const {
        if (c.is_zero() || is_zero()) return AlgebraElement();
        AlgebraElement r(*this);
        for (auto& [k, v] : r.comps_) v *= c;
        return r;
    }

    AlgebraElement make_one() const {
        if (!alg_) throw DomainError("zero element has no ambient algebra");
        return unit(alg_);
    }

    // Inverse of u*1 + n with u != 0 and n nilpotent: (1/u) * sum (-n/u)^k.
    AlgebraElement invert() const {
        if (!alg_) throw DomainError("inverse of zero in coefficient algebra");
        Rational u = component(alg_->unit_index());
        if (u.is_zero()) throw DomainError("constant term is not a unit in the coefficient algebra");
        AlgebraElement n = *this - unit(alg_).scaled(u);
        AlgebraElement acc = unit(alg_).scaled(u.inverse());
        AlgebraElement pow = acc; // (1/u) * (-n/u)^k, starting at k = 0
        AlgebraElement step = n.scaled(-u.inverse());
        for (int k = 1; k <= alg_->dim(); ++k) {
            pow = pow * step;
            if (pow.is_zero()) return acc;
            acc += pow;
        }
        throw DomainError("constant term is not a unit in the coefficient algebra");
    }

    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
        if (a.is_zero() && b.is_zero()) return true;
        return a.alg_ == b.alg_ && a.comps_ == b.comps_;
    }
    friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (const auto& [k, c] : comps_) {
            if (!s.empty()) s += " + ";
            s += c.to_string() + "*" + alg_->label(k);
        }
        return s;
    }

private:
    void normalize() {
        std::sort(comps_.begin(), comps_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        CoefficientAlgebra::SparseVec out;
        for (auto& [k, c] : comps_) {
            if (c.is_zero()) continue;
            if (!out.empty() && out.back().first == k)
                out.back().second += c;
            else
                out.emplace_back(k, std::move(c));
        }
        comps_.clear();
        for (auto& kv : out)
            if (!kv.second.is_zero()) comps_.push_back(std::move(kv));
        if (comps_.empty()) alg_ = nullptr;
    }

    void require_same(const AlgebraElement& o) const {
        if (alg_ && o.alg_ && alg_ != o.alg_)
            throw StructuralError("elements of different coefficient algebras");
    }

    const CoefficientAlgebra* alg_;
    CoefficientAlgebra::SparseVec comps_;
};

inline void CoefficientAlgebra::validate_associative() const {
    int n = dim();
    auto mul_basis = [&](int i, int j) { return AlgebraElement(this, product(i, j)); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                AlgebraElement left = (mul_basis(i, j) * AlgebraElement::basis(this, k));
                AlgebraElement right = (AlgebraElement::basis(this, i) * mul_basis(j, k));
                if (left != right)
                    throw StructuralError("multiplication table is not associative at (" +
                                          std::to_string(i) + "," + std::to_string(j) + "," +
                                          std::to_string(k) + ")");
            }
}

} // namespace orbigw

#endif
