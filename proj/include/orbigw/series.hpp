#ifndef ORBIGW_SERIES_HPP
#define ORBIGW_SERIES_HPP

#include <algorithm>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orbigw/errors.hpp"
#include "orbigw/multi_index.hpp"
#include "orbigw/rational.hpp"

namespace orbigw {

// Multivariate power series truncated at a total degree, with exact
// coefficients. Sparse: terms are kept sorted in graded-lexicographic order
// with no stored zeros, so iteration order (and any serialization) is
// canonical. Values are immutable in practice: every operation returns a
// fresh series.
//
// The coefficient type C must provide: default construction (= zero),
// is_zero(), +=, unary -, *, scaled(Rational), make_one(), invert() and ==.
template <class C>
class TruncatedSeries {
public:
    using Term = std::pair<MultiIndex, C>;

    TruncatedSeries() : trunc_(0) {}

    TruncatedSeries(std::vector<std::string> vars, int truncation)
        : vars_(std::move(vars)), trunc_(truncation) {
        if (trunc_ < 0) throw StructuralError("negative truncation");
        if (vars_.size() > MultiIndex::kMaxVars) throw StructuralError("too many series variables");
        if (trunc_ > MultiIndex::kMaxExponent) throw StructuralError("truncation out of range");
    }

    const std::vector<std::string>& variables() const { return vars_; }
    int nvars() const { return static_cast<int>(vars_.size()); }
    int truncation() const { return trunc_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    C coefficient(const MultiIndex& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const MultiIndex& k) { return t.first < k; });
        if (it != terms_.end() && it->first == m) return it->second;
        return C();
    }

    C constant_term() const { return coefficient(MultiIndex::zero(nvars())); }

    void set(const MultiIndex& m, C c) {
        if (m.size() != nvars()) throw StructuralError("multi-index does not match variable list");
        if (m.total_degree() > trunc_) return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const MultiIndex& k) { return t.first < k; });
        if (it != terms_.end() && it->first == m) {
            if (c.is_zero())
                terms_.erase(it);
            else
                it->second = std::move(c);
        } else if (!c.is_zero()) {
            terms_.insert(it, Term(m, std::move(c)));
        }
    }

    void add_term(const MultiIndex& m, const C& c) {
        if (m.total_degree() > trunc_ || c.is_zero()) return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const MultiIndex& k) { return t.first < k; });
        if (it != terms_.end() && it->first == m) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        } else {
            terms_.insert(it, Term(m, c));
        }
    }

    static TruncatedSeries constant(std::vector<std::string> vars, int truncation, C value) {
        TruncatedSeries s(std::move(vars), truncation);
        s.set(MultiIndex::zero(s.nvars()), std::move(value));
        return s;
    }

    static TruncatedSeries variable(const std::vector<std::string>& vars, int truncation, int i, C one) {
        TruncatedSeries s(vars, truncation);
        s.set(MultiIndex::unit(s.nvars(), i), std::move(one));
        return s;
    }

    // Lower the bound (terms above d are dropped); never raises it.
    TruncatedSeries truncated(int d) const {
        if (d >= trunc_) return *this;
        TruncatedSeries s(vars_, d);
        for (const auto& [m, c] : terms_) {
            if (m.total_degree() > d) break;
            s.terms_.push_back(Term(m, c));
        }
        return s;
    }

    // Reinterpret at a new bound. Raising the bound treats the unknown
    // higher coefficients as zero; callers own that reading (the fixed-point
    // iteration below refines them pass by pass).
    TruncatedSeries with_truncation(int d) const {
        if (d < trunc_) return truncated(d);
        TruncatedSeries s(*this);
        s.trunc_ = d;
        return s;
    }

    TruncatedSeries renamed(std::vector<std::string> names) const {
        if (names.size() != vars_.size()) throw StructuralError("renaming arity mismatch");
        TruncatedSeries s(*this);
        s.vars_ = std::move(names);
        return s;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a.vars_ == b.vars_ && a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + c.to_string() + ")";
            if (!m.is_zero()) s += "*" + m.to_string(vars_);
        }
        return s;
    }

    // Bulk load of pre-sorted nonzero terms.
    void adopt_sorted(std::vector<Term> terms) { terms_ = std::move(terms); }

private:
    std::vector<std::string> vars_;
    int trunc_;
    std::vector<Term> terms_;
};

using ScalarSeries = TruncatedSeries<Rational>;

namespace detail {

template <class C>
void require_same_variables(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) {
    if (a.variables() != b.variables())
        throw StructuralError("series variable lists differ");
}

template <class C>
std::vector<std::pair<MultiIndex, C>> collect_sorted(
    std::unordered_map<MultiIndex, C, MultiIndexHash>&& acc) {
    std::vector<std::pair<MultiIndex, C>> out;
    out.reserve(acc.size());
    for (auto& kv : acc)
        if (!kv.second.is_zero()) out.emplace_back(kv.first, std::move(kv.second));
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

template <class C>
C unit_like(const TruncatedSeries<C>& a) {
    if (!a.terms().empty()) return a.terms().front().second.make_one();
    if constexpr (std::is_constructible_v<C, Rational>) {
        return C(Rational(1));
    } else {
        throw DomainError("cannot synthesize a unit coefficient for an empty series");
    }
}

} // namespace detail

template <class C>
TruncatedSeries<C> series_add(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) {
    detail::require_same_variables(a, b);
    int d = std::min(a.truncation(), b.truncation());
    TruncatedSeries<C> r(a.variables(), d);
    std::vector<std::pair<MultiIndex, C>> out;
    auto ia = a.terms().begin(), ea = a.terms().end();
    auto ib = b.terms().begin(), eb = b.terms().end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->first < ib->first)) {
            if (ia->first.total_degree() <= d) out.push_back(*ia);
            ++ia;
        } else if (ia == ea || ib->first < ia->first) {
            if (ib->first.total_degree() <= d) out.push_back(*ib);
            ++ib;
        } else {
            C c = ia->second;
            c += ib->second;
            if (!c.is_zero() && ia->first.total_degree() <= d) out.emplace_back(ia->first, std::move(c));
            ++ia;
            ++ib;
        }
    }
    r.adopt_sorted(std::move(out));
    return r;
}

template <class C>
TruncatedSeries<C> series_neg(const TruncatedSeries<C>& a) {
    TruncatedSeries<C> r(a.variables(), a.truncation());
    std::vector<std::pair<MultiIndex, C>> out;
    out.reserve(a.terms().size());
    for (const auto& [m, c] : a.terms()) out.emplace_back(m, -c);
    r.adopt_sorted(std::move(out));
    return r;
}

template <class C>
TruncatedSeries<C> series_sub(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) {
    return series_add(a, series_neg(b));
}

template <class C>
TruncatedSeries<C> series_scale(const TruncatedSeries<C>& a, const Rational& c) {
    TruncatedSeries<C> r(a.variables(), a.truncation());
    if (c.is_zero()) return r;
    std::vector<std::pair<MultiIndex, C>> out;
    out.reserve(a.terms().size());
    for (const auto& [m, v] : a.terms()) out.emplace_back(m, v.scaled(c));
    r.adopt_sorted(std::move(out));
    return r;
}

// Cauchy product with heterogeneous coefficient types; combine(a,b) must be
// bilinear into the result coefficient type.
template <class CR, class CA, class CB, class Combine>
TruncatedSeries<CR> series_mul_mixed(const TruncatedSeries<CA>& a, const TruncatedSeries<CB>& b,
                                     Combine&& combine) {
    if (a.variables() != b.variables()) throw StructuralError("series variable lists differ");
    int d = std::min(a.truncation(), b.truncation());
    TruncatedSeries<CR> r(a.variables(), d);
    std::unordered_map<MultiIndex, CR, MultiIndexHash> acc;
    acc.reserve(a.terms().size() + b.terms().size());
    for (const auto& [ma, ca] : a.terms()) {
        int room = d - ma.total_degree();
        if (room < 0) break;
        for (const auto& [mb, cb] : b.terms()) {
            if (mb.total_degree() > room) break; // terms are sorted by total degree
            acc[ma.plus(mb)] += combine(ca, cb);
        }
    }
    r.adopt_sorted(detail::collect_sorted(std::move(acc)));
    return r;
}

template <class C>
TruncatedSeries<C> series_mul(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) {
    return series_mul_mixed<C>(a, b, [](const C& x, const C& y) { return x * y; });
}

// Scalar series times coefficient-algebra series.
template <class C>
TruncatedSeries<C> series_mul_scalar(const ScalarSeries& a, const TruncatedSeries<C>& b) {
    return series_mul_mixed<C>(a, b, [](const Rational& x, const C& y) { return y.scaled(x); });
}

// Multiplicative inverse. Requires an invertible constant term; the result
// satisfies a * reciprocal(a) = 1 up to the truncation. Newton iteration
// x <- x(2 - ax) doubles the valid degree each round.
template <class C>
TruncatedSeries<C> series_reciprocal(const TruncatedSeries<C>& a) {
    C c0 = a.constant_term();
    if (c0.is_zero()) throw DomainError("reciprocal of a series with zero constant term");
    C c0inv = c0.invert(); // throws DomainError when not a unit
    C one = c0inv.make_one();
    int d = a.truncation();
    TruncatedSeries<C> x = TruncatedSeries<C>::constant(a.variables(), d, c0inv);
    TruncatedSeries<C> two = TruncatedSeries<C>::constant(a.variables(), d, one.scaled(Rational(2)));
    for (int valid = 1; valid <= d; valid *= 2)
        x = series_mul(x, series_sub(two, series_mul(a, x)));
    return x;
}

// exp(a) = sum a^k / k!, for a with zero constant term (finite by truncation).
template <class C>
TruncatedSeries<C> series_exp(const TruncatedSeries<C>& a) {
    if (!a.constant_term().is_zero())
        throw DomainError("exp of a series with nonzero constant term");
    int d = a.truncation();
    TruncatedSeries<C> unit =
        TruncatedSeries<C>::constant(a.variables(), d, detail::unit_like(a));
    if (a.is_zero()) return unit;
    // Horner: 1 + a(1 + a/2(1 + a/3(...)))
    TruncatedSeries<C> r = unit;
    for (int k = d; k >= 1; --k)
        r = series_add(unit, series_scale(series_mul(a, r), Rational(1, k)));
    return r;
}

// Composes a batch of series with a common substitution. Every image must
// have zero constant term (the substitution is filtration-preserving, which
// is what keeps truncation exact). Images are series in the output variable
// list; fs are series over the input variables, one result per input series.
//
// Implementation: depth-first walk over input monomials, carrying the power
// product of the images along the path, so each power product is formed once
// and shared by the whole batch.
template <class C>
std::vector<TruncatedSeries<C>> series_substitute_batch(
    const std::vector<const TruncatedSeries<C>*>& fs, const std::vector<ScalarSeries>& images) {
    if (fs.empty()) return {};
    int n = fs[0]->nvars();
    if (n == 0) throw StructuralError("substitution needs at least one variable");
    if (static_cast<int>(images.size()) != n)
        throw StructuralError("substitution needs one image per variable");
    int d = fs[0]->truncation();
    for (const auto* f : fs) {
        if (f->nvars() != n || f->variables() != fs[0]->variables())
            throw StructuralError("series variable lists differ");
        d = std::min(d, f->truncation());
    }
    for (const auto& g : images) {
        if (g.variables() != images[0].variables())
            throw StructuralError("images must share a variable list");
        if (!g.constant_term().is_zero())
            throw DomainError("substitution image has nonzero constant term");
        d = std::min(d, g.truncation());
    }

    using Acc = std::unordered_map<MultiIndex, C, MultiIndexHash>;
    std::vector<Acc> acc(fs.size());

    MultiIndex mzero = MultiIndex::zero(n);
    MultiIndex out_zero = MultiIndex::zero(images.empty() ? 0 : images[0].nvars());
    for (std::size_t b = 0; b < fs.size(); ++b) {
        C c = fs[b]->coefficient(mzero);
        if (!c.is_zero()) acc[b][out_zero] += c;
    }

    struct Walker {
        const std::vector<const TruncatedSeries<C>*>& fs;
        const std::vector<ScalarSeries>& images;
        std::vector<Acc>& acc;
        int d;

        void visit(const MultiIndex& m, const ScalarSeries& power, int max_var) {
            for (std::size_t b = 0; b < fs.size(); ++b) {
                C c = fs[b]->coefficient(m);
                if (c.is_zero()) continue;
                for (const auto& [pm, pc] : power.terms()) acc[b][pm] += c.scaled(pc);
            }
            if (m.total_degree() >= d) return;
            for (int j = 0; j <= max_var; ++j) {
                ScalarSeries next = series_mul(power, images[j]);
                if (next.is_zero()) continue;
                visit(m.plus_unit(j), next, j);
            }
        }
    };

    Walker w{fs, images, acc, d};
    if (n > 0 && d > 0) {
        for (int j = 0; j < n; ++j) {
            ScalarSeries p = images[j].truncated(d);
            if (!p.is_zero()) w.visit(MultiIndex::unit(n, j), p, j);
        }
    }

    std::vector<TruncatedSeries<C>> results;
    results.reserve(fs.size());
    for (std::size_t b = 0; b < fs.size(); ++b) {
        TruncatedSeries<C> s(images[0].variables(), d);
        s.adopt_sorted(detail::collect_sorted(std::move(acc[b])));
        results.push_back(std::move(s));
    }
    return results;
}

template <class C>
TruncatedSeries<C> series_substitute(const TruncatedSeries<C>& f,
                                     const std::vector<ScalarSeries>& images) {
    std::vector<const TruncatedSeries<C>*> fs{&f};
    return std::move(series_substitute_batch(fs, images)[0]);
}

// Inverts a near-identity coordinate change: each image must be its own
// variable plus terms of total degree >= 2. Returns the inverse images,
// expressed in the variables named out_names; composing in either order
// gives the identity up to the truncation.
inline std::vector<ScalarSeries> invert_triangular_map(const std::vector<ScalarSeries>& forward,
                                                       const std::vector<std::string>& out_names) {
    int n = static_cast<int>(forward.size());
    if (n == 0) throw StructuralError("empty coordinate change");
    if (static_cast<int>(out_names.size()) != n)
        throw StructuralError("output name count mismatch");
    int d = forward[0].truncation();
    for (const auto& f : forward) {
        if (f.variables() != forward[0].variables() || f.nvars() != n)
            throw StructuralError("coordinate change must be square over one variable list");
        d = std::min(d, f.truncation());
    }
    if (d < 1) throw NonInvertibleMap("coordinate change truncated below its linear part");
    std::vector<ScalarSeries> higher;
    higher.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (!forward[i].constant_term().is_zero())
            throw NonInvertibleMap("coordinate change has a constant term");
        for (int j = 0; j < n; ++j) {
            Rational lin = forward[i].coefficient(MultiIndex::unit(n, j));
            if (lin != Rational(i == j ? 1 : 0))
                throw NonInvertibleMap("linear part of the coordinate change is not the identity");
        }
        ScalarSeries h = forward[i].truncated(d);
        h.set(MultiIndex::unit(n, i), Rational(0));
        higher.push_back(std::move(h));
    }

    std::vector<ScalarSeries> inv;
    inv.reserve(n);
    for (int i = 0; i < n; ++i)
        inv.push_back(ScalarSeries::variable(out_names, 1, i, Rational(1)));
    // Fixed point q = X - h(q); each pass gains one valid degree, so the
    // working truncation climbs with the pass index.
    for (int step = 2; step <= d; ++step) {
        std::vector<ScalarSeries> cur;
        cur.reserve(n);
        for (int i = 0; i < n; ++i) cur.push_back(inv[i].with_truncation(step));
        std::vector<ScalarSeries> htr;
        htr.reserve(n);
        for (int i = 0; i < n; ++i) htr.push_back(higher[i].truncated(step));
        std::vector<const ScalarSeries*> hp;
        hp.reserve(n);
        for (int i = 0; i < n; ++i) hp.push_back(&htr[i]);
        std::vector<ScalarSeries> comp = series_substitute_batch(hp, cur);
        for (int i = 0; i < n; ++i)
            inv[i] = series_sub(ScalarSeries::variable(out_names, step, i, Rational(1)), comp[i]);
    }
    for (int i = 0; i < n; ++i) inv[i] = inv[i].with_truncation(d);
    return inv;
}

} // namespace orbigw

#endif
