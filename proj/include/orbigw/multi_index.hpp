#ifndef ORBIGW_MULTI_INDEX_HPP
#define ORBIGW_MULTI_INDEX_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "orbigw/errors.hpp"

namespace orbigw {

// Exponent vector of a series monomial. Fixed small capacity keeps it
// trivially copyable and cheap to compare; the targets here never exceed a
// handful of variables or double-digit degrees.
class MultiIndex {
public:
    static constexpr int kMaxVars = 16;
    static constexpr int kMaxExponent = 255;

    MultiIndex() : n_(0), deg_(0) { e_.fill(0); }

    explicit MultiIndex(const std::vector<int>& exps) : n_(0), deg_(0) {
        if (exps.size() > kMaxVars) throw StructuralError("too many series variables");
        e_.fill(0);
        n_ = static_cast<std::uint8_t>(exps.size());
        int total = 0;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] < 0 || exps[i] > kMaxExponent) throw StructuralError("exponent out of range");
            e_[i] = static_cast<std::uint8_t>(exps[i]);
            total += exps[i];
        }
        if (total > kMaxExponent) throw StructuralError("total degree out of range");
        deg_ = static_cast<std::uint8_t>(total);
    }

    static MultiIndex zero(int nvars) { return MultiIndex(std::vector<int>(nvars, 0)); }

    static MultiIndex unit(int nvars, int var) {
        std::vector<int> e(nvars, 0);
        e.at(var) = 1;
        return MultiIndex(e);
    }

    int size() const { return n_; }
    int operator[](int i) const { return e_[i]; }
    int total_degree() const { return deg_; }
    bool is_zero() const { return deg_ == 0; }

    MultiIndex plus(const MultiIndex& o) const {
        if (n_ != o.n_) throw StructuralError("multi-index size mismatch");
        MultiIndex r;
        r.n_ = n_;
        int total = deg_ + o.deg_;
        if (total > kMaxExponent) throw StructuralError("total degree out of range");
        r.deg_ = static_cast<std::uint8_t>(total);
        for (int i = 0; i < n_; ++i) r.e_[i] = static_cast<std::uint8_t>(e_[i] + o.e_[i]);
        return r;
    }

    MultiIndex plus_unit(int var) const {
        MultiIndex r(*this);
        if (r.e_[var] == kMaxExponent || r.deg_ == kMaxExponent)
            throw StructuralError("total degree out of range");
        ++r.e_[var];
        ++r.deg_;
        return r;
    }

    // Componentwise difference; false when not >= o.
    bool minus(const MultiIndex& o, MultiIndex* out) const {
        if (n_ != o.n_) throw StructuralError("multi-index size mismatch");
        MultiIndex r;
        r.n_ = n_;
        for (int i = 0; i < n_; ++i) {
            if (e_[i] < o.e_[i]) return false;
            r.e_[i] = static_cast<std::uint8_t>(e_[i] - o.e_[i]);
        }
        r.deg_ = static_cast<std::uint8_t>(deg_ - o.deg_);
        *out = r;
        return true;
    }

    std::vector<int> as_vector() const {
        std::vector<int> v(n_);
        for (int i = 0; i < n_; ++i) v[i] = e_[i];
        return v;
    }

    // Graded-lexicographic: by total degree, then lexicographically.
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        if (a.deg_ != b.deg_) return a.deg_ < b.deg_;
        return std::memcmp(a.e_.data(), b.e_.data(), kMaxVars) < 0;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.n_ == b.n_ && a.deg_ == b.deg_ && std::memcmp(a.e_.data(), b.e_.data(), kMaxVars) == 0;
    }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ull;
        for (int i = 0; i < n_; ++i) {
            h ^= e_[i];
            h *= 1099511628211ull;
        }
        return h;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        std::string s;
        for (int i = 0; i < n_; ++i) {
            if (e_[i] == 0) continue;
            if (!s.empty()) s += " ";
            s += names[i];
            if (e_[i] > 1) s += "^" + std::to_string(int(e_[i]));
        }
        return s.empty() ? "1" : s;
    }

private:
    std::uint8_t n_;
    std::uint8_t deg_;
    std::array<std::uint8_t, kMaxVars> e_;
};

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& m) const { return m.hash(); }
};

} // namespace orbigw

#endif
