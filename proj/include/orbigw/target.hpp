#ifndef ORBIGW_TARGET_HPP
#define ORBIGW_TARGET_HPP

#include <numeric>
#include <string>
#include <vector>

#include "orbigw/errors.hpp"
#include "orbigw/rational.hpp"

namespace orbigw {

// A Calabi-Yau threefold complete intersection in a weighted projective
// stack: the weights of the ambient coordinates and the degrees of the
// defining equations.
struct TargetSpec {
    std::vector<long> weights; // w_0 .. w_n
    std::vector<long> degrees; // b_1 .. b_{n-3}

    int n() const { return static_cast<int>(weights.size()) - 1; }
    long lcm_weights() const {
        long w = 1;
        for (long wi : weights) w = lcm_long(w, wi);
        return w;
    }
};

inline TargetSpec validate_target(const std::vector<long>& weights,
                                  const std::vector<long>& degrees) {
    if (weights.empty() || degrees.empty())
        throw ValidationError("weights and degrees must be non-empty");
    for (long w : weights)
        if (w <= 0) throw ValidationError("weights must be positive");
    for (long b : degrees)
        if (b <= 0) throw ValidationError("degrees must be positive");
    long g = 0;
    for (long w : weights) g = gcd_long(g, w);
    if (g != 1) throw ValidationError("gcd of the weights must be 1 (got " + std::to_string(g) + ")");
    long sw = std::accumulate(weights.begin(), weights.end(), 0L);
    long sb = std::accumulate(degrees.begin(), degrees.end(), 0L);
    if (sw != sb)
        throw ValidationError("Calabi-Yau condition violated: sum of degrees " + std::to_string(sb) +
                              " != sum of weights " + std::to_string(sw));
    if (degrees.size() + 4 != weights.size())
        throw ValidationError("codimension mismatch: a threefold needs #degrees = #weights - 4");
    return TargetSpec{weights, degrees};
}

} // namespace orbigw

#endif
