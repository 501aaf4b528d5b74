// Folded baker's map kernel: forward and inverse map, trajectory iteration,
// sign sequences and the per-segment affine decomposition that links any
// state of a trajectory back to its seed.
//
// All arithmetic is double precision. The map coefficients (+-2, +-0.5, +-1)
// are exact in binary floating point, so trajectories of dyadic-rational
// seeds are computed exactly.

#ifndef BAKERCODE_BAKER_MAP_HPP
#define BAKERCODE_BAKER_MAP_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bakercode {

// One 2-D state of the map, both coordinates in [-1, 1].
struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
};

// Segment labels, one per transition: entry i is the sign (-1 or +1) of the
// x state at time i. A trajectory of n states carries n-1 labels; the sign
// of the final state never enters the decoder's search.
using SignSequence = std::vector<int>;

// states[0] is the seed, states[i] = baker_forward(states[i-1]).
using BranchTrajectory = std::vector<PlanePoint>;

// sign(0) := +1, matching the map's branch choice at x = 0.
inline int sign_of(double x) { return x < 0.0 ? -1 : +1; }

inline bool in_unit_interval(double v) { return v >= -1.0 && v <= 1.0; }

inline void require_in_square(const PlanePoint& p) {
    if (!in_unit_interval(p.x) || !in_unit_interval(p.y))
        throw std::domain_error("baker map: point outside the unit square [-1,1]^2");
}

// One application of the folded baker's map. The x coordinate is stretched
// by 2 within its half interval, the y coordinate compressed by 1/2, and the
// right half is folded back over the left:
//   x < 0:      {2x + 1, (y - 1)/2}
//   0 <= x <= 1: {1 - 2x, (1 - y)/2}
inline PlanePoint baker_forward(const PlanePoint& p) {
    require_in_square(p);
    if (p.x < 0.0)
        return {2.0 * p.x + 1.0, (p.y - 1.0) / 2.0};
    return {1.0 - 2.0 * p.x, (1.0 - p.y) / 2.0};
}

// Inverse of baker_forward given the sign of the preimage's x state:
//   x[i-1] = -s/2 (x[i] - 1),   y[i-1] = -2 s y[i] + 1.
// Composing with baker_forward under a consistent sign is the identity
// (exactly so for dyadic inputs).
inline PlanePoint baker_inverse(const PlanePoint& p, int sign) {
    require_in_square(p);
    if (sign != -1 && sign != 1)
        throw std::invalid_argument("baker map: segment sign must be -1 or +1");
    const double s = static_cast<double>(sign);
    return {-0.5 * s * (p.x - 1.0), -2.0 * s * p.y + 1.0};
}

// Trajectory of n states starting at the seed (n >= 1).
inline BranchTrajectory iterate(const PlanePoint& seed, std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("iterate: trajectory length must be >= 1");
    require_in_square(seed);
    BranchTrajectory t;
    t.reserve(n);
    t.push_back(seed);
    for (std::size_t i = 1; i < n; ++i)
        t.push_back(baker_forward(t.back()));
    return t;
}

// Segment labels of a trajectory: signs of the x states at times 0 .. n-2.
inline SignSequence sign_of_trajectory(const BranchTrajectory& t) {
    if (t.size() < 2)
        throw std::invalid_argument("sign_of_trajectory: need at least 2 states");
    SignSequence s;
    s.reserve(t.size() - 1);
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        s.push_back(sign_of(t[i].x));
    return s;
}

// Within the segment labelled by a sign sequence the i-times-iterated map is
// affine in the seed:
//   x[i] = x_slope[i] * x[0] + x_offset[i]
//   y[i] = y_slope[i] * y[0] + y_offset[i]
struct AffineParams {
    std::vector<double> x_slope;   // magnitude 2^i, exactly
    std::vector<double> x_offset;
    std::vector<double> y_slope;   // magnitude 2^-i, exactly
    std::vector<double> y_offset;

    std::size_t length() const { return x_slope.size(); }
};

// Coefficient recursion over the sign sequence, seeded with the identity
// relation at time 0:
//   x_slope[i]  = -2 s[i-1] x_slope[i-1]
//   x_offset[i] = 1 - 2 s[i-1] x_offset[i-1]
//   y_slope[i]  = -s[i-1]/2 y_slope[i-1]
//   y_offset[i] = s[i-1]/2 (1 - y_offset[i-1])
// An empty sequence yields just the time-0 identity coefficients.
inline AffineParams affine_params(const SignSequence& signs) {
    const std::size_t n = signs.size() + 1;
    AffineParams ap;
    ap.x_slope.assign(n, 0.0);
    ap.x_offset.assign(n, 0.0);
    ap.y_slope.assign(n, 0.0);
    ap.y_offset.assign(n, 0.0);
    ap.x_slope[0] = 1.0;
    ap.y_slope[0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int si = signs[i - 1];
        if (si != -1 && si != 1)
            throw std::invalid_argument("affine_params: signs must be -1 or +1");
        const double s = static_cast<double>(si);
        ap.x_slope[i] = -2.0 * s * ap.x_slope[i - 1];
        ap.x_offset[i] = 1.0 - 2.0 * s * ap.x_offset[i - 1];
        ap.y_slope[i] = -0.5 * s * ap.y_slope[i - 1];
        ap.y_offset[i] = 0.5 * s * (1.0 - ap.y_offset[i - 1]);
    }
    return ap;
}

}  // namespace bakercode

#endif  // BAKERCODE_BAKER_MAP_HPP
