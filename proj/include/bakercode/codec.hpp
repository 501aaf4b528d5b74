// Tail-biting multi-branch baker's-map analog code.
//
// Encoder: a block of k source symbols seeds k branch trajectories in a ring,
// branch j starting at {u_j, u_{j+1 mod k}}, so every symbol is transmitted
// twice (once as an x seed, once as the previous branch's y seed). With n
// states per branch the code is a (2kn, k) systematic code of rate 1/(2n).
//
// Decoder: exact maximum likelihood. Receiver-side combining averages the two
// systematic copies, then the decoder enumerates every combination of branch
// sign sequences; within one combination the trajectory is affine in the
// seeds, the squared-error objective is a separable quadratic with a closed
// form minimizer per symbol, and the boundary constraint |x[n-1]| <= 1 clamps
// each minimizer into the segment's support interval. The global minimum over
// all combinations is the ML decision.

#ifndef BAKERCODE_CODEC_HPP
#define BAKERCODE_CODEC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bakercode/baker_map.hpp"

namespace bakercode {

// Sign-combination enumeration is exponential in branches * (states - 1);
// decoding refuses beyond this many hypothesis bits.
inline constexpr int kMaxEnumerationBits = 24;

struct CodeParams {
    int branch_count = 3;        // k
    int states_per_branch = 2;   // n
    // Both copies of each source symbol are transmitted. The single-copy
    // (2kn - k symbol) variant is reserved but not implemented.
    bool systematic_duplicated = true;

    double rate() const { return 1.0 / (2.0 * states_per_branch); }
    int total_symbols() const { return 2 * branch_count * states_per_branch; }

    void validate() const {
        if (branch_count < 2)
            throw std::invalid_argument("CodeParams: need at least 2 branches");
        if (states_per_branch < 2)
            throw std::invalid_argument("CodeParams: need at least 2 states per branch");
        if (!systematic_duplicated)
            throw std::invalid_argument(
                "CodeParams: only the duplicated systematic form is implemented");
    }
};

// k source symbols, each in [-1, 1].
using SourceBlock = std::vector<double>;

struct Codeword {
    std::vector<BranchTrajectory> branches;
};

// Noisy observations of a codeword, [branch][time]; values are unbounded.
struct ReceivedCodeword {
    std::vector<std::vector<double>> rx;
    std::vector<std::vector<double>> ry;
};

struct DecodeResult {
    std::vector<double> estimates;         // one per source symbol, in [-1, 1]
    std::vector<SignSequence> best_signs;  // winning segment labels per branch
    double objective = 0.0;                // residual sum of squares at the decision
};

// Seed range consistent with a hypothesized sign sequence.
struct Interval {
    double lo = -1.0;
    double hi = 1.0;
};

namespace detail {

inline void require_dims(const ReceivedCodeword& r, const CodeParams& params,
                         const char* who) {
    const std::size_t k = static_cast<std::size_t>(params.branch_count);
    const std::size_t n = static_cast<std::size_t>(params.states_per_branch);
    if (r.rx.size() != k || r.ry.size() != k)
        throw std::invalid_argument(std::string(who) + ": branch count mismatch");
    for (std::size_t j = 0; j < k; ++j)
        if (r.rx[j].size() != n || r.ry[j].size() != n)
            throw std::invalid_argument(std::string(who) + ": state count mismatch");
}

}  // namespace detail

// Ring seed assignment: branch j carries {u_j, u_{j+1 mod k}} and iterates
// the baker's map n-1 times.
inline Codeword encode(const SourceBlock& block, const CodeParams& params) {
    params.validate();
    const std::size_t k = static_cast<std::size_t>(params.branch_count);
    if (block.size() != k)
        throw std::invalid_argument("encode: block size must equal branch count");
    for (double u : block)
        if (!in_unit_interval(u))
            throw std::domain_error("encode: source symbol outside [-1, 1]");
    Codeword cw;
    cw.branches.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const PlanePoint seed{block[j], block[(j + 1) % k]};
        cw.branches.push_back(iterate(seed, static_cast<std::size_t>(params.states_per_branch)));
    }
    return cw;
}

// Equal-gain combining of the two received copies of each systematic symbol:
// the x copy of branch j and the y copy of branch j-1 (cyclically) are both
// replaced by their mean. Equivalent to MRC on a homogeneous AWGN channel.
inline ReceivedCodeword combine_systematic(const ReceivedCodeword& r,
                                           const CodeParams& params) {
    params.validate();
    detail::require_dims(r, params, "combine_systematic");
    const std::size_t k = static_cast<std::size_t>(params.branch_count);
    ReceivedCodeword out = r;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t prev = (j + k - 1) % k;
        const double mean = (r.rx[j][0] + r.ry[prev][0]) / 2.0;
        out.rx[j][0] = mean;
        out.ry[prev][0] = mean;
    }
    return out;
}

// Seeds consistent with the final-state constraint -1 <= x[n-1] <= 1 under
// the segment's affine relation, intersected with [-1, 1]. The width before
// intersection is 2 / 2^(n-1).
inline Interval support_interval(const AffineParams& ap) {
    const std::size_t last = ap.length() - 1;
    const double slope = ap.x_slope[last];
    const double offset = ap.x_offset[last];
    const double e1 = (1.0 - offset) / slope;
    const double e2 = (-1.0 - offset) / slope;
    Interval iv;
    iv.lo = std::max(std::min(e1, e2), -1.0);
    iv.hi = std::min(std::max(e1, e2), 1.0);
    return iv;
}

// Squared-error objective of a source hypothesis under fixed sign sequences:
// branch j's x chain is matched against u_j, its y chain against u_{j+1}.
inline double objective(const ReceivedCodeword& r, const SourceBlock& u,
                        const std::vector<SignSequence>& signs) {
    const std::size_t k = r.rx.size();
    if (u.size() != k || signs.size() != k || r.ry.size() != k)
        throw std::invalid_argument("objective: branch count mismatch");
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t n = r.rx[j].size();
        if (r.ry[j].size() != n || signs[j].size() + 1 != n)
            throw std::invalid_argument("objective: state count mismatch");
        const AffineParams ap = affine_params(signs[j]);
        const double ux = u[j];
        const double uy = u[(j + 1) % k];
        for (std::size_t i = 0; i < n; ++i) {
            const double ex = r.rx[j][i] - ap.x_slope[i] * ux - ap.x_offset[i];
            const double ey = r.ry[j][i] - ap.y_slope[i] * uy - ap.y_offset[i];
            total += ex * ex + ey * ey;
        }
    }
    return total;
}

// Unconstrained minimizer of the quadratic objective for fixed signs. Symbol
// j is observed through branch j's x chain and branch j-1's y chain:
//   u*_j = sum_i [xs_j[i](Rx_j[i]-xo_j[i]) + ys_{j-1}[i](Ry_{j-1}[i]-yo_{j-1}[i])]
//          / sum_i [xs_j[i]^2 + ys_{j-1}[i]^2]
// The denominator is >= 2, so the estimate always exists.
inline std::vector<double> closed_form_estimates(const ReceivedCodeword& r,
                                                 const std::vector<SignSequence>& signs) {
    const std::size_t k = r.rx.size();
    if (signs.size() != k || r.ry.size() != k)
        throw std::invalid_argument("closed_form_estimates: branch count mismatch");
    std::vector<AffineParams> ap;
    ap.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t n = r.rx[j].size();
        if (r.ry[j].size() != n || signs[j].size() + 1 != n)
            throw std::invalid_argument("closed_form_estimates: state count mismatch");
        ap.push_back(affine_params(signs[j]));
    }
    std::vector<double> estimates(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t prev = (j + k - 1) % k;
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < r.rx[j].size(); ++i) {
            num += ap[j].x_slope[i] * (r.rx[j][i] - ap[j].x_offset[i]);
            den += ap[j].x_slope[i] * ap[j].x_slope[i];
        }
        for (std::size_t i = 0; i < r.ry[prev].size(); ++i) {
            num += ap[prev].y_slope[i] * (r.ry[prev][i] - ap[prev].y_offset[i]);
            den += ap[prev].y_slope[i] * ap[prev].y_slope[i];
        }
        estimates[j] = num / den;
    }
    return estimates;
}

namespace detail {

// Sign sequences are indexed by (n-1)-bit integers, first label in the most
// significant bit and bit 1 meaning +1, so ascending index order is
// lexicographic order with -1 < +1.
inline SignSequence signs_from_index(std::uint32_t index, int length) {
    SignSequence s(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i)
        s[static_cast<std::size_t>(i)] = ((index >> (length - 1 - i)) & 1u) ? +1 : -1;
    return s;
}

}  // namespace detail

// Exact ML decoding by exhaustive enumeration of the 2^(k(n-1)) sign
// combinations. For each combination the closed-form estimates are clamped
// into their support intervals and the residual objective is evaluated; the
// global minimum wins, ties going to the lexicographically smallest sign
// combination (branch order, -1 < +1).
//
// TODO: each symbol's cost depends only on the segment pair of its two
// adjacent branches, so a ring DP would cut the enumeration from 2^(k(n-1))
// to O(k * 2^(3(n-1))) for large k.
inline DecodeResult ml_decode(const ReceivedCodeword& r, const CodeParams& params) {
    params.validate();
    detail::require_dims(r, params, "ml_decode");
    const int k = params.branch_count;
    const int n = params.states_per_branch;
    const int seq_bits = n - 1;
    const int total_bits = k * seq_bits;
    if (total_bits > kMaxEnumerationBits)
        throw std::invalid_argument(
            "ml_decode: k*(n-1) = " + std::to_string(total_bits) +
            " hypothesis bits exceeds the enumeration cap of " +
            std::to_string(kMaxEnumerationBits));

    const ReceivedCodeword rc = combine_systematic(r, params);

    // Per branch and per sign sequence, the objective restricted to that
    // branch is quadratic in the seeds; precompute its coefficients.
    const std::uint32_t seq_count = 1u << seq_bits;
    struct SeqTables {
        std::vector<double> sx, qx;  // x chain: linear term, constant term
        std::vector<double> sy, qy;  // y chain
    };
    std::vector<double> x_sq(seq_count), y_sq(seq_count);
    std::vector<Interval> support(seq_count);
    std::vector<SeqTables> branch(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        auto& t = branch[static_cast<std::size_t>(j)];
        t.sx.assign(seq_count, 0.0);
        t.qx.assign(seq_count, 0.0);
        t.sy.assign(seq_count, 0.0);
        t.qy.assign(seq_count, 0.0);
    }
    for (std::uint32_t seq = 0; seq < seq_count; ++seq) {
        const AffineParams ap = affine_params(detail::signs_from_index(seq, seq_bits));
        support[seq] = support_interval(ap);
        double xs2 = 0.0, ys2 = 0.0;
        for (int i = 0; i < n; ++i) {
            xs2 += ap.x_slope[i] * ap.x_slope[i];
            ys2 += ap.y_slope[i] * ap.y_slope[i];
        }
        x_sq[seq] = xs2;
        y_sq[seq] = ys2;
        for (int j = 0; j < k; ++j) {
            auto& t = branch[static_cast<std::size_t>(j)];
            double sx = 0.0, qx = 0.0, sy = 0.0, qy = 0.0;
            for (int i = 0; i < n; ++i) {
                const double dx = rc.rx[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -
                                  ap.x_offset[static_cast<std::size_t>(i)];
                const double dy = rc.ry[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -
                                  ap.y_offset[static_cast<std::size_t>(i)];
                sx += ap.x_slope[static_cast<std::size_t>(i)] * dx;
                qx += dx * dx;
                sy += ap.y_slope[static_cast<std::size_t>(i)] * dy;
                qy += dy * dy;
            }
            t.sx[seq] = sx;
            t.qx[seq] = qx;
            t.sy[seq] = sy;
            t.qy[seq] = qy;
        }
    }

    const std::uint32_t seq_mask = seq_count - 1;
    const std::uint64_t combos = std::uint64_t{1} << total_bits;
    double best_obj = std::numeric_limits<double>::infinity();
    std::uint64_t best_combo = 0;
    std::vector<double> best_u(static_cast<std::size_t>(k));
    std::vector<std::uint32_t> seq_of(static_cast<std::size_t>(k));
    std::vector<double> u(static_cast<std::size_t>(k));
    for (std::uint64_t combo = 0; combo < combos; ++combo) {
        // Branch 0's sequence occupies the most significant bits so that
        // ascending combo order is lexicographic over concatenated signs.
        for (int j = 0; j < k; ++j)
            seq_of[static_cast<std::size_t>(j)] =
                static_cast<std::uint32_t>(combo >> ((k - 1 - j) * seq_bits)) & seq_mask;
        double obj = 0.0;
        for (int j = 0; j < k; ++j) {
            const std::size_t prev = static_cast<std::size_t>((j + k - 1) % k);
            const std::uint32_t sj = seq_of[static_cast<std::size_t>(j)];
            const std::uint32_t sp = seq_of[prev];
            const auto& tj = branch[static_cast<std::size_t>(j)];
            const auto& tp = branch[prev];
            const double star = (tj.sx[sj] + tp.sy[sp]) / (x_sq[sj] + y_sq[sp]);
            const double uj = std::clamp(star, support[sj].lo, support[sj].hi);
            u[static_cast<std::size_t>(j)] = uj;
            obj += tj.qx[sj] - 2.0 * uj * tj.sx[sj] + uj * uj * x_sq[sj];
            obj += tp.qy[sp] - 2.0 * uj * tp.sy[sp] + uj * uj * y_sq[sp];
        }
        if (obj < best_obj) {
            best_obj = obj;
            best_combo = combo;
            best_u = u;
        }
    }

    DecodeResult result;
    result.estimates = std::move(best_u);
    result.best_signs.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const std::uint32_t sj =
            static_cast<std::uint32_t>(best_combo >> ((k - 1 - j) * seq_bits)) & seq_mask;
        result.best_signs.push_back(detail::signs_from_index(sj, seq_bits));
    }
    result.objective = objective(rc, result.estimates, result.best_signs);
    return result;
}

// Reference decoder: exhaustive search of the source grid
// {-1, -1+step, ..., 1}^k, each candidate scored by the squared distance
// between its encoding and the (combined) observation.
//
// The search space factorizes: a candidate's x chains depend only on its own
// seed and its y chains only on the neighbouring seed plus the x chain's
// segment, so grid points can be bucketed by segment and minimized per symbol
// instead of enumerating all |grid|^k tuples. The result is identical to the
// naive scan (same candidates, same scores); ties resolve to the smallest
// sign combination and then the smallest grid values.
inline DecodeResult grid_search_decode(const ReceivedCodeword& r, const CodeParams& params,
                                       double step) {
    params.validate();
    detail::require_dims(r, params, "grid_search_decode");
    if (!(step > 0.0))
        throw std::invalid_argument("grid_search_decode: step must be positive");
    const int k = params.branch_count;
    const int n = params.states_per_branch;
    const int seq_bits = n - 1;
    const int total_bits = k * seq_bits;
    if (total_bits > kMaxEnumerationBits)
        throw std::invalid_argument("grid_search_decode: hypothesis bits exceed the cap");
    // Per-symbol minima are tabulated over segment pairs, quadratic in the
    // per-branch segment count.
    if (seq_bits > 8)
        throw std::invalid_argument(
            "grid_search_decode: supports at most 2^8 segments per branch (n <= 9)");

    const ReceivedCodeword rc = combine_systematic(r, params);

    const std::size_t grid_count =
        static_cast<std::size_t>(std::floor(2.0 / step + 1e-9)) + 1;
    std::vector<double> grid(grid_count);
    for (std::size_t t = 0; t < grid_count; ++t)
        grid[t] = std::min(-1.0 + static_cast<double>(t) * step, 1.0);

    const std::uint32_t seq_count = 1u << seq_bits;
    const std::uint32_t seq_mask = seq_count - 1;
    const std::size_t kk = static_cast<std::size_t>(k);

    // x chains: one trajectory per grid value (identical float operations to
    // encode's), its segment label, and the per-branch x residual sums.
    std::vector<std::uint32_t> seg_of(grid_count, 0);
    std::vector<std::vector<double>> dx(kk, std::vector<double>(grid_count, 0.0));
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < grid_count; ++t) {
        xs[0] = grid[t];
        std::uint32_t seg = 0;
        for (int i = 1; i < n; ++i) {
            const double x = xs[static_cast<std::size_t>(i - 1)];
            if (x < 0.0) {
                xs[static_cast<std::size_t>(i)] = 2.0 * x + 1.0;
            } else {
                xs[static_cast<std::size_t>(i)] = 1.0 - 2.0 * x;
                seg |= 1u << (seq_bits - i);
            }
        }
        seg_of[t] = seg;
        for (std::size_t j = 0; j < kk; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                const double e = rc.rx[j][static_cast<std::size_t>(i)] -
                                 xs[static_cast<std::size_t>(i)];
                acc += e * e;
            }
            dx[j][t] = acc;
        }
    }

    // Per symbol j: cheapest grid value inside segment s_j given the previous
    // branch's segment, i.e. min over the bucket of dx_j + dy_{j-1}. The y
    // residuals are streamed one hypothesized segment at a time.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::vector<double>>> best_cost(
        kk, std::vector<std::vector<double>>(seq_count, std::vector<double>(seq_count, inf)));
    std::vector<std::vector<std::vector<std::size_t>>> best_at(
        kk, std::vector<std::vector<std::size_t>>(seq_count,
                                                  std::vector<std::size_t>(seq_count, 0)));
    std::vector<std::vector<double>> dy(kk, std::vector<double>(grid_count, 0.0));
    std::vector<double> ys(static_cast<std::size_t>(n));
    for (std::uint32_t sp = 0; sp < seq_count; ++sp) {
        for (std::size_t t = 0; t < grid_count; ++t) {
            ys[0] = grid[t];
            for (int i = 1; i < n; ++i) {
                const double y = ys[static_cast<std::size_t>(i - 1)];
                const bool plus = ((sp >> (seq_bits - i)) & 1u) != 0;
                ys[static_cast<std::size_t>(i)] = plus ? (1.0 - y) / 2.0 : (y - 1.0) / 2.0;
            }
            for (std::size_t j = 0; j < kk; ++j) {
                double acc = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double e = rc.ry[j][static_cast<std::size_t>(i)] -
                                     ys[static_cast<std::size_t>(i)];
                    acc += e * e;
                }
                dy[j][t] = acc;
            }
        }
        for (std::size_t j = 0; j < kk; ++j) {
            const std::size_t prev = (j + kk - 1) % kk;
            for (std::size_t t = 0; t < grid_count; ++t) {
                const std::uint32_t sj = seg_of[t];
                const double cost = dx[j][t] + dy[prev][t];
                if (cost < best_cost[j][sj][sp]) {
                    best_cost[j][sj][sp] = cost;
                    best_at[j][sj][sp] = t;
                }
            }
        }
    }

    const std::uint64_t combos = std::uint64_t{1} << total_bits;
    double best_obj = inf;
    std::uint64_t best_combo = 0;
    std::vector<std::uint32_t> seq_of(kk);
    for (std::uint64_t combo = 0; combo < combos; ++combo) {
        for (int j = 0; j < k; ++j)
            seq_of[static_cast<std::size_t>(j)] =
                static_cast<std::uint32_t>(combo >> ((k - 1 - j) * seq_bits)) & seq_mask;
        double obj = 0.0;
        for (std::size_t j = 0; j < kk; ++j) {
            const std::size_t prev = (j + kk - 1) % kk;
            obj += best_cost[j][seq_of[j]][seq_of[prev]];
            if (obj == inf) break;
        }
        if (obj < best_obj) {
            best_obj = obj;
            best_combo = combo;
        }
    }

    DecodeResult result;
    result.estimates.resize(kk);
    for (int j = 0; j < k; ++j)
        seq_of[static_cast<std::size_t>(j)] =
            static_cast<std::uint32_t>(best_combo >> ((k - 1 - j) * seq_bits)) & seq_mask;
    for (std::size_t j = 0; j < kk; ++j) {
        const std::size_t prev = (j + kk - 1) % kk;
        result.estimates[j] = grid[best_at[j][seq_of[j]][seq_of[prev]]];
    }
    // Score the winning grid point the way the naive scan would: encode it
    // and accumulate the squared distance branch by branch.
    const Codeword cw = encode(result.estimates, params);
    double obj = 0.0;
    for (std::size_t j = 0; j < kk; ++j) {
        double accx = 0.0, accy = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto& st = cw.branches[j][static_cast<std::size_t>(i)];
            const double ex = rc.rx[j][static_cast<std::size_t>(i)] - st.x;
            const double ey = rc.ry[j][static_cast<std::size_t>(i)] - st.y;
            accx += ex * ex;
            accy += ey * ey;
        }
        obj += accx + accy;
        result.best_signs.push_back(sign_of_trajectory(cw.branches[j]));
    }
    result.objective = obj;
    return result;
}

}  // namespace bakercode

#endif  // BAKERCODE_CODEC_HPP
