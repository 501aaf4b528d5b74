// Continuous-amplitude modulation and the AWGN link.
//
// Analog symbols in [-1, 1] are scaled by the peak amplitude and carried as
// continuous ASK; the x states ride the in-phase stream and the y states the
// quadrature stream, forming a continuous QAM. Noise is i.i.d. Gaussian with
// per-dimension variance N0/2, where N0 is calibrated from the requested
// Ep/N0 and the energy per source pixel.

#ifndef BAKERCODE_CHANNEL_HPP
#define BAKERCODE_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bakercode/codec.hpp"
#include "bakercode/rng.hpp"

namespace bakercode {

enum class EpMode {
    measured,  // energy per pixel taken from the transmitted frame itself
    nominal,   // uniform-source model: symbols_per_pixel * delta^2 / 3
};

struct ChannelConfig {
    double delta = 1.0;               // peak amplitude
    double snr_db = 10.0;             // Ep/N0 in dB; +infinity means noiseless
    EpMode ep_mode = EpMode::measured;
    std::uint64_t seed = 0;
    double symbols_per_pixel = 4.0;   // 2n for the (2kn, k) code

    void validate() const {
        if (!(delta > 0.0))
            throw std::invalid_argument("ChannelConfig: delta must be positive");
        if (!(symbols_per_pixel > 0.0))
            throw std::invalid_argument("ChannelConfig: symbols_per_pixel must be positive");
    }
};

// Equal-length amplitude streams; I carries x states, Q carries y states.
struct ModulatedFrame {
    std::vector<double> i_stream;
    std::vector<double> q_stream;

    std::size_t symbol_count() const { return i_stream.size() + q_stream.size(); }
};

struct NoiseModel {
    double n0 = 0.0;  // one-sided spectral density; 0 means noiseless

    double per_dimension_variance() const { return n0 / 2.0; }
};

// Branch-major, time-major packing of a codeword onto the two streams.
inline ModulatedFrame cqam_pack(const Codeword& cw, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("cqam_pack: delta must be positive");
    ModulatedFrame frame;
    std::size_t total = 0;
    for (const auto& branch : cw.branches) total += branch.size();
    frame.i_stream.reserve(total);
    frame.q_stream.reserve(total);
    for (const auto& branch : cw.branches) {
        for (const PlanePoint& p : branch) {
            frame.i_stream.push_back(delta * p.x);
            frame.q_stream.push_back(delta * p.y);
        }
    }
    return frame;
}

// Noise density from the Ep/N0 operating point. Measured mode divides the
// frame's exact transmitted energy by the number of pixels it carries;
// nominal mode assumes uniform symbols on [-delta, delta].
inline NoiseModel calibrate_n0(const ChannelConfig& cfg, const ModulatedFrame& frame) {
    cfg.validate();
    double ep = 0.0;
    if (cfg.ep_mode == EpMode::measured) {
        if (frame.symbol_count() == 0)
            throw std::invalid_argument("calibrate_n0: empty frame in measured mode");
        double energy = 0.0;
        for (double a : frame.i_stream) energy += a * a;
        for (double a : frame.q_stream) energy += a * a;
        const double pixels = static_cast<double>(frame.symbol_count()) / cfg.symbols_per_pixel;
        ep = energy / pixels;
    } else {
        ep = cfg.symbols_per_pixel * cfg.delta * cfg.delta / 3.0;
    }
    NoiseModel noise;
    noise.n0 = ep / std::pow(10.0, cfg.snr_db / 10.0);
    return noise;
}

// Adds independent N(0, N0/2) samples to every amplitude, I stream first,
// then Q, in order. Deterministic for a given seed; N0 = 0 passes the frame
// through untouched.
inline ModulatedFrame awgn(const ModulatedFrame& frame, const NoiseModel& noise,
                           std::uint64_t seed) {
    if (noise.n0 < 0.0 || !std::isfinite(noise.n0))
        throw std::invalid_argument("awgn: N0 must be finite and non-negative");
    ModulatedFrame out = frame;
    if (noise.n0 == 0.0) return out;
    const double sigma = std::sqrt(noise.per_dimension_variance());
    GaussianSampler gauss(seed);
    for (double& a : out.i_stream) a += sigma * gauss.next();
    for (double& a : out.q_stream) a += sigma * gauss.next();
    return out;
}

// Inverse of cqam_pack's scaling and layout. Noisy amplitudes may fall
// outside [-1, 1]; they are passed through unclipped for the decoder.
inline ReceivedCodeword demodulate(const ModulatedFrame& frame, double delta,
                                   const CodeParams& params) {
    params.validate();
    if (!(delta > 0.0))
        throw std::invalid_argument("demodulate: delta must be positive");
    const std::size_t k = static_cast<std::size_t>(params.branch_count);
    const std::size_t n = static_cast<std::size_t>(params.states_per_branch);
    if (frame.i_stream.size() != k * n || frame.q_stream.size() != k * n)
        throw std::invalid_argument("demodulate: stream length does not match code parameters");
    ReceivedCodeword r;
    r.rx.assign(k, std::vector<double>(n, 0.0));
    r.ry.assign(k, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            r.rx[j][i] = frame.i_stream[j * n + i] / delta;
            r.ry[j][i] = frame.q_stream[j * n + i] / delta;
        }
    }
    return r;
}

}  // namespace bakercode

#endif  // BAKERCODE_CHANNEL_HPP
