// Grayscale image handling: PGM (P5) input/output, pixel <-> analog symbol
// scaling, block partitioning for the codec, and the MSE/PSNR quality
// metrics computed on 0..255 pixel values.

#ifndef BAKERCODE_IMAGE_HPP
#define BAKERCODE_IMAGE_HPP

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bakercode/codec.hpp"

namespace bakercode {

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major

    std::size_t pixel_count() const { return pixels.size(); }

    bool operator==(const GrayImage& other) const {
        return width == other.width && height == other.height && pixels == other.pixels;
    }
};

// Pixel value to analog symbol: (p - 128) / 128, so 0 -> -1 and 255 -> 127/128.
// Exact in double precision (dyadic with denominator 128).
inline double scale_to_analog(int pixel) {
    if (pixel < 0 || pixel > 255)
        throw std::domain_error("scale_to_analog: pixel outside [0, 255]");
    return static_cast<double>(pixel - 128) / 128.0;
}

// Analog value back to a pixel: round half away from zero, then clamp to
// [0, 255]. Accepts any real; decoder output is already in [-1, 1].
inline int unscale(double v) {
    const double scaled = std::round(v * 128.0 + 128.0);
    if (!(scaled > 0.0)) return 0;  // also catches NaN
    if (scaled >= 255.0) return 255;
    return static_cast<int>(scaled);
}

// Source blocks cut from an image, plus how many mid-gray padding symbols
// were appended to fill the last block.
struct BlockStream {
    std::vector<SourceBlock> blocks;
    int pad_count = 0;
};

// Row-major pixels into blocks of k analog symbols, zero-padded (analog 0.0,
// i.e. mid-gray 128) to a multiple of k.
inline BlockStream partition_blocks(const GrayImage& img, int k) {
    if (k < 2) throw std::invalid_argument("partition_blocks: k must be >= 2");
    BlockStream stream;
    const std::size_t count = img.pixel_count();
    const std::size_t block_count = (count + static_cast<std::size_t>(k) - 1) /
                                    static_cast<std::size_t>(k);
    stream.pad_count = static_cast<int>(block_count * static_cast<std::size_t>(k) - count);
    stream.blocks.reserve(block_count);
    SourceBlock block;
    block.reserve(static_cast<std::size_t>(k));
    for (std::size_t p = 0; p < count; ++p) {
        block.push_back(scale_to_analog(img.pixels[p]));
        if (block.size() == static_cast<std::size_t>(k)) {
            stream.blocks.push_back(block);
            block.clear();
        }
    }
    if (!block.empty()) {
        block.resize(static_cast<std::size_t>(k), 0.0);
        stream.blocks.push_back(block);
    }
    return stream;
}

// Inverse of partition_blocks: flatten, drop padding, quantize back to
// pixels. The analog values may be noisy decoder estimates.
inline GrayImage reassemble(const BlockStream& stream, int width, int height) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("reassemble: dimensions must be positive");
    const std::size_t want = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::size_t have = 0;
    for (const auto& b : stream.blocks) have += b.size();
    if (have != want + static_cast<std::size_t>(stream.pad_count))
        throw std::invalid_argument("reassemble: block stream does not match dimensions");
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.reserve(want);
    for (const auto& b : stream.blocks) {
        for (double v : b) {
            if (img.pixels.size() == want) break;
            img.pixels.push_back(static_cast<std::uint8_t>(unscale(v)));
        }
    }
    return img;
}

// Mean squared pixel error, in the integer 0..255 domain.
inline double mse(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("mse: image dimensions differ");
    double acc = 0.0;
    for (std::size_t p = 0; p < a.pixels.size(); ++p) {
        const double d = static_cast<double>(a.pixels[p]) - static_cast<double>(b.pixels[p]);
        acc += d * d;
    }
    return acc / static_cast<double>(a.pixel_count());
}

// Peak signal-to-noise ratio, 20 log10(255 / sqrt(MSE)) dB. Identical images
// report +infinity.
inline double psnr(const GrayImage& a, const GrayImage& b) {
    const double m = mse(a, b);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(255.0 / std::sqrt(m));
}

namespace detail {

inline std::streamoff stream_offset(std::istream& in) {
    const auto pos = in.tellg();
    return pos < 0 ? std::streamoff{0} : static_cast<std::streamoff>(pos);
}

[[noreturn]] inline void pgm_fail(const std::string& path, std::streamoff offset,
                                  const std::string& message) {
    throw std::runtime_error(path + ": byte " + std::to_string(offset) + ": " + message);
}

// Next whitespace-delimited header token; '#' starts a comment running to
// end of line.
inline std::string pgm_token(std::istream& in, const std::string& path) {
    std::string token;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF) pgm_fail(path, stream_offset(in), "truncated header");
    while (c != EOF && !std::isspace(c) && c != '#') {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c != EOF) in.unget();
    return token;
}

inline int pgm_number(std::istream& in, const std::string& path, const char* what) {
    const std::string token = pgm_token(in, path);
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || value < 0)
        pgm_fail(path, detail::stream_offset(in), std::string("expected ") + what + ", got \"" + token + "\"");
    return value;
}

}  // namespace detail

// Binary PGM (P5) reader, maxval 255 only. Header grammar: "P5", then width,
// height and maxval as decimal tokens separated by whitespace or '#' comment
// lines, then a single whitespace byte before width*height raw pixel bytes.
inline GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    const std::string magic = detail::pgm_token(in, path);
    if (magic != "P5")
        detail::pgm_fail(path, detail::stream_offset(in),
                         "not a binary PGM (magic \"" + magic + "\", want \"P5\")");
    GrayImage img;
    img.width = detail::pgm_number(in, path, "width");
    img.height = detail::pgm_number(in, path, "height");
    const int maxval = detail::pgm_number(in, path, "maxval");
    if (img.width <= 0 || img.height <= 0)
        detail::pgm_fail(path, detail::stream_offset(in), "dimensions must be positive");
    if (maxval != 255)
        detail::pgm_fail(path, detail::stream_offset(in),
                         "unsupported maxval " + std::to_string(maxval) + " (only 255)");
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep))
        detail::pgm_fail(path, detail::stream_offset(in), "expected single whitespace before pixel data");
    const std::size_t count =
        static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    img.pixels.resize(count);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
        detail::pgm_fail(path, detail::stream_offset(in),
                         "truncated pixel payload (" + std::to_string(in.gcount()) + " of " +
                             std::to_string(count) + " bytes)");
    return img;
}

inline void save_pgm(const GrayImage& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixel_count() !=
            static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height))
        throw std::invalid_argument("save_pgm: inconsistent image dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixel_count()));
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace bakercode

#endif  // BAKERCODE_IMAGE_HPP
