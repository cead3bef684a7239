#include "sarinv/image.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sarinv {

Image8 quantize8(const SarImage& image) {
    const auto& g = image.intensity;
    Image8 out(g.rows(), g.cols());
    const double imax = g.size() > 0 ? g.maxCoeff() : 0.0;
    if (!(imax > 0.0)) {
        out.setZero();
        return out;
    }
    const double denom = std::log1p(imax);
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
        for (Eigen::Index c = 0; c < g.cols(); ++c) {
            const double v = 255.0 * std::log1p(g(r, c)) / denom;
            out(r, c) = static_cast<std::uint8_t>(std::lround(std::min(std::max(v, 0.0), 255.0)));
        }
    }
    return out;
}

void write_pgm(const Image8& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    out << "P5\n" << grid.cols() << " " << grid.rows() << "\n255\n";
    for (Eigen::Index r = 0; r < grid.rows(); ++r) {
        for (Eigen::Index c = 0; c < grid.cols(); ++c) {
            out.put(static_cast<char>(grid(r, c)));
        }
    }
    if (!out) throw std::runtime_error("write_pgm: short write to " + path);
}

void write_pgm(const SarImage& image, const std::string& path) {
    write_pgm(quantize8(image), path);
}

namespace {

// Reads the next header token, skipping whitespace and '#' comment lines.
std::string next_pgm_token(std::istream& in, const std::string& path) {
    std::string tok;
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
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (tok.empty()) throw std::runtime_error("read_pgm: truncated header in " + path);
    return tok;
}

}  // namespace

Image8 read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pgm: cannot open " + path);
    if (next_pgm_token(in, path) != "P5") {
        throw std::runtime_error("read_pgm: " + path + " is not a binary P5 PGM");
    }
    long w = 0, h = 0, maxval = 0;
    try {
        w = std::stol(next_pgm_token(in, path));
        h = std::stol(next_pgm_token(in, path));
        maxval = std::stol(next_pgm_token(in, path));
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("read_pgm: malformed header in " + path);
    }
    if (w <= 0 || h <= 0) throw std::runtime_error("read_pgm: bad dimensions in " + path);
    if (maxval != 255) {
        throw std::runtime_error("read_pgm: " + path + " has maxval " + std::to_string(maxval) +
                                 ", only 255 supported");
    }
    Image8 out(h, w);
    std::vector<char> buf(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
        throw std::runtime_error("read_pgm: truncated pixel data in " + path);
    }
    for (long r = 0; r < h; ++r) {
        for (long c = 0; c < w; ++c) {
            out(r, c) = static_cast<std::uint8_t>(buf[static_cast<std::size_t>(r * w + c)]);
        }
    }
    return out;
}

void write_meta(const std::string& path, const ViewAngles& angles, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_meta: cannot open " + path);
    out.precision(17);
    out << "alpha=" << angles.alpha << "\n"
        << "beta=" << angles.beta << "\n"
        << "seed=" << seed << "\n";
}

ImageMeta read_meta(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_meta: cannot open " + path);
    ImageMeta meta;
    bool have_alpha = false, have_beta = false;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "alpha") {
            meta.angles.alpha = std::stod(value);
            have_alpha = true;
        } else if (key == "beta") {
            meta.angles.beta = std::stod(value);
            have_beta = true;
        } else if (key == "seed") {
            meta.seed = std::stoull(value);
        }
    }
    if (!have_alpha || !have_beta) {
        throw std::runtime_error("read_meta: " + path + " is missing alpha= or beta=");
    }
    return meta;
}

std::string meta_path_for(const std::string& pgm_path) {
    const auto dot = pgm_path.rfind(".pgm");
    if (dot != std::string::npos && dot == pgm_path.size() - 4) {
        return pgm_path.substr(0, dot) + ".meta";
    }
    return pgm_path + ".meta";
}

}  // namespace sarinv
