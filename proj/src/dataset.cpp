#include "sarinv/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sarinv {

namespace {

std::string image_name(int index) {
    std::ostringstream ss;
    ss << "img_" << std::setw(5) << std::setfill('0') << index << ".pgm";
    return ss.str();
}

DatasetManifest render_entries(const Scene& scene, const RenderConfig& config,
                               const std::vector<ViewAngles>& angles, const std::string& out_dir,
                               std::uint64_t seed) {
    std::filesystem::create_directories(out_dir);
    DatasetManifest manifest;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        RenderConfig rc = config;
        rc.seed = derive_seed(seed, 7, i);
        const SarImage image = render(scene, angles[i], rc);
        const std::string path = (std::filesystem::path(out_dir) / image_name(static_cast<int>(i))).string();
        write_pgm(image, path);
        write_meta(meta_path_for(path), angles[i], rc.seed);
        manifest.entries.push_back({path, angles[i].alpha, angles[i].beta, rc.seed});
    }
    return manifest;
}

std::vector<double> lattice(double start, double stop_inclusive, double step) {
    std::vector<double> out;
    for (double v = start; v <= stop_inclusive + 1e-9; v += step) out.push_back(v);
    return out;
}

}  // namespace

std::vector<double> dist_alpha_support(const DistSpec& spec) {
    return lattice(spec.a, spec.b, spec.rho);
}

std::vector<double> dist_beta_support(const DistSpec& spec) {
    // upper endpoint is exclusive: the azimuth lattice wraps at d
    return lattice(spec.c, spec.d - spec.upsilon, spec.upsilon);
}

DatasetManifest gen_dataset(const Scene& scene, const RenderConfig& config, const GridSpec& spec,
                            const std::string& out_dir, std::uint64_t seed) {
    std::vector<ViewAngles> angles;
    for (double a : lattice(spec.alpha_start, spec.alpha_stop, spec.alpha_step)) {
        for (double b : lattice(spec.beta_start, spec.beta_stop, spec.beta_step)) {
            angles.push_back({a, b});
        }
    }
    return render_entries(scene, config, angles, out_dir, seed);
}

DatasetManifest gen_dataset(const Scene& scene, const RenderConfig& config, const DistSpec& spec,
                            const std::string& out_dir, std::uint64_t seed) {
    if (spec.count <= 0) throw std::invalid_argument("gen_dataset: count must be positive");
    const auto alphas = dist_alpha_support(spec);
    const auto betas = dist_beta_support(spec);
    std::mt19937_64 rng(derive_seed(seed, 8));
    std::uniform_int_distribution<std::size_t> pick_alpha(0, alphas.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_beta(0, betas.size() - 1);
    std::vector<ViewAngles> angles;
    angles.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        angles.push_back({alphas[pick_alpha(rng)], betas[pick_beta(rng)]});
    }
    return render_entries(scene, config, angles, out_dir, seed);
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_manifest: cannot open " + path);
    out.precision(17);
    out << "path,alpha,beta,seed\n";
    for (const auto& e : manifest.entries) {
        out << e.path << ',' << e.alpha << ',' << e.beta << ',' << e.seed << "\n";
    }
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_manifest: cannot open " + path);
    DatasetManifest manifest;
    std::string line;
    std::getline(in, line);  // header
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        ManifestEntry e;
        std::string alpha, beta, seed;
        if (!std::getline(ss, e.path, ',') || !std::getline(ss, alpha, ',') ||
            !std::getline(ss, beta, ',') || !std::getline(ss, seed)) {
            throw std::runtime_error("load_manifest: malformed line " + std::to_string(line_no) +
                                     " in " + path);
        }
        e.alpha = std::stod(alpha);
        e.beta = std::stod(beta);
        e.seed = std::stoull(seed);
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

}  // namespace sarinv
