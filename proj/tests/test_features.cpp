#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sarinv/features.hpp"
#include "sarinv/renderer.hpp"

#include <cmath>
#include <filesystem>
#include <random>

using namespace sarinv;

namespace {

SarImage image_of(const Eigen::MatrixXd& grid) {
    SarImage img;
    img.intensity = grid;
    return img;
}

FeatureVector random_features(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    FeatureVector f(kFeatureDim);
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = uni(rng);
    return f;
}

}  // namespace

TEST_CASE("extract on degenerate images") {
    CHECK(extract(image_of(Eigen::MatrixXd::Zero(128, 128))).isZero());

    const double c = 3.25;
    const FeatureVector f = extract(image_of(Eigen::MatrixXd::Constant(64, 64, c)));
    CHECK(f.size() == kFeatureDim);
    for (int i = 0; i < 272; ++i) CHECK(f[i] == doctest::Approx(std::log1p(c)).epsilon(1e-12));
    CHECK(f[272] == doctest::Approx(std::log1p(c)).epsilon(1e-12));
    CHECK(f[273] == doctest::Approx(0.0));
}

TEST_CASE("extract is deterministic and validates dimensions") {
    std::mt19937_64 rng(5);
    Eigen::MatrixXd grid = Eigen::MatrixXd::Random(128, 128).cwiseAbs();
    CHECK(extract(image_of(grid)) == extract(image_of(grid)));

    CHECK_THROWS_AS(extract(image_of(Eigen::MatrixXd::Zero(100, 128))), std::invalid_argument);
    CHECK_THROWS_AS(extract(image_of(Eigen::MatrixXd::Zero(0, 0))), std::invalid_argument);
}

TEST_CASE("extract pooled grids are transpose-covariant") {
    Eigen::MatrixXd grid = Eigen::MatrixXd::Random(128, 128).cwiseAbs();
    grid(3, 100) = 50.0;  // strongly asymmetric
    const FeatureVector f = extract(image_of(grid));
    const FeatureVector ft = extract(image_of(grid.transpose()));
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
            CHECK(f[i * 16 + j] == doctest::Approx(ft[j * 16 + i]).epsilon(1e-12));
        }
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(f[256 + i * 4 + j] == doctest::Approx(ft[256 + j * 4 + i]).epsilon(1e-12));
        }
    }
    CHECK(f[272] == doctest::Approx(ft[272]));
    CHECK(f[273] == doctest::Approx(ft[273]));
}

TEST_CASE("normalizer fits, clamps and round-trips") {
    std::mt19937_64 rng(11);
    std::vector<FeatureVector> set;
    for (int i = 0; i < 20; ++i) set.push_back(random_features(rng));
    for (auto& f : set) f[7] = 42.0;  // constant dimension

    const FeatureNormalizer norm = fit_normalizer(set);
    CHECK(norm.stddev[7] == 1.0);

    Eigen::VectorXd mean_after = Eigen::VectorXd::Zero(kFeatureDim);
    for (const auto& f : set) mean_after += normalize(f, norm);
    mean_after /= static_cast<double>(set.size());
    CHECK(mean_after.cwiseAbs().maxCoeff() < 1e-9);
    CHECK(normalize(set[0], norm)[7] == 0.0);

    CHECK_THROWS_AS(fit_normalizer(std::vector<FeatureVector>{}), std::invalid_argument);
    CHECK_THROWS_AS(fit_normalizer(std::vector<FeatureVector>{set[0]}), std::invalid_argument);

    SUBCASE("normalization is the expected affine map") {
        const FeatureVector a = random_features(rng);
        const FeatureVector b = random_features(rng);
        const FeatureVector lhs = normalize(2.0 * a + 3.0 * b, norm);
        const FeatureVector rhs =
            ((2.0 * a + 3.0 * b - norm.mean).array() / norm.stddev.array()).matrix();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("two-column text persistence") {
        const std::string path =
            (std::filesystem::temp_directory_path() / "sarinv_norm.txt").string();
        save_normalizer(norm, path);
        const FeatureNormalizer loaded = load_normalizer(path);
        CHECK((loaded.mean - norm.mean).cwiseAbs().maxCoeff() == 0.0);
        CHECK((loaded.stddev - norm.stddev).cwiseAbs().maxCoeff() == 0.0);
        std::filesystem::remove(path);
    }
}

TEST_CASE("feature_l1 is a metric") {
    std::mt19937_64 rng(13);
    FeatureVector zero = FeatureVector::Zero(kFeatureDim);
    FeatureVector e0 = zero;
    e0[0] = 1.0;
    CHECK(feature_l1(zero, zero) == 0.0);
    CHECK(feature_l1(e0, zero) == 1.0);
    CHECK_THROWS_AS(feature_l1(zero, FeatureVector::Zero(3)), std::invalid_argument);

    for (int i = 0; i < 100; ++i) {
        const FeatureVector a = random_features(rng);
        const FeatureVector b = random_features(rng);
        const FeatureVector c = random_features(rng);
        CHECK(feature_l1(a, b) == feature_l1(b, a));
        CHECK(feature_l1(a, b) >= 0.0);
        CHECK(feature_l1(a, a) == 0.0);
        CHECK(feature_l1(a, c) <= feature_l1(a, b) + feature_l1(b, c) + 1e-12);
    }
}

TEST_CASE("azimuth scan of the feature objective bottoms out at the truth") {
    const Scene scene = build_scene(tank_like_mesh(), kTargetTexture, kBackgroundTexture, 5);
    RenderConfig rc;
    rc.samples_per_facet = 32;
    rc.seed = 21;
    const double true_beta = 90.0;
    const FeatureVector target = extract(render(scene, {45.0, true_beta}, rc));

    double best_beta = -1.0;
    double best = 1e300;
    for (double beta = 0.0; beta < 360.0; beta += 5.0) {
        const double j = feature_l1(extract(render(scene, {45.0, beta}, rc)), target);
        if (j < best) {
            best = j;
            best_beta = beta;
        }
    }
    CHECK(best_beta == true_beta);
    CHECK(best == 0.0);  // identical render at the truth
}
