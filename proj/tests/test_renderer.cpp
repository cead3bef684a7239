#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sarinv/features.hpp"
#include "sarinv/renderer.hpp"
#include "support/oracles.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>

using namespace sarinv;
namespace fs = std::filesystem;

namespace {

std::string temp_file(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

Scene ground_only_scene(double side, int subdiv, double texture) {
    Scene scene;
    scene.ground = ground_plane(side, subdiv);
    scene.ground.face_texture.assign(static_cast<std::size_t>(scene.ground.face_count()), texture);
    return scene;
}

}  // namespace

TEST_CASE("gamma sampling matches the analytic moments") {
    const int n = 1'000'000;
    {
        const GammaTexture tex{2.311, 0.162};
        const auto draws = sample_gamma(tex, n, 99);
        const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
        const double expected = 2.311 * 0.162;  // 0.374382
        CHECK(mean > expected * 0.99);
        CHECK(mean < expected * 1.01);
    }
    {
        const GammaTexture tex{2.867, 0.029};
        const auto draws = sample_gamma(tex, n, 123);
        const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
        double var = 0.0;
        for (double d : draws) var += (d - mean) * (d - mean);
        var /= n;
        const double expected = 2.867 * 0.029 * 0.029;  // 0.002411
        CHECK(var > expected * 0.97);
        CHECK(var < expected * 1.03);
    }
}

TEST_CASE("gamma sampling is deterministic and validates parameters") {
    CHECK(sample_gamma({2.0, 0.5}, 100, 7) == sample_gamma({2.0, 0.5}, 100, 7));
    CHECK(sample_gamma({2.0, 0.5}, 100, 7) != sample_gamma({2.0, 0.5}, 100, 8));
    CHECK(sample_gamma({1.0, 1.0}, 0, 1).empty());
    CHECK_THROWS_AS(sample_gamma({0.0, 1.0}, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_gamma({1.0, -1.0}, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_gamma({1.0, 1.0}, -1, 1), std::invalid_argument);
}

TEST_CASE("build_scene assigns one texture draw per facet") {
    const TriangleMesh box = box_mesh(1, 1, 1);
    const Scene scene = build_scene(box, kTargetTexture, kBackgroundTexture, 5);
    CHECK(scene.target.face_texture.size() == 12);
    CHECK(scene.ground.face_texture.size() == static_cast<std::size_t>(scene.ground.face_count()));
    for (double t : scene.target.face_texture) CHECK(t > 0.0);

    const Scene again = build_scene(box, kTargetTexture, kBackgroundTexture, 5);
    CHECK(scene.target.face_texture == again.target.face_texture);
    CHECK(scene.ground.face_texture == again.ground.face_texture);

    // vanishing scale collapses the ground textures toward zero
    const Scene dark = build_scene(box, kTargetTexture, GammaTexture{2.867, 1e-12}, 5);
    for (double t : dark.ground.face_texture) CHECK(t < 1e-9);

    TriangleMesh empty;
    CHECK_THROWS_AS(build_scene(empty, kTargetTexture, kBackgroundTexture, 5), std::invalid_argument);

    TriangleMesh sunken = box;
    for (auto& v : sunken.vertices) v.z() -= 0.5;
    CHECK_THROWS_AS(build_scene(sunken, kTargetTexture, kBackgroundTexture, 5), std::invalid_argument);
}

TEST_CASE("ground-only render covers the footprint without shadow") {
    const Scene scene = ground_only_scene(8.0, 16, 1.0);
    RenderConfig rc;
    rc.samples_per_facet = 128;
    rc.seed = 3;
    const RenderParts parts = render_parts(scene, {45.0, 0.0}, rc);
    const auto& frame = parts.frame;

    const double s = std::sin(deg2rad(45.0));
    const int col_lo = frame.azimuth_bin(-4.0) + 2;
    const int col_hi = frame.azimuth_bin(4.0) - 2;
    const int row_lo = frame.range_bin(frame.slant_center - 4.0 * s) + 2;
    const int row_hi = frame.range_bin(frame.slant_center + 4.0 * s) - 2;
    REQUIRE(col_lo < col_hi);
    REQUIRE(row_lo < row_hi);
    for (int r = row_lo; r <= row_hi; ++r) {
        for (int c = col_lo; c <= col_hi; ++c) {
            CHECK(parts.ground(r, c) > 0.0);
        }
    }
    CHECK(parts.target.sum() == 0.0);
}

TEST_CASE("render is deterministic and azimuth-periodic") {
    const Scene scene = build_scene(box_mesh(1, 1, 1), kTargetTexture, kBackgroundTexture, 5);
    RenderConfig rc;
    rc.samples_per_facet = 32;
    rc.seed = 17;
    const SarImage a = render(scene, {52.0, 123.25}, rc);
    const SarImage b = render(scene, {52.0, 123.25}, rc);
    CHECK(a.intensity == b.intensity);

    const SarImage c = render(scene, {52.0, 123.25 + 360.0}, rc);
    CHECK(a.intensity == c.intensity);

    RenderConfig other = rc;
    other.seed = 18;
    const SarImage d = render(scene, {52.0, 123.25}, other);
    CHECK(a.intensity != d.intensity);
}

TEST_CASE("render is linear in the face textures") {
    Scene scene = build_scene(box_mesh(1, 1, 1), kTargetTexture, kBackgroundTexture, 9);
    RenderConfig rc;
    rc.samples_per_facet = 32;
    rc.seed = 4;
    const SarImage base = render(scene, {40.0, 77.25}, rc);

    Scene doubled = scene;
    for (auto& t : doubled.target.face_texture) t *= 2.0;
    for (auto& t : doubled.ground.face_texture) t *= 2.0;
    const SarImage twice = render(doubled, {40.0, 77.25}, rc);
    CHECK(twice.intensity == (2.0 * base.intensity).eval());

    Scene scaled = scene;
    for (auto& t : scaled.target.face_texture) t *= 1.7;
    for (auto& t : scaled.ground.face_texture) t *= 1.7;
    const SarImage general = render(scaled, {40.0, 77.25}, rc);
    CHECK(((general.intensity - 1.7 * base.intensity).cwiseAbs().maxCoeff()) <
          1e-12 * base.intensity.maxCoeff());
}

TEST_CASE("unit box casts a shadow behind its return") {
    const Scene scene = build_scene(box_mesh(1, 1, 1), kTargetTexture, kBackgroundTexture, 5);
    Scene ground_only = scene;
    ground_only.target = TriangleMesh{};

    for (double alpha : {30.0, 45.0, 60.0, 75.0}) {
        CAPTURE(alpha);
        RenderConfig rc;
        rc.seed = 6;
        const RenderParts full = render_parts(scene, {alpha, 0.0}, rc);
        const RenderParts open = render_parts(ground_only, {alpha, 0.0}, rc);
        const auto& frame = full.frame;

        // target extent and expected shadow interval from the 2-D ray-cast oracle
        const auto shadow_x = oracle::box_shadow_interval(-0.5, 0.5, 1.0, alpha);
        const double sa = std::sin(deg2rad(alpha));
        // ground x maps to slant range d - x sin(alpha); the interval flips
        const int expected_row_lo = frame.range_bin(frame.slant_center - 0.5 * sa);
        const int expected_row_hi = frame.range_bin(frame.slant_center - shadow_x.x_lo * sa);

        int target_min_row = frame.size;
        double target_peak = 0.0;
        int target_peak_row = 0;
        for (int r = 0; r < frame.size; ++r) {
            for (int c = 0; c < frame.size; ++c) {
                if (full.target(r, c) > 0.0) target_min_row = std::min(target_min_row, r);
                if (full.target(r, c) > target_peak) {
                    target_peak = full.target(r, c);
                    target_peak_row = r;
                }
            }
        }
        REQUIRE(target_min_row < frame.size);

        int shadow_count = 0;
        int shadow_min_row = frame.size;
        for (int r = 0; r < frame.size; ++r) {
            for (int c = 0; c < frame.size; ++c) {
                const bool shadowed = open.ground(r, c) > 0.0 && full.ground(r, c) == 0.0;
                if (!shadowed) continue;
                ++shadow_count;
                shadow_min_row = std::min(shadow_min_row, r);
                CHECK(r > target_min_row);           // strictly beyond the nearest return
                CHECK(r >= expected_row_lo - 1);     // within the ray-cast interval
                CHECK(r <= expected_row_hi + 1);
                const double x_prime = frame.x_min + (c + 0.5) * frame.bin_x;
                CHECK(std::abs(x_prime) < 0.5 + 2.0 * frame.bin_x);  // behind the box only
            }
        }
        CHECK(shadow_count >= 20);
        CHECK(shadow_min_row > target_peak_row);  // deeper than the brightest return
    }
}

TEST_CASE("adding a facet that occludes nothing never reduces energy") {
    const Scene base = ground_only_scene(4.0, 16, 1.0);
    RenderConfig rc;
    rc.samples_per_facet = 32;
    rc.seed = 2;
    const SarImage before = render(base, {45.0, 0.0}, rc);

    Scene augmented = base;
    augmented.target.vertices = {{-0.15, 2.2, 0.3}, {0.15, 2.2, 0.3}, {0.0, 2.45, 0.3}};
    augmented.target.faces = {{0, 1, 2}};
    augmented.target.face_texture = {1.0};
    // auto windows key off the ground patch, so the frame is unchanged
    const SarImage after = render(augmented, {45.0, 0.0}, rc);

    CHECK(after.intensity.sum() > before.intensity.sum());
    CHECK(((after.intensity - before.intensity).array() >= 0.0).all());
}

TEST_CASE("render validates incidence and config") {
    const Scene scene = build_scene(box_mesh(1, 1, 1), kTargetTexture, kBackgroundTexture, 5);
    RenderConfig rc;
    CHECK_THROWS_AS(render(scene, {20.0, 0.0}, rc), std::out_of_range);
    CHECK_THROWS_AS(render(scene, {80.0, 0.0}, rc), std::out_of_range);

    RenderConfig tiny = rc;
    tiny.image_size = 8;
    CHECK_THROWS_AS(render(scene, {45.0, 0.0}, tiny), std::invalid_argument);

    RenderConfig no_samples = rc;
    no_samples.samples_per_facet = 0;
    CHECK_THROWS_AS(render(scene, {45.0, 0.0}, no_samples), std::invalid_argument);

    Scene empty;
    CHECK_THROWS_AS(render(empty, {45.0, 0.0}, rc), std::invalid_argument);
}

TEST_CASE("speckle is multiplicative and seeded") {
    const Scene scene = build_scene(box_mesh(1, 1, 1), kTargetTexture, kBackgroundTexture, 5);
    RenderConfig rc;
    rc.samples_per_facet = 16;
    rc.seed = 10;
    rc.speckle = true;
    const SarImage a = render(scene, {45.0, 10.0}, rc);
    const SarImage b = render(scene, {45.0, 10.0}, rc);
    CHECK(a.intensity == b.intensity);
    CHECK((a.intensity.array() >= 0.0).all());

    rc.speckle = false;
    const SarImage clean = render(scene, {45.0, 10.0}, rc);
    CHECK(a.intensity != clean.intensity);
}

TEST_CASE("primitive meshes") {
    const TriangleMesh box = box_mesh(1, 1, 1);
    CHECK(box.face_count() == 12);
    CHECK(box.total_area() == doctest::Approx(6.0).epsilon(1e-12));
    CHECK_NOTHROW(validate_mesh(box));

    const TriangleMesh wedge = wedge_mesh(1.0, 2.0, 0.5);
    CHECK(wedge.face_count() == 8);
    CHECK_NOTHROW(validate_mesh(wedge));
    for (int f = 0; f < wedge.face_count(); ++f) CHECK(wedge.face_area(f) > 0.0);

    CHECK_THROWS_AS(box_mesh(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(wedge_mesh(1.0, -1.0, 1.0), std::invalid_argument);

    const TriangleMesh tank = tank_like_mesh();
    CHECK_NOTHROW(validate_mesh(tank));
    const Scene scene = build_scene(tank, kTargetTexture, kBackgroundTexture, 5);
    RenderConfig rc;
    rc.samples_per_facet = 32;
    rc.seed = 1;
    const FeatureVector f0 = extract(render(scene, {45.0, 0.0}, rc));
    const FeatureVector f90 = extract(render(scene, {45.0, 90.0}, rc));
    CHECK(feature_l1(f0, f90) > 0.0);  // heading is identifiable
}

TEST_CASE("obj loader handles the subset and rejects malformed input") {
    const std::string path = temp_file("sarinv_quad.obj");
    {
        std::ofstream out(path);
        out << "# quad\n"
            << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
            << "o thing\n"
            << "f 1 2 3 4\n";
    }
    const TriangleMesh mesh = load_obj(path);
    CHECK(mesh.vertex_count() == 4);
    CHECK(mesh.face_count() == 2);  // fan triangulation

    {
        std::ofstream out(path);
        out << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n";
    }
    CHECK_THROWS_WITH_AS(load_obj(path), doctest::Contains("line 4"), std::runtime_error);

    {
        std::ofstream out(path);
        out << "v 0 0 nope\n";
    }
    CHECK_THROWS_WITH_AS(load_obj(path), doctest::Contains("line 1"), std::runtime_error);

    CHECK_THROWS_AS(load_obj(temp_file("sarinv_missing_file.obj")), std::runtime_error);
    fs::remove(path);
}

TEST_CASE("pgm round trip is lossless at 8 bits") {
    SarImage image;
    image.intensity = Eigen::MatrixXd(3, 4);
    image.intensity << 0, 0.5, 2.0, 10.0, 3.0, 7.5, 0.25, 1.0, 9.0, 0.0, 4.2, 6.6;
    const std::string path = temp_file("sarinv_test.pgm");
    write_pgm(image, path);
    const Image8 loaded = read_pgm(path);
    CHECK(loaded == quantize8(image));

    write_meta(meta_path_for(path), {47.5, 213.25}, 99);
    const ImageMeta meta = read_meta(meta_path_for(path));
    CHECK(meta.angles.alpha == 47.5);
    CHECK(meta.angles.beta == 213.25);
    CHECK(meta.seed == 99);

    SUBCASE("flat image quantizes to zeros") {
        SarImage flat;
        flat.intensity = Eigen::MatrixXd::Zero(2, 2);
        CHECK(quantize8(flat).maxCoeff() == 0);
    }

    SUBCASE("truncated payload is a parse error") {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "P5\n4 3\n255\n";
        out.put(1);
        out.close();
        CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("truncated"), std::runtime_error);
    }

    SUBCASE("wrong magic or maxval is rejected") {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "P2\n2 2\n255\n1 2 3 4\n";
        out.close();
        CHECK_THROWS_AS(read_pgm(path), std::runtime_error);

        std::ofstream out2(path, std::ios::binary | std::ios::trunc);
        out2 << "P5\n2 2\n65535\n";
        for (int i = 0; i < 8; ++i) out2.put(0);
        out2.close();
        CHECK_THROWS_AS(read_pgm(path), std::runtime_error);
    }
    fs::remove(path);
    fs::remove(meta_path_for(path));
}

TEST_CASE("meta path derivation") {
    CHECK(meta_path_for("a/b/img.pgm") == "a/b/img.meta");
    CHECK(meta_path_for("plain") == "plain.meta");
}
