#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sarinv/geometry.hpp"

#include <cmath>
#include <random>

using namespace sarinv;

TEST_CASE("rotation matrix at the axis-aligned angles") {
    const RotationMatrix top = rotation_matrix({90.0, 0.0});
    Eigen::Matrix3d expected_top;
    expected_top << -1, 0, 0, 0, 1, 0, 0, 0, -1;
    CHECK((top - expected_top).cwiseAbs().maxCoeff() < 1e-12);

    const RotationMatrix nadir = rotation_matrix({0.0, 0.0});
    Eigen::Matrix3d expected_nadir;
    expected_nadir << -1, 0, 0, 0, 0, -1, 0, -1, 0;
    CHECK((nadir - expected_nadir).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rotation matrix is a proper rotation") {
    CHECK(rotation_matrix({45.0, 30.0}).determinant() == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> alpha(-90.0, 90.0);
    std::uniform_real_distribution<double> beta(-720.0, 720.0);
    for (int i = 0; i < 1000; ++i) {
        const RotationMatrix r = rotation_matrix({alpha(rng), beta(rng)});
        CHECK((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(r.determinant() - 1.0) < 1e-9);
    }
}

TEST_CASE("rotation matrix is exactly periodic in azimuth") {
    for (double beta : {0.0, 17.25, 123.0, 359.5}) {
        const RotationMatrix a = rotation_matrix({52.0, beta});
        const RotationMatrix b = rotation_matrix({52.0, beta + 360.0});
        CHECK(a == b);
    }
}

TEST_CASE("to_radar_frame") {
    TriangleMesh mesh;
    mesh.vertices = {{1.0, 2.0, 3.0}};

    SUBCASE("vertex at the antenna maps to the origin") {
        const Vec3 antenna(1.0, 2.0, 3.0);
        const TriangleMesh out = to_radar_frame(mesh, {33.0, 210.0}, antenna);
        CHECK(out.vertices[0].norm() < 1e-12);
    }

    SUBCASE("grazing view with zero azimuth flips x and z") {
        const TriangleMesh out = to_radar_frame(mesh, {90.0, 0.0}, Vec3::Zero());
        CHECK(out.vertices[0].x() == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(out.vertices[0].y() == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(out.vertices[0].z() == doctest::Approx(-3.0).epsilon(1e-12));
    }

    SUBCASE("rotation round trip recovers the translated vertex") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> uni(-10.0, 10.0);
        for (int i = 0; i < 100; ++i) {
            const ViewAngles angles{uni(rng) * 9.0, uni(rng) * 36.0};
            const Vec3 v(uni(rng), uni(rng), uni(rng));
            const Vec3 antenna(uni(rng), uni(rng), uni(rng));
            const RotationMatrix r = rotation_matrix(angles);
            const Vec3 radar = r.transpose() * (v - antenna);
            CHECK((r * radar - (v - antenna)).norm() < 1e-12);
        }
    }

    SUBCASE("faces and textures are carried over") {
        TriangleMesh tri;
        tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
        tri.faces = {{0, 1, 2}};
        tri.face_texture = {0.5};
        const TriangleMesh out = to_radar_frame(tri, {45.0, 45.0}, Vec3(1, 1, 1));
        CHECK(out.faces == tri.faces);
        CHECK(out.face_texture == tri.face_texture);
    }
}

TEST_CASE("wrap_azimuth") {
    CHECK(wrap_azimuth(365.0) == doctest::Approx(5.0));
    CHECK(wrap_azimuth(-10.0) == doctest::Approx(350.0));
    CHECK(wrap_azimuth(360.0) == 0.0);
    CHECK(wrap_azimuth(-720.0) == 0.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-2000.0, 2000.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = uni(rng);
        const double w = wrap_azimuth(x);
        CHECK(w >= 0.0);
        CHECK(w < 360.0);
        CHECK(wrap_azimuth(w) == w);  // idempotent
        CHECK(std::abs(std::remainder(w - x, 360.0)) < 1e-9);
    }
}

TEST_CASE("angular_error") {
    CHECK(angular_error(359.0, 1.0, true) == doctest::Approx(2.0));
    CHECK(angular_error(180.0, 0.0, true) == doctest::Approx(180.0));
    CHECK(angular_error(50.0, 40.0, false) == doctest::Approx(10.0));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-400.0, 400.0);
    for (int i = 0; i < 500; ++i) {
        const double a = uni(rng), b = uni(rng);
        for (bool circular : {false, true}) {
            CHECK(angular_error(a, b, circular) == angular_error(b, a, circular));
            CHECK(angular_error(a, b, circular) >= 0.0);
        }
        CHECK(angular_error(a, a, true) == 0.0);
        CHECK(angular_error(a, a + 360.0, true) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(angular_error(a, b, true) <= 180.0 + 1e-12);
    }
}

TEST_CASE("projection_units") {
    CHECK(projection_units(100, 45.0) == 100);
    CHECK(projection_units(0, 30.0) == 0);

    // high-precision oracle: 128 * tan(60 deg) = 128 * sqrt(3)
    const long double exact = 128.0L * std::sqrt(3.0L);
    CHECK(std::llround(static_cast<double>(exact)) == 222);
    CHECK(projection_units(128, 60.0) == 222);

    CHECK_THROWS_AS(projection_units(100, 0.0), std::domain_error);
    CHECK_THROWS_AS(projection_units(100, 90.0), std::domain_error);
    CHECK_THROWS_AS(projection_units(100, -5.0), std::domain_error);
    CHECK_THROWS_AS(projection_units(-1, 45.0), std::domain_error);

    long prev = 0;
    for (double a = 1.0; a < 90.0; a += 0.5) {
        const long np = projection_units(128, a);
        CHECK(np >= prev);  // monotone non-decreasing in incidence
        prev = np;
    }
}

TEST_CASE("validate_mesh rejects broken meshes") {
    TriangleMesh mesh;
    mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    mesh.faces = {{0, 1, 2}};
    CHECK_NOTHROW(validate_mesh(mesh));

    TriangleMesh bad_index = mesh;
    bad_index.faces[0][2] = 5;
    CHECK_THROWS_AS(validate_mesh(bad_index), std::invalid_argument);

    TriangleMesh degenerate = mesh;
    degenerate.vertices[2] = degenerate.vertices[1];
    CHECK_THROWS_AS(validate_mesh(degenerate), std::invalid_argument);

    TriangleMesh negative_texture = mesh;
    negative_texture.face_texture = {-1.0};
    CHECK_THROWS_AS(validate_mesh(negative_texture), std::invalid_argument);
}

TEST_CASE("derive_seed separates streams") {
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2, 0) != derive_seed(1, 2, 1));
    CHECK(derive_seed(1, 2, 5) == derive_seed(1, 2, 5));
}
