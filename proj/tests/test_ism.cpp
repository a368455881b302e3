#include <doctest.h>

#include <algorithm>
#include <map>

#include "ambiroom/ism.hpp"

using namespace ambiroom;

namespace {

RoomSpec paper_room(int order) {
    RoomSpec r;
    r.dimensions = {6.0, 5.0, 3.0};
    r.set_uniform_absorption(0.4);
    r.max_ism_order = order;
    r.fs = 48000.0;
    return r;
}

const Vec3 kSrc{4.0, 4.0, 1.5};
const Vec3 kRcv{2.0, 2.0, 1.5};

}  // namespace

TEST_CASE("image counts follow the centered-octahedral sequence") {
    const std::size_t expected[] = {1, 7, 25, 63, 129, 231, 377, 575, 833};
    for (int r = 0; r <= 8; ++r)
        CHECK(compute_images(paper_room(r), kSrc, kRcv).size() == expected[r]);
}

TEST_CASE("direct path only at R = 0") {
    const auto imgs = compute_images(paper_room(0), kSrc, kRcv);
    REQUIRE(imgs.size() == 1);
    const double d = (kSrc - kRcv).norm();
    CHECK(imgs[0].reflection_order == 0);
    CHECK(imgs[0].distance == doctest::Approx(d).epsilon(1e-12));
    CHECK(imgs[0].amplitude == doctest::Approx(1.0 / d).epsilon(1e-12));
    CHECK(imgs[0].delay_samples ==
          doctest::Approx(d * 48000.0 / kDefaultSpeedOfSound).epsilon(1e-12));
}

TEST_CASE("first-order image amplitudes carry beta = sqrt(1 - alpha)") {
    RoomSpec room = paper_room(1);
    const auto imgs = compute_images(room, kSrc, kRcv);
    const double beta = std::sqrt(1.0 - 0.4);
    int checked = 0;
    for (const auto& img : imgs) {
        if (img.reflection_order != 1) continue;
        CHECK(img.amplitude == doctest::Approx(beta / img.distance).epsilon(1e-12));
        ++checked;
    }
    CHECK(checked == 6);
}

TEST_CASE("floor image position is mirrored through z = 0") {
    const auto imgs = compute_images(paper_room(1), kSrc, kRcv);
    bool found = false;
    for (const auto& img : imgs)
        if (std::abs(img.position.z + 1.5) < 1e-12 && std::abs(img.position.x - 4.0) < 1e-12 &&
            std::abs(img.position.y - 4.0) < 1e-12)
            found = true;
    CHECK(found);
}

TEST_CASE("source/receiver swap preserves (distance, order) multiset") {
    const auto a = compute_images(paper_room(3), kSrc, kRcv);
    const auto b = compute_images(paper_room(3), kRcv, kSrc);
    auto key = [](const std::vector<ImageSource>& v) {
        std::vector<std::pair<double, int>> k;
        for (const auto& i : v) k.emplace_back(i.distance, i.reflection_order);
        std::sort(k.begin(), k.end());
        return k;
    };
    auto ka = key(a), kb = key(b);
    REQUIRE(ka.size() == kb.size());
    for (std::size_t i = 0; i < ka.size(); ++i) {
        CHECK(ka[i].first == doctest::Approx(kb[i].first).epsilon(1e-9));
        CHECK(ka[i].second == kb[i].second);
    }
}

TEST_CASE("max amplitude decreases with reflection order") {
    const auto imgs = compute_images(paper_room(6), kSrc, kRcv);
    std::map<int, double> max_amp;
    for (const auto& img : imgs)
        max_amp[img.reflection_order] = std::max(max_amp[img.reflection_order], img.amplitude);
    for (int k = 0; k < 6; ++k) CHECK(max_amp[k + 1] <= max_amp[k]);
}

TEST_CASE("geometry validation") {
    RoomSpec room = paper_room(1);
    CHECK_THROWS_AS(compute_images(room, {6.0, 2.0, 1.5}, kRcv), GeometryError);  // on wall
    CHECK_THROWS_AS(compute_images(room, {-1.0, 2.0, 1.5}, kRcv), GeometryError);
    CHECK_THROWS_AS(compute_images(room, kSrc, {2.0, 5.5, 1.5}), GeometryError);
    room.set_uniform_absorption(1.0);
    CHECK_THROWS_AS(room.validate(), GeometryError);
    room.set_uniform_absorption(0.4);
    room.dimensions = {0.0, 5.0, 3.0};
    CHECK_THROWS_AS(room.validate(), GeometryError);
}

TEST_CASE("deterministic ordering") {
    const auto a = compute_images(paper_room(4), kSrc, kRcv);
    const auto b = compute_images(paper_room(4), kSrc, kRcv);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].position.x == b[i].position.x);
        CHECK(a[i].delay_samples == b[i].delay_samples);
    }
}

TEST_CASE("image_direction conventions") {
    ImageSource img;
    img.position = {3.0, 2.0, 1.5};  // 1 m along +x from receiver
    img.distance = 1.0;
    auto [az, el] = image_direction(img, kRcv);
    CHECK(az == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(el == doctest::Approx(0.0).epsilon(1e-12));

    img.position = {2.0, 2.0, 2.5};  // directly above
    auto [az2, el2] = image_direction(img, kRcv);
    CHECK(az2 == 0.0);  // pole convention
    CHECK(el2 == doctest::Approx(kPi / 2.0).epsilon(1e-12));

    img.position = {4.0, 4.0, 1.5};  // paper scene direct path
    auto [az3, el3] = image_direction(img, kRcv);
    CHECK(az3 == doctest::Approx(kPi / 4.0).epsilon(1e-12));
    CHECK(el3 == doctest::Approx(0.0).epsilon(1e-12));

    img.position = kRcv;
    img.distance = 0.0;
    CHECK_THROWS_AS(image_direction(img, kRcv), GeometryError);
}
