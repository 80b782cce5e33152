#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"
#include "genagent/fitness.hpp"
#include "genagent/rng.hpp"
#include "scene_gen.hpp"

using namespace genagent;

namespace {

const ScaleSpec kSpec{1000.0, 1500.0, 0.4, 0.2};  // sep threshold 0.3 m
const Tunables kTun{};

}  // namespace

TEST_CASE("shape_loss: building area differentiation") {
    const Geometry b0(testgen::rect(0.0, 0.0, 10.0, 10.0));
    const Geometry b1(testgen::rect(0.0, 0.0, 10.0, 12.0));
    CHECK(shape_loss(FeatureKind::Building, b0, b1, kSpec, 1.0) == doctest::Approx(0.2));
    CHECK(shape_loss(FeatureKind::Building, b0, b0, kSpec, 1.0) == 0.0);
    // Shrinking hurts exactly as much as growing.
    const Geometry b2(testgen::rect(0.0, 0.0, 10.0, 8.0));
    CHECK(shape_loss(FeatureKind::Building, b0, b2, kSpec, 1.0) == doctest::Approx(0.2));
}

TEST_CASE("shape_loss: road sweep normalized by length and separation") {
    const Geometry r0(Polyline({{0.0, 0.0}, {5.0, 1.0}, {10.0, 0.0}}));
    const Geometry r1(Polyline({{0.0, 0.0}, {10.0, 0.0}}));
    const double expected = 5.0 / (2.0 * std::sqrt(26.0) * 0.3);
    CHECK(shape_loss(FeatureKind::Road, r0, r1, kSpec, 1.0) ==
          doctest::Approx(expected).epsilon(1e-9));
    CHECK(shape_loss(FeatureKind::Road, r0, r0, kSpec, 1.0) == 0.0);
}

TEST_CASE("shape_loss: pure road displacement is free for the shape term") {
    Rng rng(501);
    for (int iter = 0; iter < 100; ++iter) {
        const Polyline road = testgen::random_road(rng, testgen::grid_value(rng, -50.0, 50.0),
                                                   testgen::grid_value(rng, -50.0, 50.0));
        const double dx = testgen::grid_value(rng, -200.0, 200.0);
        const double dy = testgen::grid_value(rng, -200.0, 200.0);
        const Geometry moved = displace(Geometry(road), dx, dy);
        CHECK(shape_loss(FeatureKind::Road, Geometry(road), moved, kSpec, 1.0) == 0.0);
    }
}

TEST_CASE("shape_loss: elimination costs the flat penalty") {
    const Geometry b0(testgen::rect(0.0, 0.0, 10.0, 10.0));
    CHECK(shape_loss(FeatureKind::Building, b0, std::nullopt, kSpec, 1.0) == 1.0);
    CHECK(shape_loss(FeatureKind::Building, b0, std::nullopt, kSpec, 2.5) == 2.5);
}

TEST_CASE("displacement_term: documented examples") {
    CHECK(displacement_term({{3.0, 4.0}}, 1.0) == doctest::Approx(5.0));
    CHECK(displacement_term({{3.0, 4.0}}, 0.3) == doctest::Approx(50.0 / 3.0).epsilon(1e-9));
    CHECK(displacement_term({{0.0, 0.0}, {0.0, 0.0}}, 0.3) == 0.0);
    CHECK(displacement_term({}, 0.3) == 0.0);
    CHECK(displacement_term({{3.0, 4.0}, {0.0, 0.0}, {1.0, 0.0}}, 0.5) == doctest::Approx(12.0));
}

TEST_CASE("fitness_better: strict order on components") {
    FitnessComponents a, b;
    a.f = 1.0;
    b.f = 2.0;
    CHECK(fitness_better(a, b));
    CHECK(!fitness_better(b, a));
    CHECK(!fitness_better(a, a));  // strict

    // Equal f: fewer conflicts wins, then less shape loss, then less movement.
    a = {0.5, 1.0, 0.5, 2.0, false};
    b = {1.0, 0.0, 1.0, 2.0, false};
    CHECK(fitness_better(b, a));

    FitnessComponents inf_a;
    inf_a.f = kInfiniteFitness;
    inf_a.defensive_penalty = true;
    CHECK(fitness_better(a, inf_a));
    CHECK(!fitness_better(inf_a, a));
}

TEST_CASE("general_fitness: lone object, zero plan") {
    const MapObject obj{"b", FeatureKind::Building, Geometry(testgen::rect(0.0, 0.0, 5.0, 5.0))};
    const FitnessComponents fc =
        general_fitness(obj, obj.geometry, {0.0, 0.0}, {}, kSpec, kTun);
    CHECK(fc.os == 0.0);
    CHECK(fc.nc == 0.0);
    CHECK(fc.dp == 0.0);
    CHECK(fc.f == 0.0);
    CHECK(!fc.defensive_penalty);
}

TEST_CASE("general_fitness: one conflicting neighbor costs two objects") {
    const MapObject obj{"a", FeatureKind::Building, Geometry(testgen::rect(0.0, 0.0, 1.0, 1.0))};
    const std::vector<NeighborSnapshot> nb{
        {"b", FeatureKind::Building, Geometry(testgen::rect(1.1, 0.0, 1.0, 1.0))}};
    const FitnessComponents fc = general_fitness(obj, obj.geometry, {0.0, 0.0}, nb, kSpec, kTun);
    CHECK(fc.nc == 2.0);
    CHECK(fc.f == doctest::Approx(2.0));
}

TEST_CASE("general_fitness: clearing the conflict trades nc for dp") {
    const MapObject obj{"a", FeatureKind::Building, Geometry(testgen::rect(0.0, 0.0, 1.0, 1.0))};
    const std::vector<NeighborSnapshot> nb{
        {"b", FeatureKind::Building, Geometry(testgen::rect(1.1, 0.0, 1.0, 1.0))}};
    const Geometry moved = displace(obj.geometry, -0.3, 0.0);
    const FitnessComponents fc = general_fitness(obj, moved, {-0.3, 0.0}, nb, kSpec, kTun);
    CHECK(fc.nc == 0.0);
    CHECK(fc.os == 0.0);
    CHECK(fc.dp == doctest::Approx(1.0));
    CHECK(fc.f == doctest::Approx(1.0));
}

TEST_CASE("general_fitness: neighbor-to-neighbor conflicts still count") {
    const MapObject obj{"a", FeatureKind::Building,
                        Geometry(testgen::rect(100.0, 100.0, 1.0, 1.0))};
    const std::vector<NeighborSnapshot> nb{
        {"b", FeatureKind::Building, Geometry(testgen::rect(0.0, 0.0, 1.0, 1.0))},
        {"c", FeatureKind::Building, Geometry(testgen::rect(1.1, 0.0, 1.0, 1.0))}};
    const FitnessComponents fc = general_fitness(obj, obj.geometry, {0.0, 0.0}, nb, kSpec, kTun);
    CHECK(fc.nc == 2.0);
    CHECK(fc.f == doctest::Approx(2.0));
}

TEST_CASE("general_fitness: elimination removes the object from conflict checks") {
    const MapObject obj{"a", FeatureKind::Building, Geometry(testgen::rect(0.0, 0.0, 1.0, 1.0))};
    const std::vector<NeighborSnapshot> nb{
        {"b", FeatureKind::Building, Geometry(testgen::rect(1.1, 0.0, 1.0, 1.0))}};
    const FitnessComponents fc = general_fitness(obj, std::nullopt, {0.0, 0.0}, nb, kSpec, kTun);
    CHECK(fc.nc == 0.0);
    CHECK(fc.os == 1.0);  // the elimination penalty
    CHECK(fc.dp == 0.0);
    CHECK(fc.f == doctest::Approx(1.0));
    CHECK(!fc.defensive_penalty);
}

TEST_CASE("general_fitness: destroying the shape flips the infinite sentinel") {
    const MapObject obj{"a", FeatureKind::Building,
                        Geometry(testgen::rect(0.0, 0.0, 10.0, 10.0))};
    const Geometry blown(enlarge(std::get<Polygon>(obj.geometry), 1.3));  // area 169, os 0.69
    const FitnessComponents fc = general_fitness(obj, blown, {0.0, 0.0}, {}, kSpec, kTun);
    CHECK(fc.defensive_penalty);
    CHECK(fc.f == kInfiniteFitness);
    CHECK(fc.os == doctest::Approx(0.69));
    // A fitter, finite alternative always wins the comparison.
    FitnessComponents fine;
    fine.f = 100.0;
    CHECK(fitness_better(fine, fc));
}

TEST_CASE("general_fitness: f is exactly the component sum when finite") {
    Rng rng(502);
    const ParamBounds bounds = derive_bounds(kSpec, kTun);
    int finite_seen = 0;
    for (int iter = 0; iter < 300; ++iter) {
        const auto objs = testgen::random_scene(rng, 6);
        const MapObject& obj = objs[0];
        std::vector<NeighborSnapshot> nb;
        for (std::size_t i = 1; i < objs.size(); ++i)
            nb.push_back({objs[i].id, objs[i].kind, objs[i].geometry});

        const auto flags = static_cast<std::uint8_t>(
            rng.next_below(1ull << flag_count(obj.kind)));
        OperatorParams p;
        p.simplify_tolerance = rng.next_uniform(0.0, bounds.tol_max);
        p.displace_dx = rng.next_uniform(-bounds.disp_max, bounds.disp_max);
        p.displace_dy = rng.next_uniform(-bounds.disp_max, bounds.disp_max);
        p.enlarge_factor = rng.next_uniform(1.0, bounds.enl_max);
        const PlanOutcome out = apply_plan(obj, flags, p, kTun, bounds);
        const FitnessComponents fc =
            general_fitness(obj, out.geometry, out.displacement, nb, kSpec, kTun);
        if (fc.defensive_penalty) {
            CHECK(fc.f == kInfiniteFitness);
        } else {
            ++finite_seen;
            CHECK(std::abs(fc.f - (fc.nc + fc.dp + fc.os)) <= 1e-12);
            CHECK(fc.nc == std::floor(fc.nc));  // integral count
            CHECK(fc.os >= 0.0);
            CHECK(fc.dp >= 0.0);
        }
    }
    CHECK(finite_seen > 100);  // the property must actually get exercised
}
