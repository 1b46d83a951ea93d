#include <catch2/catch_amalgamated.hpp>

#include <chebvol/polytope.hpp>

using namespace chebvol;

namespace {
RationalPoint pt(std::initializer_list<Rational> v) { return RationalPoint(v); }
Exponent E(std::initializer_list<long long> v) { return Exponent(std::vector<long long>(v)); }
}  // namespace

TEST_CASE("hull discards interior and duplicate points", "[polytope]") {
    // Unit square given as shuffled corners plus interior and edge points.
    Polytope sq({pt({1, 1}), pt({0, 0}), pt({Rational(1, 2), Rational(1, 2)}),
                 pt({1, 0}), pt({0, 1}), pt({Rational(1, 2), 0}), pt({0, 0})});
    CHECK(sq.vertices().size() == 4);
    CHECK(sq.volume() == 1);
    CHECK_FALSE(sq.degenerate());
}

TEST_CASE("exact volumes", "[polytope]") {
    Polytope simplex({pt({0, 0}), pt({1, 0}), pt({0, 1})});
    CHECK(simplex.volume() == Rational(1, 2));

    Polytope interval({pt({Rational(1, 3)}), pt({2})});
    CHECK(interval.volume() == Rational(5, 3));

    // Fan triangulation on a non-convex input order, hull is a pentagon.
    Polytope pent({pt({0, 0}), pt({2, 0}), pt({3, 1}), pt({1, 2}), pt({0, 1})});
    CHECK(pent.vertices().size() == 5);
    CHECK(pent.volume() == 4);  // shoelace: (0+2+5+1+0)/2
}

TEST_CASE("volume is translation invariant", "[polytope]") {
    Polytope simplex({pt({0, 0}), pt({1, 0}), pt({0, 1})});
    Polytope moved = simplex.translated(pt({Rational(7, 3), 5}));
    CHECK(moved.volume() == simplex.volume());
    CHECK(moved.contains(pt({Rational(7, 3) + Rational(1, 4), Rational(21, 4)})));
}

TEST_CASE("degenerate hulls", "[polytope]") {
    Polytope point({pt({1, 1})});
    CHECK(point.degenerate());
    CHECK(point.volume() == 0);

    Polytope seg({pt({0, 0}), pt({2, 2}), pt({1, 1})});
    CHECK(seg.degenerate());
    CHECK(seg.volume() == 0);
    CHECK(seg.vertices().size() == 2);  // collapses to the extreme pair
}

TEST_CASE("dimension three is rejected", "[polytope]") {
    CHECK_THROWS_AS(Polytope({pt({0, 0, 0}), pt({1, 0, 0})}), std::invalid_argument);
}

TEST_CASE("scaling", "[polytope]") {
    Polytope simplex({pt({0, 0}), pt({1, 0}), pt({0, 1})});
    CHECK(simplex.scaled(3).volume() == Rational(9, 2));  // k^d factor
    CHECK(simplex.scaled(Rational(1, 2)).volume() == Rational(1, 8));
}

TEST_CASE("minkowski sum", "[polytope]") {
    // square + horizontal segment = 2x1 rectangle
    Polytope sq({pt({0, 0}), pt({1, 0}), pt({1, 1}), pt({0, 1})});
    Polytope seg({pt({0, 0}), pt({1, 0})});
    Polytope rect = sq.minkowski_sum(seg);
    CHECK(rect.volume() == 2);
    CHECK(rect.vertices().size() == 4);

    // simplex + simplex = scaled simplex
    Polytope simplex({pt({0, 0}), pt({1, 0}), pt({0, 1})});
    CHECK(simplex.minkowski_sum(simplex).volume() == 2);

    // 1-d intervals add
    Polytope a({pt({0}), pt({1})}), b({pt({Rational(1, 2)}), pt({2})});
    CHECK(a.minkowski_sum(b).volume() == Rational(5, 2));
}

TEST_CASE("membership, strict membership, tight facets", "[polytope]") {
    Polytope simplex({pt({0, 0}), pt({1, 0}), pt({0, 1})});
    RationalPoint corner = pt({0, 0});
    RationalPoint edge = pt({Rational(1, 2), 0});
    RationalPoint inner = pt({Rational(1, 4), Rational(1, 4)});
    RationalPoint outer = pt({1, 1});

    CHECK(simplex.contains(corner));
    CHECK(simplex.contains(edge));
    CHECK(simplex.contains(inner));
    CHECK_FALSE(simplex.contains(outer));

    CHECK_FALSE(simplex.strictly_contains(corner));
    CHECK_FALSE(simplex.strictly_contains(edge));
    CHECK(simplex.strictly_contains(inner));

    // Riemann-sum boundary weights 2^-(number of tight facets).
    CHECK(simplex.tight_facets(corner) == 2);
    CHECK(simplex.tight_facets(edge) == 1);
    CHECK(simplex.tight_facets(inner) == 0);

    // Diagonal edge of the simplex is a facet too.
    CHECK(simplex.tight_facets(pt({Rational(1, 2), Rational(1, 2)})) == 1);

    Polytope interval({pt({0}), pt({1})});
    CHECK(interval.tight_facets(pt({0})) == 1);
    CHECK(interval.tight_facets(pt({Rational(1, 2)})) == 0);
}

TEST_CASE("lattice points of dilates", "[polytope]") {
    Polytope simplex({pt({0, 0}), pt({1, 0}), pt({0, 1})});
    // #(m simplex cap Z^2) = (m+1)(m+2)/2, here m = 2 -> 6 points, lex sorted.
    auto pts = simplex.scaled(2).lattice_points();
    REQUIRE(pts.size() == 6);
    CHECK(pts.front() == E({0, 0}));
    CHECK(pts.back() == E({2, 0}));
    CHECK(std::is_sorted(pts.begin(), pts.end(), LexLess{}));

    Polytope interval({pt({0}), pt({3})});
    CHECK(interval.lattice_points().size() == 4);

    // Lattice points lie in the nonnegative orthant by construction;
    // a body poking out of it only reports the nonnegative ones.
    Polytope shifted({pt({-1}), pt({1})});
    CHECK(shifted.lattice_points().size() == 2);  // 0 and 1
}

TEST_CASE("rational grid point helper", "[polytope]") {
    RationalPoint x = rational_point(E({1, 3}), 4);
    CHECK(x[0] == Rational(1, 4));
    CHECK(x[1] == Rational(3, 4));
}

TEST_CASE("polytope equality", "[polytope]") {
    Polytope a({pt({0, 0}), pt({1, 0}), pt({0, 1})});
    Polytope b({pt({0, 1}), pt({0, 0}), pt({1, 0}), pt({Rational(1, 4), Rational(1, 4)})});
    CHECK(a == b);
    CHECK_FALSE(a == a.scaled(2));
}
