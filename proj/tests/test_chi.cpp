#include <catch2/catch_amalgamated.hpp>

#include <chebvol/chebyshev.hpp>
#include <chebvol/chi.hpp>
#include <chebvol/field_params.hpp>

#include <cmath>

using namespace chebvol;

namespace {
Exponent E(std::initializer_list<long long> v) { return Exponent(std::vector<long long>(v)); }

AdelicBundle p1_fs() {
    return AdelicBundle(ToricSeries::projective_space(1), ArchMetric::fubini_study(1));
}
}  // namespace

TEST_CASE("unit ball log volumes", "[chi]") {
    CHECK_THAT(log_ball_volume(1), Catch::Matchers::WithinAbs(std::log(2.0), 1e-13));
    CHECK_THAT(log_ball_volume(2), Catch::Matchers::WithinAbs(std::log(M_PI), 1e-13));
    CHECK_THAT(log_ball_volume(3),
               Catch::Matchers::WithinAbs(std::log(4.0 * M_PI / 3.0), 1e-13));
    CHECK_THAT(log_ball_volume(4),
               Catch::Matchers::WithinAbs(std::log(M_PI * M_PI / 2.0), 1e-13));
}

TEST_CASE("degree of the determinant at level one", "[chi]") {
    // FS on the line, m = 1: both Gram entries are 1/2, so
    // deg = -(1/2) log det = -(1/2)(2 log 1/2) = log 2.
    AdelicBundle B = p1_fs();
    GramCache cache(B.arch(), B.series());
    DegResult deg = deg_h0(B, cache.at(1));
    CHECK(deg.level == 1);
    CHECK(deg.n == 2);
    CHECK_THAT(deg.arch, Catch::Matchers::WithinAbs(std::log(2.0), 1e-10));
    CHECK(deg.finite_logp.empty());

    // Adding the linear roof x at p = 2 rescales the model lattice by the
    // total grid weight 0 + 1 = 1, i.e. by one power of 2.
    NonArchWeight linear(2, {WeightPiece{{1}, 0}});
    AdelicBundle Bw(ToricSeries::projective_space(1), ArchMetric::fubini_study(1), {linear});
    DegResult degw = deg_h0(Bw, cache.at(1));
    REQUIRE(degw.finite_logp.count(2) == 1);
    CHECK(degw.finite_logp.at(2) == 1);
    CHECK_THAT(degw.total(), Catch::Matchers::WithinAbs(2.0 * std::log(2.0), 1e-10));
}

TEST_CASE("euler characteristic adds the ball volume", "[chi]") {
    AdelicBundle B = p1_fs();
    GramCache cache(B.arch(), B.series());
    DegResult deg = deg_h0(B, cache.at(1));

    // Over the rationals: chi = deg + log V(N); N = 2 gives log 2 + log pi.
    double chi = chi_l2(deg);
    CHECK_THAT(chi, Catch::Matchers::WithinAbs(std::log(2.0 * M_PI), 1e-10));

    // A totally imaginary mock field with |disc| = 4: one complex ball of
    // dimension 2N, and the discriminant drag -(N/2) log 4.
    FieldParams F;
    F.r1 = 0;
    F.r2 = 1;
    F.log_abs_disc = std::log(4.0);
    double chi_f = chi_l2(deg, F);
    CHECK_THAT(chi_f, Catch::Matchers::WithinAbs(deg.total() - std::log(4.0) + log_ball_volume(4),
                                                 1e-12));
}

TEST_CASE("chi minus deg is the exact ball correction", "[chi]") {
    AdelicBundle B = p1_fs();
    GramCache cache(B.arch(), B.series());
    ChiSeries S = chi_series(B, cache, {1, 2, 5, 10, 25}, FieldParams::rationals());
    REQUIRE(S.levels.size() == 5);
    for (const ChiLevel& L : S.levels) {
        CHECK(L.n == L.m + 1);
        CHECK_THAT(L.r, Catch::Matchers::WithinAbs(log_ball_volume(L.n), 1e-9));
        CHECK_THAT(L.chi - L.deg, Catch::Matchers::WithinAbs(L.r, 1e-12));
    }
}

TEST_CASE("volume fit on the FS line", "[chi][slow]") {
    // chi(m) = vol m^2/2 + O(m log m) with vol = 1/2 on the FS line.
    AdelicBundle B = p1_fs();
    GramCache cache(B.arch(), B.series());
    std::vector<int> ms;
    for (int m = 10; m <= 100; m += 10) ms.push_back(m);
    ChiSeries S = chi_series(B, cache, ms, FieldParams::rationals());
    VolChiFit fit = fit_vol_chi(S, 1);

    REQUIRE_FALSE(fit.ill_conditioned);
    CHECK_THAT(fit.vol_chi, Catch::Matchers::WithinAbs(0.5, 0.01));
    CHECK(fit.ratio.size() == ms.size());

    // The fitted model reproduces the data far better than the leading term
    // alone; what is left over is the slowly varying log-level tail.
    CHECK(fit.residual_rms < 2.0);
    for (size_t i = 0; i < ms.size(); ++i) {
        double model = fit.model(1, static_cast<double>(ms[i]));
        CHECK_THAT(model, Catch::Matchers::WithinAbs(S.levels[i].chi,
                                                     0.05 * std::abs(S.levels[i].chi) + 2.0));
    }
}

TEST_CASE("fit preconditions", "[chi]") {
    AdelicBundle B = p1_fs();
    GramCache cache(B.arch(), B.series());
    ChiSeries tiny = chi_series(B, cache, {4, 8}, FieldParams::rationals());
    CHECK_THROWS_AS(fit_vol_chi(tiny, 1), std::invalid_argument);
}

TEST_CASE("tensor square matches doubled levels exactly", "[chi]") {
    // The level-m data of the squared bundle is the level-2m data of the
    // original: same integrands, same lattice weights, so deg and chi agree
    // identically, including the finite parts as exact rationals.
    NonArchWeight tent(2, {WeightPiece{{1}, 0}, WeightPiece{{-1}, 1}});
    AdelicBundle B(ToricSeries::projective_space(1), ArchMetric::fubini_study(1), {tent});
    AdelicBundle B2 = B.power(2);

    GramCache cache(B.arch(), B.series());
    GramCache cache2(B2.arch(), B2.series());

    for (int m : {1, 2, 5, 8}) {
        DegResult lo = deg_h0(B2, cache2.at(m));
        DegResult hi = deg_h0(B, cache.at(2 * m));
        CHECK(lo.n == hi.n);
        CHECK(lo.finite_logp == hi.finite_logp);
        CHECK_THAT(lo.arch, Catch::Matchers::WithinAbs(hi.arch, 1e-10));
        CHECK_THAT(chi_l2(lo), Catch::Matchers::WithinAbs(chi_l2(hi), 1e-10));
    }
}

TEST_CASE("field parameter validation", "[chi]") {
    FieldParams F = FieldParams::rationals();
    CHECK_NOTHROW(F.validate());
    F.r1 = -1;
    CHECK_THROWS_AS(F.validate(), std::invalid_argument);
    FieldParams G;
    G.r1 = 0;
    G.r2 = 0;
    CHECK_THROWS_AS(G.validate(), std::invalid_argument);
}
