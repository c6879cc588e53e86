#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cms/potential.hpp"

using namespace cms;
using Catch::Approx;

namespace {

std::vector<Anchor> tail_anchors(const TruncatedShift& s) {
    std::vector<Anchor> out;
    for (const auto& o : enumerate_periodic_orbits(s, 1)) out.push_back(Anchor::periodic(o.word));
    for (const auto& o : enumerate_periodic_orbits(s, 2)) out.push_back(Anchor::periodic(o.word));
    return out;
}

} // namespace

TEST_CASE("birkhoff sums: empty, constant, hand-computed", "[potential]") {
    auto full2 = TruncatedShift::full(2);
    auto ones = Anchor::periodic({1});

    auto c = DepthPotential::constant(full2, 0.7);
    CHECK(birkhoff_sum(c, Word{1, 2, 1}, ones, 0) == 0.0);
    CHECK(birkhoff_sum(c, Word{}, ones, 5) == Approx(3.5).epsilon(1e-15));

    auto u = DepthPotential::from_letter_values(full2, {std::log(1.0 / 3.0), std::log(2.0 / 3.0)});
    const double expect = 3 * std::log(1.0 / 3.0) + 2 * std::log(2.0 / 3.0);
    CHECK(birkhoff_sum(u, Word{1, 2, 1, 2, 1}, ones, 5) == Approx(expect).epsilon(1e-15));

    auto gm = TruncatedShift::golden_mean();
    auto v = DepthPotential::constant(gm, 1.0);
    CHECK_THROWS_AS(birkhoff_sum(v, Word{2}, Anchor::periodic({2}), 1), PreconditionError);
}

TEST_CASE("birkhoff cocycle identity", "[potential]") {
    auto gm = TruncatedShift::golden_mean();
    auto words = enumerate_words(gm, 2);
    std::vector<double> vals;
    for (std::size_t i = 0; i < words.size(); ++i) vals.push_back(0.3 + 0.17 * static_cast<double>(i));
    DepthPotential f(gm, 2, vals);

    for (const auto& a : tail_anchors(gm)) {
        for (const auto& w : enumerate_words(gm, 12)) {
            if (!gm.admissible(w.back(), a.letter_at(0))) continue;
            for (int m = 0; m <= 6; ++m) {
                for (int n = 0; m + n <= 12; n += 3) {
                    const double whole = birkhoff_sum(f, w, a, m + n);
                    Word shifted(w.begin() + m, w.end());
                    const double split = birkhoff_sum(f, w, a, m) + birkhoff_sum(f, shifted, a, n);
                    CHECK(whole == Approx(split).margin(1e-12));
                }
            }
        }
    }
}

TEST_CASE("summability constant and tail rules", "[potential]") {
    // zeta-type weights: C_M + T(M) -> pi^2/6, oracle = partial sums
    const double zeta2 = std::acos(-1.0) * std::acos(-1.0) / 6.0;
    for (int M : {10, 100, 1000}) {
        auto s = TruncatedShift::full(M);
        std::vector<double> vals;
        for (int e = 1; e <= M; ++e) vals.push_back(-2.0 * std::log(static_cast<double>(e)));
        auto u = DepthPotential::from_letter_values(s, vals, 0.5, TailRule::power(1.0, 2.0));
        auto rep = summability_constant(u);
        REQUIRE(rep.has_certificate());
        REQUIRE(rep.summable());
        double partial = 0.0;
        for (int e = 1; e <= M; ++e) partial += 1.0 / (static_cast<double>(e) * e);
        CHECK(rep.level_sum == Approx(partial).epsilon(1e-13));
        CHECK(*rep.tail == Approx(1.0 / M).epsilon(1e-13));
        CHECK(rep.level_sum <= zeta2);
        CHECK(rep.total() >= zeta2);
        CHECK(rep.total() - zeta2 <= 1.0 / M);
    }

    auto s2 = TruncatedShift::full(2);
    auto bern = DepthPotential::constant(s2, std::log(0.5));
    auto rep2 = summability_constant(bern);
    CHECK(rep2.level_sum == Approx(1.0).epsilon(1e-15));
    CHECK(*rep2.tail == 0.0);

    // u = 0 with a divergent tail rule: certified not summable
    auto flat = DepthPotential::constant(s2, 0.0);
    flat.set_tail_rule(TailRule::power(1.0, 1.0));
    CHECK_FALSE(summability_constant(flat).summable());

    // no rule: level-M only
    flat.set_tail_rule(TailRule::none());
    CHECK_FALSE(summability_constant(flat).has_certificate());
}

TEST_CASE("distortion bound dominates sampled distortions", "[potential]") {
    // depth-2 potentials on small shifts, exhaustive words and periodic tails
    for (const auto& s : {TruncatedShift::full(2), TruncatedShift::golden_mean(),
                          TruncatedShift::full(3)}) {
        auto words = enumerate_words(s, 2);
        std::vector<double> vals;
        for (std::size_t i = 0; i < words.size(); ++i)
            vals.push_back(std::sin(1.7 * static_cast<double>(i + 1)));
        const double theta = 0.5;
        DepthPotential f(s, 2, vals, theta);
        // exact Holder norm of a depth-2 table: var_1 / theta
        f.set_holder_norm_bound(variation(f, 1) / theta);

        auto tails = tail_anchors(s);
        for (int n = 1; n <= 6; ++n) {
            double emp = 0.0;
            for (const auto& w : enumerate_words(s, n)) {
                for (const auto& x : tails) {
                    if (!s.admissible(w.back(), x.letter_at(0))) continue;
                    for (const auto& y : tails) {
                        if (!s.admissible(w.back(), y.letter_at(0))) continue;
                        emp = std::max(emp, std::abs(birkhoff_sum(f, w, x, n) - birkhoff_sum(f, w, y, n)));
                    }
                }
            }
            CHECK(emp <= distortion_bound(f, n) + 1e-14);
        }
    }

    auto c = DepthPotential::constant(TruncatedShift::full(2), 3.0);
    CHECK(distortion_bound(c, 4) == 0.0);
}

TEST_CASE("gauss potential: distortion oracle and table values", "[potential]") {
    auto s = TruncatedShift::full(3);
    auto proj = gauss_potential(s, 1.0, 2);
    const auto& u = proj.potential;

    // spot value: u(e,w) = -2 log(e + 1/(w + g))
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(u.value(Word{2, 3}) == Approx(-2.0 * std::log(2.0 + 1.0 / (3.0 + g))).epsilon(1e-14));

    for (int n = 1; n <= 6; ++n) {
        double emp = 0.0;
        auto tails = tail_anchors(s);
        for (const auto& w : enumerate_words(s, n))
            for (const auto& x : tails)
                for (const auto& y : tails)
                    emp = std::max(emp, std::abs(birkhoff_sum(u, w, x, n) - birkhoff_sum(u, w, y, n)));
        CHECK(emp <= distortion_bound(u, n) + 1e-14);
    }
}

TEST_CASE("depth projection: identity, constant, gauss", "[potential]") {
    auto s = TruncatedShift::full(4);

    // projecting a depth-k table at the same depth reproduces it
    auto base = gauss_potential(s, 1.0, 2).potential;
    PointRule<double> read_base = [&](const TruncatedShift&, const Anchor& a) {
        return base.value(a.first_letters(2));
    };
    auto again = depth_project<double>(s, read_base, 2, base.theta(), base.holder_norm_bound());
    for (std::size_t i = 0; i < base.values().size(); ++i)
        CHECK(again.potential.values()[i] == Approx(base.values()[i]).margin(1e-15));

    // constant rule: constant table, zero reported error
    PointRule<double> cr = [](const TruncatedShift&, const Anchor&) { return 2.5; };
    auto cp = depth_project<double>(s, cr, 3, 0.5, 0.0);
    CHECK(cp.error_bound == 0.0);
    for (double v : cp.potential.values()) CHECK(v == 2.5);

    // gauss depth-2 at M=20, s=1: spot check against direct evaluation
    auto s20 = TruncatedShift::full(20);
    auto g20 = gauss_potential(s20, 1.0, 2).potential;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(g20.value(Word{20, 7}) == Approx(-2.0 * std::log(20.0 + 1.0 / (7.0 + g))).epsilon(1e-14));
    CHECK(g20.values().size() == 400);
}

TEST_CASE("variation decays like the declared Holder bound", "[potential]") {
    auto s = TruncatedShift::golden_mean();
    auto u = gauss_potential(TruncatedShift::full(3), 1.0, 3).potential;
    for (int n = 0; n < u.depth(); ++n)
        CHECK(variation(u, n) <= u.holder_norm_bound() * std::pow(u.theta(), n) + 1e-14);
    CHECK(variation(u, u.depth()) == 0.0);
    CHECK(variation(u, u.depth() + 2) == 0.0);

    auto c = DepthPotential::constant(s, 1.0, 2);
    CHECK(variation(c, 1) == 0.0);
}

TEST_CASE("lift preserves values and combinations align depths", "[potential]") {
    auto gm = TruncatedShift::golden_mean();
    auto u = DepthPotential::from_letter_values(gm, {0.25, -1.0});
    auto lifted = u.lifted(3);
    CHECK(lifted.depth() == 3);
    for (const auto& w : enumerate_words(gm, 3))
        CHECK(lifted.value(w) == u.value(w));

    auto v = DepthPotential::constant(gm, 2.0, 2);
    auto lc = linear_combination(1.0, u, -0.5, v);
    CHECK(lc.depth() == 2);
    CHECK(lc.value(Word{2, 1}) == Approx(-1.0 - 1.0).epsilon(1e-15));

    auto z = combine(u, v);
    CHECK(z.value(Word{1, 2}) == std::complex<double>(0.25, 2.0));
    CHECK(real_part(z).value(Word{1, 2}) == 0.25);
    CHECK(imag_part(z).value(Word{1, 2}) == 2.0);
}
