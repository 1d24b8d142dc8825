#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "jumprep/parallel.hpp"
#include "jumprep/simulate.hpp"

using namespace jumprep;

namespace {

MarkLaw unit_point_law() { return MarkLaw::point_masses({{scalar_mark(1.0), 1.0}}); }

struct MeanSe {
    double mean = 0.0, se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    s2 /= static_cast<double>(v.size() - 1);
    return {m, std::sqrt(s2 / static_cast<double>(v.size()))};
}

} // namespace

TEST_CASE("poisson mean count matches lambda T") {
    CompensatorModel model{Intensity::constant(2.0), unit_point_law()};
    const int n = 20000;
    std::vector<double> counts(n);
    for (int p = 0; p < n; ++p) {
        RngStream rng(101, static_cast<std::uint64_t>(p));
        counts[p] = static_cast<double>(sample_prm(model, 1.0, rng).size());
    }
    const auto [mean, se] = mean_se(counts);
    CHECK(std::abs(mean - 2.0) <= 3.0 * se);
}

TEST_CASE("zero intensity yields the empty measure") {
    CompensatorModel model{Intensity::constant(0.0), unit_point_law()};
    for (int p = 0; p < 50; ++p) {
        RngStream rng(102, static_cast<std::uint64_t>(p));
        CHECK(sample_prm(model, 1.0, rng).size() == 0);
    }
}

TEST_CASE("counting-feedback mean matches the birth-process oracle") {
    // dm/dt = a + b m solved independently by RK4
    const double a = 1.0, b = 1.0, T = 1.0;
    double m = 0.0;
    const int steps = 20000;
    const double h = T / steps;
    for (int k = 0; k < steps; ++k) {
        auto f = [&](double mm) { return a + b * mm; };
        const double k1 = f(m);
        const double k2 = f(m + 0.5 * h * k1);
        const double k3 = f(m + 0.5 * h * k2);
        const double k4 = f(m + h * k3);
        m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    CHECK(m == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));  // sanity on the oracle

    CompensatorModel model{Intensity::path_dependent(a, b), unit_point_law()};
    const int n = 40000;
    std::vector<double> counts(n);
    parallel_for(n, [&](std::size_t p) {
        RngStream rng(103, p);
        counts[p] = static_cast<double>(sample_prm(model, T, rng).size());
    });
    const auto [mean, se] = mean_se(counts);
    CHECK(std::abs(mean - m) <= 3.0 * se);
}

TEST_CASE("thinning interarrivals pass a KS test against the time-change oracle") {
    // lambda(t) = 2 + 2t, Lambda(t) = 2t + t^2; the first arrival mapped
    // through Lambda is Exp(1) truncated to [0, Lambda(T)]
    CompensatorModel model{Intensity::deterministic({0.0, 1.0}, {2.0, 4.0}), unit_point_law()};
    const double big_lambda_T = 3.0;
    const int n = 10000;
    std::vector<double> transformed;
    transformed.reserve(n);
    for (int p = 0; p < n; ++p) {
        RngStream rng(104, static_cast<std::uint64_t>(p));
        const auto j = sample_prm(model, 1.0, rng);
        if (j.empty()) continue;
        const double tau = j.atoms().front().time;
        transformed.push_back(2.0 * tau + tau * tau);
    }
    std::sort(transformed.begin(), transformed.end());
    const double denom = 1.0 - std::exp(-big_lambda_T);
    double ks = 0.0;
    const double nn = static_cast<double>(transformed.size());
    for (std::size_t i = 0; i < transformed.size(); ++i) {
        const double F = (1.0 - std::exp(-transformed[i])) / denom;
        const double lo = static_cast<double>(i) / nn;
        const double hi = static_cast<double>(i + 1) / nn;
        ks = std::max(ks, std::max(std::abs(F - lo), std::abs(F - hi)));
    }
    CHECK(ks < 1.358 / std::sqrt(nn));  // 5% critical value
}

TEST_CASE("brownian variance at T = 1") {
    LevyParams params{0.0, 1.0, unit_point_law(), 1.0};
    // no jumps wanted: zero out the law mass via zero intensity instead
    params.mark_law = MarkLaw::point_masses({{scalar_mark(1.0), 1e-300}});
    const int n = 20000;
    std::vector<double> xs(n);
    parallel_for(n, [&](std::size_t p) {
        xs[p] = make_scenario(params, 1.0, 16, 105, p).x.value(1.0);
    });
    std::vector<double> sq(n);
    for (int p = 0; p < n; ++p) sq[p] = xs[p] * xs[p];
    const auto [mean, se] = mean_se(sq);
    CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("pure drift is exact on the grid") {
    LevyParams params{2.0, 0.0, MarkLaw::point_masses({{scalar_mark(1.0), 1e-300}}), 1.0};
    RngStream rng(106, 0);
    const auto sc = sample_levy(params, 1.0, 10, rng);
    for (double t : {0.1, 0.35, 0.8, 1.0})
        CHECK(sc.x.value(t) == doctest::Approx(2.0 * (std::floor(t * 10.0) / 10.0)).epsilon(1e-12));
}

TEST_CASE("levy mean matches the closed-form compensation split") {
    // law: mass 0.6 at 0.5 (compensated), 0.4 at 2.0 (raw); E[X(1)] = gamma + 0.4 * 2.0
    const auto law = MarkLaw::point_masses({{scalar_mark(0.5), 0.6}, {scalar_mark(2.0), 0.4}});
    LevyParams params{0.3, 0.5, law, 1.0};
    const double target = 0.3 + 0.4 * 2.0;
    const int n = 40000;
    std::vector<double> xs(n);
    parallel_for(n, [&](std::size_t p) {
        const auto sc = make_scenario(params, 1.0, 8, 107, p);
        const LevyPathState state(sc, params);
        xs[p] = state.value(1.0);
    });
    const auto [mean, se] = mean_se(xs);
    CHECK(std::abs(mean - target) <= 3.0 * se);
}

TEST_CASE("compensated band empirical mean vanishes") {
    const auto law = MarkLaw::density_table({0.1, 0.9}, {1.5});
    LevyParams params{0.0, 0.0, law, 1.0};  // all marks below 1: fully compensated
    const int n = 30000;
    std::vector<double> vals(n);
    parallel_for(n, [&](std::size_t p) {
        const auto sc = make_scenario(params, 1.0, 4, 108, p);
        double s = 0.0;
        for (const auto& a : sc.j.atoms()) s += a.mark[0];
        vals[p] = s - params.compensation_rate();  // integral of z dJ~ over the band
    });
    const auto [mean, se] = mean_se(vals);
    CHECK(std::abs(mean) <= 3.0 * se);
}

TEST_CASE("truncation keeps exactly the large marks") {
    const AtomicMeasure j(1.0, {Atom{0.1, scalar_mark(0.05)}, Atom{0.2, scalar_mark(0.5)},
                                Atom{0.3, scalar_mark(2.0)}});
    const auto t4 = truncate_small_jumps(j, 4);  // keep |z| > 0.25
    REQUIRE(t4.size() == 2);
    CHECK(t4.atoms()[0].mark[0] == 0.5);
    const auto t_all = truncate_small_jumps(j, 1000000);
    CHECK(t_all.size() == 3);
    CHECK_THROWS_AS(truncate_small_jumps(j, 0), std::domain_error);
}

TEST_CASE("truncation residual second moment decays monotonically") {
    const auto law = MarkLaw::density_table({0.01, 1.0}, {2.0});
    LevyParams params{0.0, 0.0, law, 1.0};
    const int n = 20000;
    std::vector<int> levels{2, 4, 8, 16};
    std::vector<double> err(levels.size(), 0.0);
    std::vector<std::vector<double>> per_path(levels.size(), std::vector<double>(n));
    parallel_for(n, [&](std::size_t p) {
        const auto sc = make_scenario(params, 1.0, 4, 109, p);
        double full = 0.0;
        for (const auto& a : sc.j.atoms()) full += a.mark[0];
        for (std::size_t li = 0; li < levels.size(); ++li) {
            const auto jt = truncate_small_jumps(sc.j, levels[li]);
            double kept = 0.0;
            for (const auto& a : jt.atoms()) kept += a.mark[0];
            // compensate both consistently: the residual is the small-jump sum
            // minus its mean, and its second moment shrinks with n
            const double thr = 1.0 / levels[li];
            const double small_mean = law.moment(1, MarkRegion(MarkBand::interval(0.01, thr)));
            const double resid = (full - kept) - small_mean;
            per_path[li][p] = resid * resid;
        }
    });
    for (std::size_t li = 0; li < levels.size(); ++li) err[li] = mean_se(per_path[li]).mean;
    for (std::size_t li = 0; li + 1 < levels.size(); ++li) CHECK(err[li] > err[li + 1]);
}

TEST_CASE("scenarios are bit-identical for a fixed master seed and stream") {
    const auto law = MarkLaw::point_masses({{scalar_mark(0.5), 0.6}, {scalar_mark(2.0), 0.4}});
    LevyParams params{0.3, 0.5, law, 1.0};
    const auto a = make_scenario(params, 1.0, 32, 99, 7);
    const auto b = make_scenario(params, 1.0, 32, 99, 7);
    REQUIRE(a.j.size() == b.j.size());
    for (std::size_t k = 0; k < a.j.size(); ++k) {
        CHECK(a.j.atoms()[k].time == b.j.atoms()[k].time);
        CHECK(a.j.atoms()[k].mark[0] == b.j.atoms()[k].mark[0]);
    }
    for (std::size_t k = 0; k < a.x.node_count(); ++k)
        CHECK(a.x.node_value(k) == b.x.node_value(k));

    // stream independence of ordering: drawing stream 8 first must not change stream 7
    RngStream early(99, 8);
    early.normal();
    const auto c = make_scenario(params, 1.0, 32, 99, 7);
    REQUIRE(c.j.size() == a.j.size());
    for (std::size_t k = 0; k < a.x.node_count(); ++k)
        CHECK(a.x.node_value(k) == c.x.node_value(k));
}

TEST_CASE("linear-drift path state has exact running maxima") {
    // gamma = 1, one downward jump of -0.8 at t = 0.5, fully compensated law
    const auto law = MarkLaw::point_masses({{scalar_mark(-0.8), 1.0}});
    LevyParams params{1.0, 0.0, law, 2.0};  // threshold 2 > 0.8: compensated
    Scenario sc;
    sc.model = CompensatorModel{Intensity::constant(1.0), law};
    std::vector<double> times{0.0, 0.25, 0.5, 0.75};
    std::vector<double> values;
    for (double t : times) values.push_back(params.gamma * t);
    sc.x = CadlagPath(1.0, times, values);
    sc.j = AtomicMeasure(1.0, {Atom{0.5, scalar_mark(-0.8)}});
    const LevyPathState state(sc, params);
    const double drift = params.gamma - params.compensation_rate();  // 1 + 0.8 = 1.8
    CHECK(drift == doctest::Approx(1.8));
    CHECK(state.value(0.4) == doctest::Approx(drift * 0.4));
    CHECK(state.pre_value(0.5) == doctest::Approx(drift * 0.5));
    CHECK(state.value(0.5) == doctest::Approx(drift * 0.5 - 0.8));
    CHECK(state.max_upto(0.7) == doctest::Approx(drift * 0.5));  // pre-jump peak
    CHECK(state.max_upto(1.0) == doctest::Approx(std::max(drift * 0.5, drift * 1.0 - 0.8)));
}
