#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ordforms/error.hpp"
#include "ordforms/geometry.hpp"

using namespace ordforms;

namespace {

Point vec(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

const SpaceForm kForms[] = {SpaceForm::hyperbolic(2), SpaceForm::euclidean(2), SpaceForm::spherical(2),
                            SpaceForm::hyperbolic(3), SpaceForm::euclidean(3), SpaceForm::spherical(3)};

} // namespace

TEST(SpaceForm, ParsesLabels) {
    EXPECT_EQ(SpaceForm::parse("H2"), SpaceForm::hyperbolic(2));
    EXPECT_EQ(SpaceForm::parse("e3"), SpaceForm::euclidean(3));
    EXPECT_EQ(SpaceForm::parse("S10").dim(), 10);
    EXPECT_EQ(SpaceForm::spherical(4).label(), "S4");
    EXPECT_THROW(SpaceForm::parse("X2"), Error);
    EXPECT_THROW(SpaceForm::parse("H"), Error);
    EXPECT_THROW(SpaceForm::parse("H0"), Error);
    EXPECT_THROW(SpaceForm(Curvature::euclidean, 0), Error);
}

TEST(SpaceForm, AmbientDimension) {
    EXPECT_EQ(SpaceForm::euclidean(2).ambient_dim(), 2);
    EXPECT_EQ(SpaceForm::hyperbolic(2).ambient_dim(), 3);
    EXPECT_EQ(SpaceForm::spherical(2).ambient_dim(), 3);
}

TEST(LorentzInner, BasePointSelfProduct) { EXPECT_DOUBLE_EQ(lorentz_inner(vec({1, 0, 0}), vec({1, 0, 0})), -1.0); }

TEST(LorentzInner, AnalyticPair) {
    EXPECT_NEAR(lorentz_inner(vec({1, 0, 0}), vec({std::cosh(1.0), std::sinh(1.0), 0})), -1.5430806348152437, 1e-12);
}

TEST(LorentzInner, MatchesTermwiseSum) {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> g;
    for (int t = 0; t < 100; ++t) {
        Point x(4), y(4);
        for (int i = 0; i < 4; ++i) {
            x[i] = g(gen);
            y[i] = g(gen);
        }
        double expected = 0.0;
        for (int i = 0; i < 4; ++i) expected += (i == 0 ? -1.0 : 1.0) * x[i] * y[i];
        EXPECT_NEAR(lorentz_inner(x, y), expected, 1e-12);
    }
}

TEST(LorentzInner, RejectsLengthMismatch) { EXPECT_THROW(lorentz_inner(vec({1, 0}), vec({1, 0, 0})), Error); }

TEST(SpaceDistance, HyperbolicAnalytic) {
    EXPECT_NEAR(space_distance(SpaceForm::hyperbolic(2), vec({1, 0, 0}), vec({std::cosh(2.0), std::sinh(2.0), 0})),
                2.0, 1e-12);
}

TEST(SpaceDistance, SphericalAntipodes) {
    EXPECT_DOUBLE_EQ(space_distance(SpaceForm::spherical(2), vec({0, 0, 1}), vec({0, 0, -1})), std::numbers::pi);
}

TEST(SpaceDistance, EuclideanMatchesRootSumSquare) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int t = 0; t < 100; ++t) {
        const Point x = vec({u(gen), u(gen), u(gen)});
        const Point y = vec({u(gen), u(gen), u(gen)});
        const double expected =
            std::sqrt((x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]) + (x[2] - y[2]) * (x[2] - y[2]));
        EXPECT_NEAR(space_distance(SpaceForm::euclidean(3), x, y), expected, 1e-12);
    }
}

TEST(SpaceDistance, SphericalMatchesClampedAcos) {
    const auto pts = sample_points(SpaceForm::spherical(2), DistributionSpec::uniform_sphere(), 200, 9);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double expected = std::acos(std::clamp(pts[i].dot(pts[i + 1]), -1.0, 1.0));
        EXPECT_NEAR(space_distance(SpaceForm::spherical(2), pts[i], pts[i + 1]), expected, 1e-7);
    }
}

TEST(SpaceDistance, HyperbolicMatchesAcosh) {
    const auto pts = sample_points(SpaceForm::hyperbolic(2), DistributionSpec::projected_normal(2.0), 200, 10);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double expected = std::acosh(std::max(1.0, -lorentz_inner(pts[i], pts[i + 1])));
        EXPECT_NEAR(space_distance(SpaceForm::hyperbolic(2), pts[i], pts[i + 1]), expected, 1e-6);
    }
}

TEST(SpaceDistance, RejectsInvalidPoints) {
    EXPECT_THROW(space_distance(SpaceForm::spherical(2), vec({0, 0, 2}), vec({0, 0, 1})), Error);
    EXPECT_THROW(space_distance(SpaceForm::hyperbolic(2), vec({2, 0, 0}), vec({1, 0, 0})), Error);
    EXPECT_THROW(space_distance(SpaceForm::euclidean(2), vec({0, 0, 0}), vec({1, 0})), Error);
}

TEST(SpaceDistance, SymmetricAndZeroOnDiagonal) {
    for (const auto& f : kForms) {
        const auto pts = sample_points(f, DistributionSpec::default_for(f), 50, 21);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            EXPECT_EQ(space_distance(f, pts[i], pts[i + 1]), space_distance(f, pts[i + 1], pts[i]));
            EXPECT_LE(space_distance(f, pts[i], pts[i]), 1e-9);
        }
    }
}

TEST(SamplePoints, HyperbolicLiftOfOrigin) {
    EXPECT_TRUE(lift_to_hyperboloid(Eigen::VectorXd::Zero(2)).isApprox(vec({1, 0, 0})));
}

TEST(SamplePoints, ModelInvariants) {
    for (const auto& f : kForms) {
        for (const auto& spec : {DistributionSpec::default_for(f), DistributionSpec::lognormal_centered(0.7)}) {
            for (const auto& p : sample_points(f, spec, 500, 4)) {
                ASSERT_EQ(p.size(), f.ambient_dim());
                if (f.curvature() == Curvature::hyperbolic) {
                    EXPECT_LE(std::abs(lorentz_inner(p, p) + 1.0), 1e-9 * p[0] * p[0]);
                    EXPECT_GE(p[0], 1.0);
                }
                if (f.curvature() == Curvature::spherical) EXPECT_NEAR(p.norm(), 1.0, 1e-9);
            }
        }
    }
}

TEST(SamplePoints, HyperbolicSheetWithinAbsoluteTolerance) {
    // moderate scale keeps x_0 small enough for the absolute 1e-9 check
    for (const auto& p : sample_points(SpaceForm::hyperbolic(3), DistributionSpec::projected_normal(3.0), 1000, 8)) {
        EXPECT_LE(std::abs(lorentz_inner(p, p) + 1.0), 1e-9);
    }
}

TEST(SamplePoints, DeterministicForSeed) {
    for (const auto& f : kForms) {
        const auto a = sample_points(f, DistributionSpec::default_for(f), 20, 77);
        const auto b = sample_points(f, DistributionSpec::default_for(f), 20, 77);
        const auto c = sample_points(f, DistributionSpec::default_for(f), 20, 78);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
        EXPECT_NE(a[0], c[0]);
    }
}

TEST(SamplePoints, NormalScaleMatchesSigma) {
    const auto pts = sample_points(SpaceForm::euclidean(2), DistributionSpec::euclidean_normal(100.0), 20000, 1);
    double sum = 0.0, sq = 0.0;
    for (const auto& p : pts) {
        sum += p[0];
        sq += p[0] * p[0];
    }
    const double n = static_cast<double>(pts.size());
    EXPECT_NEAR(sum / n, 0.0, 3.0);
    EXPECT_NEAR(std::sqrt(sq / n), 100.0, 2.0);
}

TEST(SamplePoints, LognormalIsCentred) {
    const double a = 0.5;
    const auto pts = sample_points(SpaceForm::euclidean(1), DistributionSpec::lognormal_centered(a), 100000, 2);
    double sum = 0.0;
    double min = 1e300;
    for (const auto& p : pts) {
        sum += p[0];
        min = std::min(min, p[0]);
    }
    EXPECT_NEAR(sum / static_cast<double>(pts.size()), 0.0, 0.01);
    EXPECT_GT(min, -std::exp(a * a / 2.0));
}

TEST(SamplePoints, UniformBoxStaysInBox) {
    for (const auto& p : sample_points(SpaceForm::euclidean(3), DistributionSpec::uniform_box(2.0), 1000, 3)) {
        EXPECT_LE(p.cwiseAbs().maxCoeff(), 2.0);
    }
}

TEST(DistributionSpec, Compatibility) {
    EXPECT_THROW(sample_points(SpaceForm::euclidean(2), DistributionSpec::uniform_sphere(), 3, 1), Error);
    EXPECT_THROW(sample_points(SpaceForm::spherical(2), DistributionSpec::projected_normal(1), 3, 1), Error);
    EXPECT_THROW(sample_points(SpaceForm::hyperbolic(2), DistributionSpec::euclidean_normal(1), 3, 1), Error);
    EXPECT_THROW(sample_points(SpaceForm::spherical(2), DistributionSpec::uniform_box(1), 3, 1), Error);
    EXPECT_THROW(sample_points(SpaceForm::euclidean(2), DistributionSpec::euclidean_normal(-1), 3, 1), Error);
    for (const auto& f : kForms) EXPECT_TRUE(DistributionSpec::lognormal_centered(1).compatible_with(f));
}

TEST(DistributionSpec, ParseRoundTrip) {
    for (const char* text : {"projected-normal:100", "normal:2.5", "lognormal:0.5", "uniform", "uniform-box:1"}) {
        EXPECT_EQ(DistributionSpec::parse(text).label(), text);
    }
    EXPECT_EQ(DistributionSpec::parse("normal"), DistributionSpec::euclidean_normal(100));
    EXPECT_THROW(DistributionSpec::parse("cauchy:1"), Error);
    EXPECT_THROW(DistributionSpec::parse("normal:abc"), Error);
    EXPECT_THROW(DistributionSpec::parse("normal:0"), Error);
    EXPECT_THROW(DistributionSpec::parse("lognormal"), Error);
}

TEST(ProjectToForm, Examples) {
    EXPECT_TRUE(project_to_form(SpaceForm::hyperbolic(2), vec({5, 0, 0})).isApprox(vec({1, 0, 0})));
    EXPECT_TRUE(project_to_form(SpaceForm::spherical(2), vec({0, 3, 4})).isApprox(vec({0, 0.6, 0.8})));
    EXPECT_EQ(project_to_form(SpaceForm::euclidean(2), vec({-3, 7})), vec({-3, 7}));
    EXPECT_THROW(project_to_form(SpaceForm::spherical(2), vec({0, 0, 0})), Error);
}

TEST(ProjectToForm, Idempotent) {
    for (const auto& f : kForms) {
        for (const auto& p : sample_points(f, DistributionSpec::lognormal_centered(0.5), 100, 6)) {
            EXPECT_LE((project_to_form(f, p) - p).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(PairwiseDistances, SymmetricZeroDiagonal) {
    const auto f = SpaceForm::spherical(3);
    const auto pts = sample_points(f, DistributionSpec::uniform_sphere(), 30, 12);
    const auto d = pairwise_distances(f, pts);
    EXPECT_EQ(d, d.transpose());
    EXPECT_EQ(d.diagonal(), Eigen::VectorXd::Zero(30));
    EXPECT_LE(d.maxCoeff(), std::numbers::pi);
}

TEST(Geometry, TriangleInequalityOnRandomTriples) {
    for (const auto& f : kForms) {
        const auto spec = f.curvature() == Curvature::hyperbolic ? DistributionSpec::projected_normal(3.0)
                                                                 : DistributionSpec::default_for(f);
        const auto pts = sample_points(f, spec, 3000, 33);
        for (std::size_t t = 0; t + 2 < pts.size(); t += 3) {
            const double ab = space_distance(f, pts[t], pts[t + 1]);
            const double bc = space_distance(f, pts[t + 1], pts[t + 2]);
            const double ac = space_distance(f, pts[t], pts[t + 2]);
            EXPECT_LE(ac, ab + bc + 1e-7);
        }
    }
}
