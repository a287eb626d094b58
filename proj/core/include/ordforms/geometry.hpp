#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ordforms/rng.hpp"

namespace ordforms {

enum class Curvature : int { hyperbolic = -1, euclidean = 0, spherical = 1 };

/// A unit-curvature space form: H^d, E^d or S^d.
class SpaceForm {
public:
    SpaceForm(Curvature curvature, int dim);

    static SpaceForm hyperbolic(int dim) { return {Curvature::hyperbolic, dim}; }
    static SpaceForm euclidean(int dim) { return {Curvature::euclidean, dim}; }
    static SpaceForm spherical(int dim) { return {Curvature::spherical, dim}; }

    /// Parses labels such as "H2", "E3", "S2" (case-insensitive letter).
    static SpaceForm parse(std::string_view label);

    Curvature curvature() const noexcept { return curvature_; }
    int curvature_sign() const noexcept { return static_cast<int>(curvature_); }
    int dim() const noexcept { return dim_; }

    /// Coordinate count of a point: d for E^d, d + 1 for the 'Loid and sphere models.
    int ambient_dim() const noexcept { return curvature_ == Curvature::euclidean ? dim_ : dim_ + 1; }

    std::string label() const;

    friend bool operator==(const SpaceForm&, const SpaceForm&) = default;

private:
    Curvature curvature_;
    int dim_;
};

/// Point coordinates. Hyperbolic points live on the 'Loid sheet with coordinate 0
/// time-like; spherical points are unit vectors in R^{d+1}.
using Point = Eigen::VectorXd;

enum class DistributionFamily { projected_normal, euclidean_normal, lognormal_centered, uniform_sphere, uniform_box };

struct DistributionSpec {
    DistributionFamily family = DistributionFamily::uniform_sphere;
    double scale = 1.0;

    static DistributionSpec projected_normal(double sigma) { return {DistributionFamily::projected_normal, sigma}; }
    static DistributionSpec euclidean_normal(double sigma) { return {DistributionFamily::euclidean_normal, sigma}; }
    static DistributionSpec lognormal_centered(double a) { return {DistributionFamily::lognormal_centered, a}; }
    static DistributionSpec uniform_sphere() { return {DistributionFamily::uniform_sphere, 1.0}; }
    /// Uniform on [-s, s]^d; lifted to the sheet on H^d.
    static DistributionSpec uniform_box(double s) { return {DistributionFamily::uniform_box, s}; }

    /// Oracle defaults: projected normal sigma = 100 on H^d, normal sigma = 100 on E^d,
    /// uniform on S^d.
    static DistributionSpec default_for(const SpaceForm& form);

    /// Parses "projected-normal:100", "normal:100", "lognormal:0.5", "uniform",
    /// "uniform-box:1".
    static DistributionSpec parse(std::string_view text);

    bool compatible_with(const SpaceForm& form) const noexcept;
    void validate_for(const SpaceForm& form) const;
    std::string label() const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

/// -x_0 y_0 + sum_{i >= 1} x_i y_i.
double lorentz_inner(const Point& x, const Point& y);

/// Checks the model invariants of `form` for `x`. The hyperbolic check is relative
/// to x_0^2 so that far-out sheet points are not rejected for rounding alone.
bool is_valid_point(const SpaceForm& form, const Point& x, double tol = 1e-9);
void validate_point(const SpaceForm& form, const Point& x);

/// Geodesic distance; validates both points.
double space_distance(const SpaceForm& form, const Point& x, const Point& y);

/// Geodesic distance without validation, for callers that validated already.
double distance_unchecked(Curvature curvature, const Point& x, const Point& y);

/// (sqrt(1 + |z|^2), z).
Point lift_to_hyperboloid(const Eigen::Ref<const Eigen::VectorXd>& spatial);

/// Maps an arbitrary coordinate vector onto the model of `form`.
Point project_to_form(const SpaceForm& form, const Eigen::Ref<const Eigen::VectorXd>& x);

/// n seeded i.i.d. draws from `spec` placed on `form`.
std::vector<Point> sample_points(const SpaceForm& form, const DistributionSpec& spec, std::size_t n,
                                 std::uint64_t seed);

/// Same as sample_points but drawing from a caller-owned stream, overwriting `out`.
void sample_points_into(const SpaceForm& form, const DistributionSpec& spec, CounterRng& rng,
                        std::span<Point> out);

/// Dense symmetric matrix of geodesic distances with an exact zero diagonal.
Eigen::MatrixXd pairwise_distances(const SpaceForm& form, std::span<const Point> points);

} // namespace ordforms
