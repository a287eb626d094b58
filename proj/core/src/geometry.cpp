#include "ordforms/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <sstream>

#include "ordforms/error.hpp"

namespace ordforms {

SpaceForm::SpaceForm(Curvature curvature, int dim) : curvature_(curvature), dim_(dim) {
    const int sign = static_cast<int>(curvature);
    if (sign < -1 || sign > 1) throw Error("curvature sign must be -1, 0 or +1");
    if (dim < 1) throw Error("space form dimension must be >= 1");
}

SpaceForm SpaceForm::parse(std::string_view label) {
    if (label.size() < 2) throw Error("invalid space form label '" + std::string(label) + "'");
    Curvature c{};
    switch (std::toupper(static_cast<unsigned char>(label.front()))) {
        case 'H': c = Curvature::hyperbolic; break;
        case 'E': c = Curvature::euclidean; break;
        case 'S': c = Curvature::spherical; break;
        default: throw Error("invalid space form label '" + std::string(label) + "'");
    }
    int dim = 0;
    const auto digits = label.substr(1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dim);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw Error("invalid space form label '" + std::string(label) + "'");
    }
    return {c, dim};
}

std::string SpaceForm::label() const {
    const char letter = curvature_ == Curvature::hyperbolic ? 'H'
                        : curvature_ == Curvature::euclidean ? 'E'
                                                             : 'S';
    return letter + std::to_string(dim_);
}

DistributionSpec DistributionSpec::default_for(const SpaceForm& form) {
    switch (form.curvature()) {
        case Curvature::hyperbolic: return projected_normal(100.0);
        case Curvature::euclidean: return euclidean_normal(100.0);
        case Curvature::spherical: return uniform_sphere();
    }
    return uniform_sphere();
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string name(text.substr(0, colon));
    double scale = 1.0;
    if (colon != std::string_view::npos) {
        const std::string value(text.substr(colon + 1));
        try {
            std::size_t used = 0;
            scale = std::stod(value, &used);
            if (used != value.size()) throw Error("");
        } catch (const std::exception&) {
            throw Error("invalid distribution scale in '" + std::string(text) + "'");
        }
    }
    DistributionSpec spec;
    if (name == "projected-normal") {
        spec = projected_normal(colon == std::string_view::npos ? 100.0 : scale);
    } else if (name == "normal") {
        spec = euclidean_normal(colon == std::string_view::npos ? 100.0 : scale);
    } else if (name == "lognormal") {
        if (colon == std::string_view::npos) throw Error("lognormal needs a scale, e.g. lognormal:0.5");
        spec = lognormal_centered(scale);
    } else if (name == "uniform") {
        spec = uniform_sphere();
    } else if (name == "uniform-box") {
        spec = uniform_box(scale);
    } else {
        throw Error("unknown distribution '" + std::string(text) + "'");
    }
    if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) {
        throw Error("distribution scale must be positive and finite");
    }
    return spec;
}

bool DistributionSpec::compatible_with(const SpaceForm& form) const noexcept {
    switch (family) {
        case DistributionFamily::projected_normal: return form.curvature() == Curvature::hyperbolic;
        case DistributionFamily::euclidean_normal: return form.curvature() == Curvature::euclidean;
        case DistributionFamily::uniform_sphere: return form.curvature() == Curvature::spherical;
        case DistributionFamily::lognormal_centered: return true;
        case DistributionFamily::uniform_box: return form.curvature() != Curvature::spherical;
    }
    return false;
}

void DistributionSpec::validate_for(const SpaceForm& form) const {
    if (!compatible_with(form)) {
        throw Error("distribution '" + label() + "' is not defined on " + form.label());
    }
    if (family != DistributionFamily::uniform_sphere && (!(scale > 0.0) || !std::isfinite(scale))) {
        throw Error("distribution scale must be positive and finite");
    }
}

std::string DistributionSpec::label() const {
    std::ostringstream out;
    switch (family) {
        case DistributionFamily::projected_normal: out << "projected-normal:" << scale; break;
        case DistributionFamily::euclidean_normal: out << "normal:" << scale; break;
        case DistributionFamily::lognormal_centered: out << "lognormal:" << scale; break;
        case DistributionFamily::uniform_sphere: out << "uniform"; break;
        case DistributionFamily::uniform_box: out << "uniform-box:" << scale; break;
    }
    return out.str();
}

double lorentz_inner(const Point& x, const Point& y) {
    if (x.size() != y.size()) throw Error("lorentz_inner: length mismatch");
    if (x.size() < 2) throw Error("lorentz_inner: points need at least 2 coordinates");
    return -x[0] * y[0] + x.tail(x.size() - 1).dot(y.tail(y.size() - 1));
}

bool is_valid_point(const SpaceForm& form, const Point& x, double tol) {
    if (x.size() != form.ambient_dim()) return false;
    if (!x.allFinite()) return false;
    switch (form.curvature()) {
        case Curvature::euclidean: return true;
        case Curvature::spherical: return std::abs(x.norm() - 1.0) <= tol;
        case Curvature::hyperbolic: {
            if (!(x[0] > 0.0)) return false;
            const double self = lorentz_inner(x, x);
            return std::abs(self + 1.0) <= tol * std::max(1.0, x[0] * x[0]);
        }
    }
    return false;
}

void validate_point(const SpaceForm& form, const Point& x) {
    if (x.size() != form.ambient_dim()) {
        throw Error("point has " + std::to_string(x.size()) + " coordinates, " + form.label() + " needs " +
                    std::to_string(form.ambient_dim()));
    }
    if (!is_valid_point(form, x)) throw Error("point is not on the model of " + form.label());
}

double distance_unchecked(Curvature curvature, const Point& x, const Point& y) {
    switch (curvature) {
        case Curvature::euclidean: return (x - y).norm();
        case Curvature::spherical: return 2.0 * std::atan2((x - y).norm(), (x + y).norm());
        case Curvature::hyperbolic: {
            // -[x,y] = 1 + [x-y, x-y] / 2 on the sheet; differencing first avoids the
            // cancellation of acosh(-[x,y]) for nearby far-out points.
            const double dt = x[0] - y[0];
            const double ds2 = (x.tail(x.size() - 1) - y.tail(y.size() - 1)).squaredNorm();
            const double t = std::max(0.0, 0.5 * (ds2 - dt * dt));
            return std::log1p(t + std::sqrt(t * (t + 2.0)));
        }
    }
    return 0.0;
}

double space_distance(const SpaceForm& form, const Point& x, const Point& y) {
    validate_point(form, x);
    validate_point(form, y);
    return distance_unchecked(form.curvature(), x, y);
}

Point lift_to_hyperboloid(const Eigen::Ref<const Eigen::VectorXd>& spatial) {
    Point x(spatial.size() + 1);
    x[0] = std::sqrt(1.0 + spatial.squaredNorm());
    x.tail(spatial.size()) = spatial;
    return x;
}

Point project_to_form(const SpaceForm& form, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != form.ambient_dim()) {
        throw Error("project_to_form: expected " + std::to_string(form.ambient_dim()) + " coordinates");
    }
    switch (form.curvature()) {
        case Curvature::euclidean: return x;
        case Curvature::hyperbolic: return lift_to_hyperboloid(x.tail(x.size() - 1));
        case Curvature::spherical: {
            const double norm = x.norm();
            if (!(norm > 0.0)) throw Error("project_to_form: cannot project the zero vector to a sphere");
            return x / norm;
        }
    }
    return x;
}

namespace {

void fill_normal(CounterRng& rng, Eigen::Ref<Eigen::VectorXd> z, double sigma) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sigma * rng.normal();
}

void fill_lognormal_centered(CounterRng& rng, Eigen::Ref<Eigen::VectorXd> z, double a) {
    const double mean = std::exp(0.5 * a * a);
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = std::exp(a * rng.normal()) - mean;
}

Point draw_one(const SpaceForm& form, const DistributionSpec& spec, CounterRng& rng) {
    const int d = form.dim();
    switch (spec.family) {
        case DistributionFamily::projected_normal: {
            Eigen::VectorXd z(d);
            fill_normal(rng, z, spec.scale);
            return lift_to_hyperboloid(z);
        }
        case DistributionFamily::euclidean_normal: {
            Eigen::VectorXd z(d);
            fill_normal(rng, z, spec.scale);
            return z;
        }
        case DistributionFamily::uniform_sphere: {
            Eigen::VectorXd z(d + 1);
            do {
                fill_normal(rng, z, 1.0);
            } while (!(z.norm() > 0.0));
            return z / z.norm();
        }
        case DistributionFamily::lognormal_centered: {
            if (form.curvature() == Curvature::spherical) {
                Eigen::VectorXd z(d + 1);
                do {
                    fill_lognormal_centered(rng, z, spec.scale);
                } while (!(z.norm() > 0.0));
                return z / z.norm();
            }
            Eigen::VectorXd z(d);
            fill_lognormal_centered(rng, z, spec.scale);
            return form.curvature() == Curvature::hyperbolic ? lift_to_hyperboloid(z) : Point(z);
        }
        case DistributionFamily::uniform_box: {
            Eigen::VectorXd z(d);
            for (Eigen::Index i = 0; i < d; ++i) z[i] = spec.scale * (2.0 * rng.uniform() - 1.0);
            return form.curvature() == Curvature::hyperbolic ? lift_to_hyperboloid(z) : Point(z);
        }
    }
    return {};
}

} // namespace

void sample_points_into(const SpaceForm& form, const DistributionSpec& spec, CounterRng& rng,
                        std::span<Point> out) {
    spec.validate_for(form);
    for (auto& p : out) p = draw_one(form, spec, rng);
}

std::vector<Point> sample_points(const SpaceForm& form, const DistributionSpec& spec, std::size_t n,
                                 std::uint64_t seed) {
    if (n < 1) throw Error("sample_points: n must be >= 1");
    std::vector<Point> points(n);
    CounterRng rng(seed);
    sample_points_into(form, spec, rng, points);
    return points;
}

Eigen::MatrixXd pairwise_distances(const SpaceForm& form, std::span<const Point> points) {
    for (const auto& p : points) validate_point(form, p);
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = distance_unchecked(form.curvature(), points[i], points[j]);
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return d;
}

} // namespace ordforms
