#pragma once

#include "chaostex/point_cloud.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ctx {

/// The six one-dimensional chaotic maps, plus Identity, a non-chaotic baseline
/// that leaves every coordinate untouched.
enum class MapFamily { Circle, Gauss, Logistic, Sine, Singer, Tent, Identity };

std::string_view to_string(MapFamily family) noexcept;

/// Map family with its parameters. `nu` is only read by the circle map.
///
/// Parameters are not checked for lying in a chaotic regime; only the
/// positivity of mu for Logistic, Sine and Singer is enforced.
struct ChaoticMapSpec {
    MapFamily family = MapFamily::Logistic;
    double mu = 3.8;
    double nu = 0.0;

    /// Chaotic defaults: Circle (0.2, 0.5), Logistic 3.8, Sine 4, Singer 1.07.
    static ChaoticMapSpec defaults(MapFamily family) noexcept;

    /// Parses "logistic", "logistic:mu=3.8", "circle:mu=0.2,nu=0.5", ...
    /// Family names are case-insensitive; omitted parameters take the defaults.
    /// Throws ContractViolation on unknown families or keys.
    static ChaoticMapSpec parse(std::string_view text);

    /// Canonical form accepted by parse().
    std::string to_string() const;

    /// Throws DomainError when mu is not positive for a family that needs it.
    void validate() const;

    friend bool operator==(const ChaoticMapSpec&, const ChaoticMapSpec&) = default;
};

/// One application of the map, clamped to [0,1].
/// Throws DomainError for non-finite x and ContractViolation for x outside [0,1].
double step(double x, const ChaoticMapSpec& spec);

/// Applies step() to every coordinate of every point.
PointCloud step_cloud(const PointCloud& cloud, const ChaoticMapSpec& spec);

/// [x0, x1, ..., xn].
std::vector<double> orbit(double x0, const ChaoticMapSpec& spec, std::size_t n);

}  // namespace ctx
