#include "chaostex/chaotic_maps.hpp"

#include "chaostex/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <charconv>

namespace ctx {

namespace {

constexpr double kGaussZero = 1e-12;

double fractional(double v) { return v - std::floor(v); }

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double raw_step(double x, const ChaoticMapSpec& spec) {
    using std::numbers::pi;
    switch (spec.family) {
        case MapFamily::Circle:
            return fractional(x + spec.mu - (spec.nu / (2.0 * pi)) * std::sin(2.0 * pi * x));
        case MapFamily::Gauss:
            if (std::abs(x) < kGaussZero) return 0.0;
            return fractional(1.0 / x);
        case MapFamily::Logistic:
            return spec.mu * x * (1.0 - x);
        case MapFamily::Sine:
            return spec.mu / 4.0 * std::sin(pi * x);
        case MapFamily::Singer: {
            const double x2 = x * x;
            return spec.mu * (7.86 * x - 23.31 * x2 + 28.75 * x2 * x - 13.302875 * x2 * x2);
        }
        case MapFamily::Tent:
            return x < 0.7 ? x / 0.7 : (10.0 / 3.0) * (1.0 - x);
        case MapFamily::Identity:
            return x;
    }
    return x;
}

}  // namespace

std::string_view to_string(MapFamily family) noexcept {
    switch (family) {
        case MapFamily::Circle: return "circle";
        case MapFamily::Gauss: return "gauss";
        case MapFamily::Logistic: return "logistic";
        case MapFamily::Sine: return "sine";
        case MapFamily::Singer: return "singer";
        case MapFamily::Tent: return "tent";
        case MapFamily::Identity: return "identity";
    }
    return "unknown";
}

ChaoticMapSpec ChaoticMapSpec::defaults(MapFamily family) noexcept {
    switch (family) {
        case MapFamily::Circle: return {family, 0.2, 0.5};
        case MapFamily::Logistic: return {family, 3.8, 0.0};
        case MapFamily::Sine: return {family, 4.0, 0.0};
        case MapFamily::Singer: return {family, 1.07, 0.0};
        case MapFamily::Gauss:
        case MapFamily::Tent:
        case MapFamily::Identity: return {family, 0.0, 0.0};
    }
    return {};
}

ChaoticMapSpec ChaoticMapSpec::parse(std::string_view text) {
    text = trim(text);
    const auto colon = text.find(':');
    const std::string name = lower(trim(text.substr(0, colon)));

    static constexpr MapFamily kAll[] = {MapFamily::Circle, MapFamily::Gauss,
                                         MapFamily::Logistic, MapFamily::Sine,
                                         MapFamily::Singer, MapFamily::Tent,
                                         MapFamily::Identity};
    const auto* it = std::find_if(std::begin(kAll), std::end(kAll),
                                  [&](MapFamily f) { return ctx::to_string(f) == name; });
    if (it == std::end(kAll)) {
        throw ContractViolation("unknown chaotic map '" + name + "'");
    }
    ChaoticMapSpec spec = defaults(*it);
    if (colon == std::string_view::npos) return spec;

    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item.empty()) continue;

        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw ContractViolation("map parameter '" + std::string(item) + "' lacks '='");
        }
        const std::string key = lower(trim(item.substr(0, eq)));
        const std::string value(trim(item.substr(eq + 1)));
        double parsed = 0.0;
        try {
            std::size_t used = 0;
            parsed = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw ContractViolation("map parameter " + key + ": bad number '" + value + "'");
        }
        if (key == "mu") {
            spec.mu = parsed;
        } else if (key == "nu") {
            spec.nu = parsed;
        } else {
            throw ContractViolation("unknown map parameter '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

std::string ChaoticMapSpec::to_string() const {
    // shortest representation that parses back to the same double
    const auto num = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    std::string out(ctx::to_string(family));
    switch (family) {
        case MapFamily::Circle: out += ":mu=" + num(mu) + ",nu=" + num(nu); break;
        case MapFamily::Logistic:
        case MapFamily::Sine:
        case MapFamily::Singer: out += ":mu=" + num(mu); break;
        default: break;
    }
    return out;
}

void ChaoticMapSpec::validate() const {
    const bool needs_mu = family == MapFamily::Logistic || family == MapFamily::Sine ||
                          family == MapFamily::Singer;
    if (needs_mu && !(mu > 0.0)) {
        throw DomainError(std::string(ctx::to_string(family)) + " map requires mu > 0, got " +
                          std::to_string(mu));
    }
    if (!std::isfinite(mu) || !std::isfinite(nu)) {
        throw DomainError("map parameters must be finite");
    }
}

double step(double x, const ChaoticMapSpec& spec) {
    if (!std::isfinite(x)) {
        throw DomainError("chaotic map input is not finite: " + std::to_string(x));
    }
    if (x < 0.0 || x > 1.0) {
        throw ContractViolation("chaotic map input outside [0,1]: " + std::to_string(x));
    }
    return std::clamp(raw_step(x, spec), 0.0, 1.0);
}

PointCloud step_cloud(const PointCloud& cloud, const ChaoticMapSpec& spec) {
    spec.validate();
    std::vector<double> out(cloud.values().size());
    std::transform(cloud.values().begin(), cloud.values().end(), out.begin(),
                   [&spec](double v) { return step(v, spec); });
    return PointCloud(cloud.source_height(), cloud.source_width(), std::move(out));
}

std::vector<double> orbit(double x0, const ChaoticMapSpec& spec, std::size_t n) {
    std::vector<double> out;
    out.reserve(n + 1);
    out.push_back(x0);
    for (std::size_t k = 0; k < n; ++k) out.push_back(step(out.back(), spec));
    return out;
}

}  // namespace ctx
