#include "kecone/reference_solutions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kecone {

namespace {

using std::numbers::pi;
using std::numbers::sqrt3;

double sech_sq(double x) {
    const double s = 1.0 / std::cosh(x);
    return s * s;
}

void require_negative_r(double r) {
    if (!(r < 0.0)) {
        throw std::domain_error("reference: r must be strictly negative");
    }
}

[[noreturn]] void no_r_closed_form(ReferenceModel model) {
    throw std::invalid_argument("reference: model " + std::string(to_string(model)) +
                                " has no closed form in r");
}

}  // namespace

std::string_view to_string(ReferenceModel model) {
    switch (model) {
        case ReferenceModel::P2: return "p2";
        case ReferenceModel::P1xP1: return "p1xp1";
        case ReferenceModel::P114: return "p114";
        case ReferenceModel::EguchiHanson: return "eguchi-hanson";
    }
    return "unknown";
}

std::optional<ReferenceModel> parse_reference_model(std::string_view name) {
    for (auto m : {ReferenceModel::P2, ReferenceModel::P1xP1, ReferenceModel::P114,
                   ReferenceModel::EguchiHanson}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

double parameter_upper_bound(ReferenceModel model) {
    switch (model) {
        case ReferenceModel::P2: return pi / 4.0;
        case ReferenceModel::P1xP1: return pi / (2.0 * sqrt3);
        case ReferenceModel::P114: return pi / 2.0;
        case ReferenceModel::EguchiHanson: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

double eval_f_of_r(ReferenceModel model, double r) {
    require_negative_r(r);
    switch (model) {
        case ReferenceModel::P2: return -0.5 * std::tanh(2.0 * r);
        case ReferenceModel::P1xP1: return -std::tanh(r) / 3.0;
        default: no_r_closed_form(model);
    }
}

double eval_h_of_r(ReferenceModel model, double r) {
    require_negative_r(r);
    switch (model) {
        case ReferenceModel::P2: return -sech_sq(2.0 * r);
        case ReferenceModel::P1xP1: return -sech_sq(r) / 3.0;
        default: no_r_closed_form(model);
    }
}

double eval_dh_of_r(ReferenceModel model, double r) {
    require_negative_r(r);
    switch (model) {
        case ReferenceModel::P2: return 4.0 * sech_sq(2.0 * r) * std::tanh(2.0 * r);
        case ReferenceModel::P1xP1: return 2.0 / 3.0 * sech_sq(r) * std::tanh(r);
        default: no_r_closed_form(model);
    }
}

MetricCoefficients eval_abc_of_t(ReferenceModel model, double t) {
    if (!(t >= 0.0) || !(t <= parameter_upper_bound(model))) {
        throw std::domain_error("reference: parameter outside the model's range");
    }
    switch (model) {
        case ReferenceModel::P2:
            // a = sin(pi/4 - t); the cos(t + pi/4) form is negative on (0, pi/4].
            return {std::sin(pi / 4.0 - t), std::sin(t + pi / 4.0), std::sin(2.0 * t)};
        case ReferenceModel::P1xP1: {
            const double k = 1.0 / sqrt3;
            return {k * std::cos(sqrt3 * t), k, k * std::sin(sqrt3 * t)};
        }
        case ReferenceModel::P114: {
            const double ab = 0.5 * std::cos(t);
            return {ab, ab, 0.25 * std::sin(2.0 * t)};
        }
        case ReferenceModel::EguchiHanson: {
            const double s = t;
            const double bc = std::sqrt(std::cosh(s));
            return {std::sqrt(std::sinh(s) * std::tanh(s)), bc, bc};
        }
    }
    return {};
}

BubbleTarget eval_bubble_targets(double r) {
    if (!(r <= 0.0)) {
        throw std::domain_error("reference: bubble targets need r <= 0");
    }
    return {-std::sinh(r), -std::cosh(r)};
}

}  // namespace kecone
