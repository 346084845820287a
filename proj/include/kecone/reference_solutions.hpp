#pragma once

#include <optional>
#include <string_view>

namespace kecone {

/// Closed-form SO(3)-invariant metrics used as ground truth.
///
/// P2            Fubini–Study metric (cone angle 2π), Ricci = 6.
/// P1xP1         product metric, i.e. cone angle π along the conic.
/// P114          orbifold Kähler–Einstein metric on P(1,1,4), the β → 1/4 limit.
/// EguchiHanson  Z2-quotient of Eguchi–Hanson, the rescaled bubble. Parametrized
///               by s >= 0 with r = -s, not by geodesic distance.
enum class ReferenceModel { P2, P1xP1, P114, EguchiHanson };

std::string_view to_string(ReferenceModel model);

/// Accepts the CLI spellings: p2, p1xp1, p114, eguchi-hanson.
std::optional<ReferenceModel> parse_reference_model(std::string_view name);

struct MetricCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

struct BubbleTarget {
    double f_limit = 0.0;
    double h_limit = 0.0;
};

/// Upper end of the parameter range: t* for P2, P1xP1 and P114, +inf for
/// EguchiHanson.
double parameter_upper_bound(ReferenceModel model);

/// f(r) for the models with an r closed form: -tanh(2r)/2 (P2) and
/// -tanh(r)/3 (P1xP1). Throws std::domain_error for r >= 0 and
/// std::invalid_argument for P114 / EguchiHanson.
double eval_f_of_r(ReferenceModel model, double r);

/// h(r) = df/dr of eval_f_of_r: -sech^2(2r) (P2) and -sech^2(r)/3 (P1xP1).
double eval_h_of_r(ReferenceModel model, double r);

/// dh/dr of eval_f_of_r: 4 sech^2(2r) tanh(2r) (P2) and
/// (2/3) sech^2(r) tanh(r) (P1xP1).
double eval_dh_of_r(ReferenceModel model, double r);

/// (a, b, c) at geodesic distance t from the P1 orbit, or at s for
/// EguchiHanson where (a*, b*, c*) = (sqrt(sinh s tanh s), sqrt(cosh s), sqrt(cosh s)).
/// Throws std::domain_error outside [0, parameter_upper_bound(model)].
MetricCoefficients eval_abc_of_t(ReferenceModel model, double t);

/// Bubble limits of (f tau, h tau): (-sinh r, -cosh r). Throws
/// std::domain_error for r > 0. Both components overflow to infinity for
/// r below about -710.47 (= -ln(2 DBL_MAX)).
BubbleTarget eval_bubble_targets(double r);

}  // namespace kecone
