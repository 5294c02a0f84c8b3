#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace torapot {

/*
 * Increasing weight chi with chi(0) = 0. Three representations:
 *   power          coef * t^p
 *   table          piecewise linear through (t_k, chi_k), last slope extended
 *   root_integral  int_0^t chi1(s)^{1/n} ds for a tabulated chi1, in closed form
 */
struct Weight {
    enum class Kind { power, table, root_integral };
    Kind kind = Kind::power;
    double p = 1, coef = 1;
    std::vector<double> ts, vs;  // table knots (chi1's knots for root_integral)
    int n = 1;
    std::vector<double> cum;  // root_integral values at the knots

    double operator()(double t) const;
    double derivative(double t) const;  // right derivative
    double inverse(double y) const;
    nlohmann::json to_json() const;
    std::string label() const;
};

Weight weight_power(double p, double coef = 1);
Weight weight_table(std::vector<double> ts, std::vector<double> vs);
Weight weight_from_json(const nlohmann::json& j);

// chi2(t) = int_0^t chi1(s)^{1/n} ds
Weight chi2_from_chi1(const Weight& chi1, int n);

// tau2(1) = chi2(s) / chi2'(s) with s = chi1^{-1}(a^{-n}).
double tau2_at_one(const Weight& chi1, int n, double a);
// Same quantity by bisection and adaptive quadrature, for cross-checks.
double tau2_at_one_numeric(const Weight& chi1, int n, double a);

}  // namespace torapot
