#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "torapot/grid.hpp"

namespace torapot {

struct Assertion {
    std::string name;
    double lhs = 0, rhs = 0;  // the claim is lhs <= rhs
    double slack = 0;         // rhs - lhs
    double tol = 0;
    bool pass = false;
};

struct CertificateReport {
    std::string theorem;
    std::string instance;
    std::string digest;
    uint64_t seed = 0;
    bool exploratory = false;  // no pass/fail meaning
    std::vector<Assertion> assertions;
    std::vector<std::pair<std::string, double>> constants;
    std::vector<std::string> notes;
    double wall_seconds = 0;  // stdout only, never serialized

    // lhs <= rhs + tol. NaN on either side fails.
    void le(const std::string& name, double lhs, double rhs, double tol = 0);
    void ge(const std::string& name, double lhs, double rhs, double tol = 0) { le(name, rhs, lhs, tol); }
    void holds(const std::string& name, bool ok);
    void constant(const std::string& name, double v) { constants.emplace_back(name, v); }
    bool pass() const;
    const Assertion* find(const std::string& name) const;
};

// FNV-1a over values and mask bytes.
std::string digest(const ScalarField& u);
std::string digest(const std::vector<double>& v);

// Shortest round-trip decimal; INF / -INF for infinities, NaN mapped to INF.
std::string format_number(double v);

nlohmann::json to_json(const CertificateReport& r);
void write_csv_header(std::ostream& os);
void write_csv(std::ostream& os, const CertificateReport& r);

}  // namespace torapot
