#include "torapot/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace torapot {

void CertificateReport::le(const std::string& name, double lhs, double rhs, double tol) {
    Assertion a{name, lhs, rhs, rhs - lhs, tol, false};
    if (std::isinf(rhs) && rhs > 0 && !std::isnan(lhs)) a.slack = INFINITY;
    if (std::isnan(a.slack)) a.slack = -INFINITY;
    a.pass = a.slack >= -tol;
    assertions.push_back(a);
}

void CertificateReport::holds(const std::string& name, bool ok) {
    assertions.push_back({name, ok ? 1.0 : 0.0, 1.0, ok ? 0.0 : -1.0, 0.0, ok});
}

bool CertificateReport::pass() const {
    for (const auto& a : assertions)
        if (!a.pass) return false;
    return true;
}

const Assertion* CertificateReport::find(const std::string& name) const {
    for (const auto& a : assertions)
        if (a.name == name) return &a;
    return nullptr;
}

namespace {

uint64_t fnv(uint64_t h, const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::string digest(const std::vector<double>& v) {
    return hex(fnv(14695981039346656037ull, v.data(), v.size() * sizeof(double)));
}

std::string digest(const ScalarField& u) {
    uint64_t h = fnv(14695981039346656037ull, u.values.data(), u.values.size() * sizeof(double));
    h = fnv(h, u.mask.data(), u.mask.size());
    return hex(h);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "INF";
    if (std::isinf(v)) return v > 0 ? "INF" : "-INF";
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

nlohmann::json num(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

}  // namespace

nlohmann::json to_json(const CertificateReport& r) {
    nlohmann::json j;
    j["theorem"] = r.theorem;
    j["instance"] = r.instance;
    j["digest"] = r.digest;
    j["seed"] = r.seed;
    if (r.exploratory) j["exploratory"] = true;
    else j["pass"] = r.pass();
    j["assertions"] = nlohmann::json::array();
    for (const auto& a : r.assertions)
        j["assertions"].push_back({{"name", a.name},
                                   {"lhs", num(a.lhs)},
                                   {"rhs", num(a.rhs)},
                                   {"slack", num(a.slack)},
                                   {"tol", num(a.tol)},
                                   {"pass", a.pass}});
    j["constants"] = nlohmann::json::object();
    for (const auto& [k, v] : r.constants) j["constants"][k] = num(v);
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

void write_csv_header(std::ostream& os) {
    os << "# torapot-report v1\n";
    os << "theorem,instance,seed,kind,name,lhs,rhs,slack,tol,pass\n";
}

void write_csv(std::ostream& os, const CertificateReport& r) {
    const std::string head = r.theorem + "," + r.instance + "," + std::to_string(r.seed) + ",";
    for (const auto& a : r.assertions)
        os << head << "assert," << a.name << "," << format_number(a.lhs) << "," << format_number(a.rhs) << ","
           << format_number(a.slack) << "," << format_number(a.tol) << "," << (a.pass ? "1" : "0") << "\n";
    // constants fill lhs and rhs so every numeric column stays numeric
    const char* kind = r.exploratory ? "explore," : "const,";
    for (const auto& [k, v] : r.constants)
        os << head << kind << k << "," << format_number(v) << "," << format_number(v) << ",0,0,1\n";
}

}  // namespace torapot
