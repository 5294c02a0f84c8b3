#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "torapot/context.hpp"
#include "torapot/report.hpp"
#include "torapot/weight.hpp"

namespace torapot {

// Anything wrong with the configuration; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContextSpec {
    int dim = 1;
    std::vector<Interval> bounds;
    int resolution = 201;
    Body body;
    std::string tag() const;
    ModelContext build() const;
};

struct WeightSpec {
    bool constructed = false;  // built per potential from its own gap law
    Weight chi;
    std::string label() const;
};

struct SweepSpec {
    int dim = 1;
    std::vector<int> resolution{101, 201, 401};
    std::vector<double> p{1, 2};
    std::vector<double> beta{2};
    std::vector<double> t{0};
};

struct Config {
    uint64_t seed = 1;
    std::string output_dir = "torapot-out";
    std::vector<ContextSpec> contexts;
    int fuzz_count = 20;
    std::vector<WeightSpec> weights;
    std::vector<double> betas{1.5, 2, 4};
    std::vector<std::string> certificates;  // empty: all
    int skoda_probes = 1000;
    std::vector<double> perturbation_t{0, 0.25, 1, 4};
    double entropy_budget = 5;
    int envelope_instances = 50;
    int plurifine_triples = 20;
    int subentropy_triples = 100;
    int experiment_count = 8;
    SweepSpec sweep;

    bool wants(const std::string& theorem) const;
};

extern const std::vector<std::string> kTheorems;

Config parse_config(const nlohmann::json& j);
Config load_config(const std::filesystem::path& path);

// --out, then TORAPOT_OUT, then the config.
std::filesystem::path resolve_output_dir(const Config& cfg, const std::optional<std::string>& out);

std::vector<CertificateReport> run_verify(const Config& cfg, int jobs);
std::vector<CertificateReport> run_experiment(const Config& cfg, int jobs);

struct SweepRow {
    int dim = 1, resolution = 0;
    double p = 0, beta = 0, t = 0;
    double energy = 0, entropy = 0, tau2 = 0, profile = 0, S = 0, lbar = 0;
};
std::vector<SweepRow> run_sweep(const Config& cfg, int jobs);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

void write_reports(const std::filesystem::path& dir, const std::string& stem, const Config& cfg,
                   const std::vector<CertificateReport>& reports);
// One line per theorem with pass counts.
void print_summary(std::ostream& os, const std::vector<CertificateReport>& reports);

// Runs a named demo and prints a summary; returns whether its assertions hold.
bool run_demo(const std::string& name, uint64_t seed, std::ostream& os);
extern const std::vector<std::string> kDemos;

}  // namespace torapot
