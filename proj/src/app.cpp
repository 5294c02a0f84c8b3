#include "torapot/app.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <thread>

#include "torapot/corpus.hpp"
#include "torapot/functionals.hpp"
#include "torapot/harness.hpp"
#include "torapot/ma.hpp"

namespace torapot {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string> kTheorems{
    "envelope_oracle",  "ma_exactness",     "plurifine_locality", "energy_increases",
    "energy_union",     "moser_trudinger",  "mass_profile",       "entropy_inclusion",
    "entropy_all_time", "sub_entropy",      "no_entropy",
};

const std::vector<std::string> kDemos{"no-ent", "mt", "inclusion", "weight-construct", "perturb"};

namespace {

uint64_t mix(uint64_t seed, uint64_t a, uint64_t b = 0) {
    // splitmix64 finalizer over the combined key
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Interval parse_interval(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(what + " must be a pair [lo, hi]");
    Interval iv{j[0].get<double>(), j[1].get<double>()};
    if (!(iv.hi > iv.lo)) throw ConfigError(what + " must satisfy lo < hi");
    return iv;
}

ContextSpec parse_context(const json& j) {
    ContextSpec c;
    c.dim = j.value("dim", 1);
    if (c.dim != 1 && c.dim != 2) throw ConfigError("unsupported dimension: " + std::to_string(c.dim));
    c.resolution = j.value("resolution", c.dim == 1 ? 201 : 17);
    if (c.resolution < 3) throw ConfigError("resolution must be at least 3");
    if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        if (c.dim == 1 && b.size() == 2 && b[0].is_number()) {
            c.bounds = {parse_interval(b, "bounds")};
        } else {
            if (!b.is_array() || int(b.size()) != c.dim) throw ConfigError("bounds must have one interval per axis");
            for (const auto& iv : b) c.bounds.push_back(parse_interval(iv, "bounds"));
        }
    } else {
        c.bounds.assign(c.dim, Interval{-1, 1});
    }
    try {
        if (!j.contains("gradient_body")) {
            c.body = c.dim == 1 ? Body::interval(-1, 1) : Body::box(-1, 1, -1, 1);
        } else {
            const auto& g = j.at("gradient_body");
            if (c.dim == 1) {
                const auto iv = parse_interval(g.is_array() && g.size() == 1 ? g[0] : g, "gradient_body");
                c.body = Body::interval(iv.lo, iv.hi);
            } else if (g.is_object()) {
                Polygon p;
                for (const auto& v : g.at("vertices")) p.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
                c.body = Body::polygon(std::move(p));
            } else {
                if (!g.is_array() || g.size() != 2) throw ConfigError("2-D gradient_body must be two intervals or {vertices}");
                const auto x = parse_interval(g[0], "gradient_body"), y = parse_interval(g[1], "gradient_body");
                c.body = Body::box(x.lo, x.hi, y.lo, y.hi);
            }
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

void check_beta(double b) {
    if (!(b > 1)) throw ConfigError("β must exceed 1 (got " + format_number(b) + ")");
}

template <class T>
std::vector<T> number_list(const json& j, const std::string& what) {
    if (j.is_number()) return {j.get<T>()};
    if (!j.is_array()) throw ConfigError(what + " must be a number or a list");
    std::vector<T> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(what + " must contain numbers");
        out.push_back(v.get<T>());
    }
    return out;
}

// Runs tasks on a bounded pool and concatenates results in task order.
template <class R>
std::vector<R> run_tasks(const std::vector<std::function<std::vector<R>()>>& tasks, int jobs) {
    std::vector<std::vector<R>> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next++) < tasks.size();) {
            try {
                results[i] = tasks[i]();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const size_t n = std::min<size_t>(std::max(1, jobs), tasks.size());
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t k = 0; k < n; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::vector<R> out;
    for (size_t i = 0; i < tasks.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        for (auto& r : results[i]) out.push_back(std::move(r));
    }
    return out;
}

using Task = std::function<std::vector<CertificateReport>()>;

CertificateReport tagged(CertificateReport r, const std::string& instance) {
    r.instance = instance;
    return r;
}

ScalarField smooth_potential(const ModelContext& ctx) {
    if (ctx.dim() == 1) return make_field(ctx.domain, [](double x, double) { return 0.3 * x * x + 0.1 * x; });
    return make_field(ctx.domain, [](double x, double y) { return 0.3 * x * x + 0.2 * y * y + 0.05 * x * y; });
}

// Smallest axis support of the body. The fixed test potentials have gradients in
// [-1, 1]^n, so scaling by this keeps them admissible on box bodies.
double body_scale(const Body& b) {
    if (b.dim == 1) return std::min(-b.lo, b.hi);
    return std::min({b.support(1, 0), b.support(-1, 0), b.support(0, 1), b.support(0, -1)});
}

ScalarField scaled(const ScalarField& u, double s) {
    auto v = u;
    for (double& x : v.values) x *= s;
    return v;
}

Weight resolve_weight(const WeightSpec& w, const ModelContext& ctx, const ScalarField& u, const ScalarField& phi) {
    if (!w.constructed) return w.chi;
    const auto mu = ma_measure(ctx, u);
    return normalize_weight(construct_weight(ctx, u, phi, mu).chi);
}

std::vector<double> random_obstacle(const GridDomain& d, Rng& rng) {
    const double amp = rng.uniform(0.1, 1), freq = rng.uniform(1, 12), phase = rng.uniform(0, 6.3);
    const double quad = rng.uniform(-0.5, 0.5), tilt = rng.uniform(-2, 2);
    std::vector<double> f(d.size());
    for (size_t i = 0; i < f.size(); ++i) {
        const double x = d.coord(i, 0);
        f[i] = amp * std::sin(freq * x + phase) + quad * x * x + tilt * x + rng.uniform(-0.05, 0.05);
    }
    return f;
}

std::vector<Task> verify_tasks(const Config& cfg, const std::vector<ModelContext>& ctxs,
                               const std::vector<SkodaSurrogate>& skodas,
                               const std::vector<std::vector<CorpusItem>>& corpora) {
    std::vector<Task> tasks;
    for (size_t ci = 0; ci < ctxs.size(); ++ci) {
        const auto& ctx = ctxs[ci];
        const auto& sk = skodas[ci];
        const auto& corpus = corpora[ci];
        const std::string tag = cfg.contexts[ci].tag();
        const int n = ctx.dim();

        if (cfg.wants("envelope_oracle") && n == 1)
            tasks.push_back([&, ci, tag] {
                std::vector<CertificateReport> out;
                Rng rng(mix(cfg.seed, ci, 1));
                for (int k = 0; k < cfg.envelope_instances; ++k) {
                    ScalarField f(ctx.domain, random_obstacle(ctx.domain, rng));
                    out.push_back(tagged(envelope_oracle_check(ctx, f), tag + "/random-" + std::to_string(k)));
                }
                return out;
            });

        if (cfg.wants("ma_exactness"))
            tasks.push_back([&, tag, n] {
                std::vector<CertificateReport> out;
                if (n == 1) {
                    for (const auto& it : corpus) out.push_back(tagged(ma_exactness_check(ctx, it.u), tag + "/" + it.name));
                } else {
                    out.push_back(ma_quadratic_mass_check(ctx.domain.resolution[0]));
                }
                return out;
            });

        if (cfg.wants("plurifine_locality"))
            tasks.push_back([&, ci, tag] {
                std::vector<CertificateReport> out;
                Rng rng(mix(cfg.seed, ci, 2));
                const auto zero = ctx.zero();
                for (int k = 0; k < cfg.plurifine_triples; ++k) {
                    const auto u = normalize_sup(random_admissible(ctx, rng, 8, k % 2 ? 0.1 : 0.0), zero);
                    const auto phi = shift(normalize_sup(random_admissible(ctx, rng, 4), zero), 1);
                    const double j = rng.uniform(0.05, 1.5);
                    out.push_back(tagged(plurifine_check(ctx, u, phi, j), tag + "/triple-" + std::to_string(k)));
                }
                return out;
            });

        for (size_t k = 0; k < corpus.size(); ++k) {
            const std::string inst = tag + "/" + corpus[k].name;
            tasks.push_back([&, k, inst] {
                std::vector<CertificateReport> out;
                const auto phi = ctx.zero();
                const auto u = normalize_sup(corpus[k].u, phi);
                std::vector<Weight> chis;
                for (const auto& w : cfg.weights) chis.push_back(normalize_weight(resolve_weight(w, ctx, u, phi)));
                auto label = [&](size_t w) { return inst + "/chi=" + cfg.weights[w].label(); };
                if (cfg.wants("energy_increases")) {
                    auto rs = energy_increase_check(ctx, u, phi, chis);
                    for (size_t w = 0; w < rs.size(); ++w) out.push_back(tagged(rs[w], label(w)));
                }
                if (cfg.wants("energy_union")) out.push_back(tagged(weight_construct_check(ctx, u, phi), inst));
                for (size_t w = 0; w < chis.size(); ++w) {
                    if (cfg.wants("moser_trudinger"))
                        for (double beta : cfg.betas)
                            out.push_back(tagged(mt_certificate(ctx, u, phi, chis[w], beta, sk),
                                                 label(w) + "/beta=" + format_number(beta)));
                    if (cfg.wants("mass_profile"))
                        out.push_back(tagged(mass_profile_bound(ctx, u, phi, chis[w], sk), label(w)));
                }
                return out;
            });
        }

        if (cfg.wants("moser_trudinger"))
            tasks.push_back([&, tag, n] {
                CertificateReport r;
                r.theorem = "tau2_closed_form";
                r.instance = tag;
                for (const auto& w : cfg.weights) {
                    if (w.constructed || w.chi.kind != Weight::Kind::power) continue;
                    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                        const double closed = tau2_at_one(w.chi, n, a), numeric = tau2_at_one_numeric(w.chi, n, a);
                        r.le(w.label() + "/a=" + format_number(a), std::fabs(closed - numeric), 1e-8);
                    }
                }
                return std::vector<CertificateReport>{r};
            });

        if (cfg.wants("entropy_inclusion"))
            tasks.push_back([&, tag, n] {
                std::vector<CertificateReport> out;
                if (n == 1) {
                    const double s = body_scale(ctx.body);
                    const std::vector<int> res{101, 201, 401};
                    const Interval iv = ctx.domain.bounds[0];
                    const double c = 0.5 * (iv.lo + iv.hi), half = 0.5 * iv.length();
                    out.push_back(tagged(inclusion_refinement_1d(ctx.body, iv, [=](double x) {
                        const double y = (x - c) / half;
                        return 0.4 * s * half * y * y;
                    }, res), tag + "/quadratic"));
                    out.push_back(tagged(inclusion_refinement_1d(ctx.body, iv, [=](double x) {
                        const double y = (x - c) / half;
                        return 0.3 * s * half * std::log(std::cosh(2 * y));
                    }, res), tag + "/logcosh"));
                    return out;
                }
                if (!ctx.body.is_box() || ctx.domain.resolution[0] != ctx.domain.resolution[1]) return out;
                const auto fam = entropy_family_2d(ctx, cfg.entropy_budget);
                const auto phi = ctx.zero();
                for (const auto& s : fam) out.push_back(tagged(inclusion_check(ctx, s.u, phi, sk), tag + "/" + s.name));
                CertificateReport mono;
                mono.theorem = "entropy_inclusion";
                mono.instance = tag + "/budget-monotone";
                double prev = 0;
                for (double B : {0.25, 0.5, 1.0, 2.0, cfg.entropy_budget}) {
                    const double e = budget_sup_energy(ctx, fam, B);
                    mono.ge("sup_Ep_nondecreasing@B=" + format_number(B), e, prev);
                    mono.constant("sup_Ep@B=" + format_number(B), e);
                    prev = e;
                }
                mono.constant("samples", fam.size());
                out.push_back(mono);
                return out;
            });

        if (cfg.wants("entropy_all_time") && ctx.body.is_box())
            tasks.push_back([&, ci, tag] {
                std::vector<CertificateReport> out;
                const double s = body_scale(ctx.body);
                const auto u = scaled(smooth_potential(ctx), s);
                out.push_back(tagged(perturbation_scan(ctx, u, cfg.perturbation_t), tag + "/smooth"));
                if (ctx.dim() == 1) {
                    for (const auto& it : corpus) {
                        if (it.name.rfind("softmax", 0) != 0) continue;
                        if (!entropy(ctx, it.u).is_finite()) continue;
                        out.push_back(tagged(perturbation_scan(ctx, it.u, cfg.perturbation_t), tag + "/" + it.name));
                    }
                    return out;
                }
                // 2-D: the expansion is exact only while u + t r keeps the power
                // diagram of u, which holds for quadratics and separable sums
                Rng rng(mix(cfg.seed, ci, 9));
                for (int k = 0; k < 5; ++k) {
                    const double a = rng.uniform(0.1, 0.4), b = rng.uniform(0.1, 0.4);
                    const double c = rng.uniform(-1, 1) * (0.5 - std::max(a, b)), lx = rng.uniform(-0.05, 0.05);
                    const auto q = make_field(ctx.domain, [&](double x, double y) {
                        return s * (a * x * x + b * y * y + c * x * y + lx * x);
                    });
                    out.push_back(tagged(perturbation_scan(ctx, q, cfg.perturbation_t), tag + "/quadratic-" + std::to_string(k)));
                    const double w1 = rng.uniform(1, 4), w2 = rng.uniform(1, 4);
                    const auto sep = make_field(ctx.domain, [&](double x, double y) {
                        return s * 0.4 * (std::log(std::cosh(w1 * x)) / w1 + std::log(std::cosh(w2 * y)) / w2);
                    });
                    out.push_back(tagged(perturbation_scan(ctx, sep, cfg.perturbation_t), tag + "/separable-" + std::to_string(k)));
                }
                return out;
            });

        if (cfg.wants("no_entropy") && n == 1)
            tasks.push_back([&] { return std::vector<CertificateReport>{atomic_entropy_demo(ctx)}; });
    }

    if (cfg.wants("sub_entropy"))
        tasks.push_back([&] {
            std::vector<CertificateReport> out;
            Rng rng(mix(cfg.seed, 1000, 3));
            for (int k = 0; k < cfg.subentropy_triples; ++k) {
                auto [m1, m2, m3] = random_measure_triple(rng, 8 + k % 40);
                out.push_back(tagged(subentropy_check(m1, m2, m3, mix(cfg.seed, k, 4)), "triple-" + std::to_string(k)));
            }
            return out;
        });
    return tasks;
}

}  // namespace

std::string ContextSpec::tag() const { return "d" + std::to_string(dim) + "-r" + std::to_string(resolution); }

ModelContext ContextSpec::build() const { return make_context(build_domain(dim, bounds, resolution), body); }

std::string WeightSpec::label() const { return constructed ? "constructed" : chi.label(); }

bool Config::wants(const std::string& theorem) const {
    return certificates.empty() || std::find(certificates.begin(), certificates.end(), theorem) != certificates.end();
}

Config parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    Config c;
    try {
        c.seed = j.value("seed", c.seed);
        c.output_dir = j.value("output_dir", c.output_dir);
        if (j.contains("context")) c.contexts.push_back(parse_context(j.at("context")));
        if (j.contains("contexts"))
            for (const auto& cj : j.at("contexts")) c.contexts.push_back(parse_context(cj));
        if (c.contexts.empty()) throw ConfigError("config needs a context");
        if (j.contains("families"))
            for (const auto& f : j.at("families")) {
                const auto kind = f.value("kind", std::string("fuzz"));
                if (kind != "fuzz") throw ConfigError("unknown family kind: " + kind);
                c.fuzz_count = f.value("count", c.fuzz_count);
            }
        if (j.contains("weights")) {
            for (const auto& w : j.at("weights")) {
                WeightSpec s;
                if (w.is_object() && w.value("kind", std::string()) == "constructed") {
                    s.constructed = true;
                } else {
                    s.chi = normalize_weight(weight_from_json(w));
                }
                c.weights.push_back(s);
            }
        } else {
            c.weights = {{false, weight_power(1)}, {false, weight_power(2)}, {true, {}}};
        }
        if (j.contains("betas")) c.betas = number_list<double>(j.at("betas"), "betas");
        for (double b : c.betas) check_beta(b);
        if (j.contains("certificates")) {
            c.certificates = j.at("certificates").get<std::vector<std::string>>();
            for (const auto& t : c.certificates)
                if (std::find(kTheorems.begin(), kTheorems.end(), t) == kTheorems.end())
                    throw ConfigError("unknown certificate: " + t);
        }
        if (j.contains("skoda")) c.skoda_probes = j.at("skoda").value("probes", c.skoda_probes);
        if (j.contains("perturbation")) c.perturbation_t = number_list<double>(j.at("perturbation").at("t"), "perturbation.t");
        for (double t : c.perturbation_t)
            if (!(t >= 0)) throw ConfigError("perturbation times must be nonnegative");
        c.entropy_budget = j.value("entropy_budget", c.entropy_budget);
        c.envelope_instances = j.value("envelope_instances", c.envelope_instances);
        c.plurifine_triples = j.value("plurifine_triples", c.plurifine_triples);
        c.subentropy_triples = j.value("subentropy_triples", c.subentropy_triples);
        c.experiment_count = j.value("experiment_count", c.experiment_count);
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            c.sweep.dim = s.value("dim", 1);
            if (c.sweep.dim != 1 && c.sweep.dim != 2) throw ConfigError("unsupported dimension: " + std::to_string(c.sweep.dim));
            if (s.contains("resolution")) c.sweep.resolution = number_list<int>(s.at("resolution"), "sweep.resolution");
            if (s.contains("p")) c.sweep.p = number_list<double>(s.at("p"), "sweep.p");
            if (s.contains("beta")) c.sweep.beta = number_list<double>(s.at("beta"), "sweep.beta");
            if (s.contains("t")) c.sweep.t = number_list<double>(s.at("t"), "sweep.t");
            for (double b : c.sweep.beta) check_beta(b);
            for (int r : c.sweep.resolution)
                if (r < 3) throw ConfigError("sweep resolution must be at least 3");
        }
        if (c.skoda_probes < 1 || c.fuzz_count < 0) throw ConfigError("counts must be positive");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

Config load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

fs::path resolve_output_dir(const Config& cfg, const std::optional<std::string>& out) {
    if (out) return *out;
    if (const char* env = std::getenv("TORAPOT_OUT"); env && *env) return env;
    return cfg.output_dir;
}

std::vector<CertificateReport> run_verify(const Config& cfg, int jobs) {
    std::vector<ModelContext> ctxs;
    std::vector<SkodaSurrogate> skodas;
    std::vector<std::vector<CorpusItem>> corpora;
    for (size_t ci = 0; ci < cfg.contexts.size(); ++ci) {
        ctxs.push_back(cfg.contexts[ci].build());
        skodas.push_back(skoda_surrogate(ctxs.back(), mix(cfg.seed, ci, 5), cfg.skoda_probes));
        corpora.push_back(fuzz_corpus(ctxs.back(), mix(cfg.seed, ci, 6), cfg.fuzz_count));
    }
    auto out = run_tasks(verify_tasks(cfg, ctxs, skodas, corpora), jobs);
    for (auto& r : out) r.seed = cfg.seed;
    return out;
}

std::vector<CertificateReport> run_experiment(const Config& cfg, int jobs) {
    std::vector<std::function<std::vector<CertificateReport>()>> tasks;
    for (size_t ci = 0; ci < cfg.contexts.size(); ++ci)
        tasks.push_back([&, ci] {
            auto r = stability_experiment(cfg.contexts[ci].build(), mix(cfg.seed, ci, 7), cfg.experiment_count);
            r.instance = cfg.contexts[ci].tag();
            r.seed = cfg.seed;
            return std::vector<CertificateReport>{r};
        });
    return run_tasks(tasks, jobs);
}

std::vector<SweepRow> run_sweep(const Config& cfg, int jobs) {
    const auto& sw = cfg.sweep;
    std::vector<std::function<std::vector<SweepRow>()>> tasks;
    for (int res : sw.resolution)
        tasks.push_back([&, res] {
            const int n = sw.dim;
            auto ctx = n == 1 ? make_context(build_domain(1, {{-1, 1}}, res), Body::interval(-1, 1))
                              : make_context(build_domain(2, {{-1, 1}, {-1, 1}}, res), Body::box(-1, 1, -1, 1));
            const auto phi = ctx.zero();
            const auto u = normalize_sup(smooth_potential(ctx), phi);
            const auto sk = skoda_surrogate(ctx, mix(cfg.seed, res, 8), cfg.skoda_probes);
            const double m = mass(ctx, phi);
            const double ent = entropy(ctx, u).as_double();
            const auto basis = perturbation_basis(ctx, u);
            const auto& rho = ctx.reference_density.weights;
            std::vector<SweepRow> rows;
            for (double p : sw.p) {
                const auto chi = weight_power(p);
                const double E = energy_chi(ctx, u, phi, chi).value;
                const double profile = mass_profile_bound(ctx, u, phi, chi, sk).constants.front().second;
                for (double beta : sw.beta) {
                    const double a = std::pow(m / (beta * E), 1.0 / n);
                    const double tau = a < 1 ? tau2_at_one(chi, n, a) : INFINITY;
                    for (double t : sw.t) {
                        const auto pm = perturbed_ma(ctx, u, t, basis);
                        double lbar = 0;
                        for (size_t i = 0; i < rho.size(); ++i)
                            if (pm.s_direct[i] > 1) lbar += rho[i] * pm.s_direct[i] * std::log(pm.s_direct[i]);
                        rows.push_back({n, res, p, beta, t, E, ent, tau, profile, sk.S(n), lbar});
                    }
                }
            }
            return rows;
        });
    return run_tasks(tasks, jobs);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "# torapot-report v1\n";
    os << "dim,resolution,p,beta,t,energy,entropy,tau2_1,profile_integral,S,Lbar\n";
    for (const auto& r : rows)
        os << r.dim << ',' << r.resolution << ',' << format_number(r.p) << ',' << format_number(r.beta) << ','
           << format_number(r.t) << ',' << format_number(r.energy) << ',' << format_number(r.entropy) << ','
           << format_number(r.tau2) << ',' << format_number(r.profile) << ',' << format_number(r.S) << ','
           << format_number(r.lbar) << '\n';
}

void write_reports(const fs::path& dir, const std::string& stem, const Config& cfg,
                   const std::vector<CertificateReport>& reports) {
    fs::create_directories(dir);
    json j;
    j["format"] = "torapot-report v1";
    j["seed"] = cfg.seed;
    size_t failed = 0;
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
        if (!r.exploratory && !r.pass()) ++failed;
    }
    j["reports"] = std::move(arr);
    j["summary"] = {{"reports", reports.size()}, {"failed", failed}};
    std::ofstream(dir / (stem + ".json")) << j.dump(2) << '\n';
    std::ofstream csv(dir / (stem + ".csv"));
    write_csv_header(csv);
    for (const auto& r : reports) write_csv(csv, r);
}

void print_summary(std::ostream& os, const std::vector<CertificateReport>& reports) {
    std::map<std::string, std::pair<int, int>> counts;
    std::map<std::string, bool> exploratory;
    std::vector<std::string> order;
    for (const auto& r : reports) {
        if (!counts.count(r.theorem)) order.push_back(r.theorem);
        auto& c = counts[r.theorem];
        ++c.second;
        if (r.pass()) ++c.first;
        exploratory[r.theorem] = r.exploratory;
    }
    for (const auto& t : order) {
        os << std::left << std::setw(22) << t;
        if (exploratory[t]) os << counts[t].second << " exploratory\n";
        else os << counts[t].first << "/" << counts[t].second << " pass\n";
    }
    for (const auto& r : reports)
        if (!r.exploratory && !r.pass())
            for (const auto& a : r.assertions)
                if (!a.pass)
                    os << "FAIL " << r.theorem << " " << r.instance << " " << a.name << ": " << format_number(a.lhs)
                       << " <= " << format_number(a.rhs) << " (tol " << format_number(a.tol) << ")\n";
}

namespace {

void print_report(std::ostream& os, const CertificateReport& r) {
    os << r.theorem << (r.instance.empty() ? "" : " [" + r.instance + "]") << ": " << (r.pass() ? "PASS" : "FAIL")
       << "\n";
    for (const auto& a : r.assertions)
        os << "  " << (a.pass ? "ok   " : "FAIL ") << a.name << ": " << format_number(a.lhs)
           << " <= " << format_number(a.rhs) << "  slack " << format_number(a.slack) << "\n";
    for (const auto& [k, v] : r.constants) os << "  " << k << " = " << format_number(v) << "\n";
    for (const auto& n : r.notes) os << "  " << n << "\n";
}

}  // namespace

bool run_demo(const std::string& name, uint64_t seed, std::ostream& os) {
    const auto c1 = make_context(build_domain(1, {{-1, 1}}, 201), Body::interval(-1, 1));
    const auto c2 = make_context(build_domain(2, {{-1, 1}, {-1, 1}}, 17), Body::box(-1, 1, -1, 1));
    if (name == "no-ent") {
        const auto r = atomic_entropy_demo(c1);
        os << r.notes.front() << "\n";
        print_report(os, r);
        return r.pass();
    }
    if (name == "mt") {
        const auto sk = skoda_surrogate(c1, seed, 1000);
        const auto phi = c1.zero();
        bool ok = true;
        for (const auto& it : fuzz_corpus(c1, seed, 2)) {
            const auto r = tagged(mt_certificate(c1, normalize_sup(it.u, phi), phi, weight_power(2), 2, sk), it.name);
            print_report(os, r);
            ok = ok && r.pass();
        }
        return ok;
    }
    if (name == "inclusion") {
        const auto sk = skoda_surrogate(c2, seed, 1000);
        bool ok = true;
        for (const auto& s : entropy_family_2d(c2, 5)) {
            const auto r = tagged(inclusion_check(c2, s.u, c2.zero(), sk), s.name);
            print_report(os, r);
            ok = ok && r.pass();
        }
        return ok;
    }
    if (name == "weight-construct") {
        const auto phi = c1.zero();
        const auto u = normalize_sup(fuzz_corpus(c1, seed, 1).front().u, phi);
        const auto law = gap_law_with_tail(c1, u, phi);
        const auto cw = construct_weight_from_gaps(law.gaps, law.masses);
        os << "r,k,t_k,h\n";
        for (size_t r = 0; r < cw.t.size(); ++r)
            os << r << ',' << format_number(cw.k[r]) << ',' << format_number(cw.t[r]) << ','
               << (r < cw.h.size() ? format_number(cw.h[r]) : std::string("-")) << "\n";
        os << "K = " << format_number(cw.K) << ", sum_{k<K} k^-2 = " << format_number(cw.series)
           << " (limit pi^2/6 = " << format_number(M_PI * M_PI / 6) << ")\n";
        const auto r = weight_construct_check(c1, u, phi);
        print_report(os, r);
        return r.pass();
    }
    if (name == "perturb") {
        const auto c = make_context(build_domain(2, {{-1, 1}, {-1, 1}}, 15), Body::box(-1, 1, -1, 1));
        const auto r = perturbation_scan(c, smooth_potential(c), {0, 0.25, 1, 4});
        print_report(os, r);
        return r.pass();
    }
    throw ConfigError("unknown demo: " + name);
}

}  // namespace torapot
