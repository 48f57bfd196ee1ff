// Acceptance suite: one pass/fail line per criterion. Select criteria with
// --criterion=1,2,... (default: all). Exit 0 iff every selected criterion
// passes.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <thread>
#include <vector>

#include "mvns/experiments.hpp"
#include "mvns/field_sampling.hpp"
#include "mvns/io.hpp"
#include "mvns/runner.hpp"

using namespace mvns;

namespace {

int g_workers = 2;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

GridSpec grid_n(int n) {
    GridSpec g;
    g.modes_per_axis = n;
    return g;
}

ModelParams default_params(int noise_modes = 8) {
    ModelParams p;
    p.nu = 2.5;
    p.epsilon = 0.5;
    p.kappa = {0.3, 0.1};
    p.noise_modes = noise_modes;
    p.drift.phi1 = {0.01, 0.0};
    p.drift.psi1 = {0.002, 0.0};
    p.drift.phi2 = p.drift.phi1;
    p.drift.psi2 = p.drift.psi1;
    p.diffusion = DiffusionSpec::geometric(noise_modes, 0.03, 0.03,
                                           1.0 / std::numbers::sqrt2);
    return p;
}

Symbol default_symbol(const GridSpec& g) {
    Symbol sym;
    sym.g.terms.push_back({1.0, 0.0, pattern_field(g, "tg", 0.3)});
    sym.h.terms.push_back({1.0, 0.0, pattern_field(g, "tg", 0.15)});
    sym.h.terms.push_back({std::numbers::sqrt2, 0.0, pattern_field(g, "shear_x", 0.15)});
    return sym;
}

ExperimentInputs default_inputs(int n, int seeds, int particles, double dt) {
    ExperimentInputs in;
    in.grid = grid_n(n);
    in.params = default_params();
    in.symbol = default_symbol(in.grid);
    in.ledger = constant_ledger(in.params, in.symbol, in.grid);
    in.sizing.seeds = seeds;
    in.sizing.particles = particles;
    in.sizing.dt = dt;
    in.sizing.workers = g_workers;
    return in;
}

void parallel_chunks(int n, const std::function<void(int, int)>& fn) {
    const int w = std::max(1, g_workers);
    std::vector<std::thread> pool;
    for (int t = 0; t < w; ++t) {
        const int lo = static_cast<int>(static_cast<long long>(n) * t / w);
        const int hi = static_cast<int>(static_cast<long long>(n) * (t + 1) / w);
        pool.emplace_back([=] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

// 1. Operator identities at N=8 over 1e4 random fields.
Outcome criterion_1() {
    Outcome out;
    const GridSpec g = grid_n(8);
    const int n_fields = 10000;
    const int n_triples = n_fields / 3;

    std::atomic<uint64_t> worst_bits_anti{0}, worst_bits_cancel{0};
    std::atomic<uint64_t> worst_leray{0}, worst_adj{0}, worst_stokes{0};
    auto update_max = [](std::atomic<uint64_t>& slot, double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, 8);
        uint64_t cur = slot.load();
        while (bits > cur && !slot.compare_exchange_weak(cur, bits)) {
        }
    };
    auto as_double = [](const std::atomic<uint64_t>& slot) {
        const uint64_t bits = slot.load();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    };

    parallel_chunks(n_triples, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            const auto u = random_divfree_field(g, 4242, StreamTag::calibration, 3u * i);
            const auto v = random_divfree_field(g, 4242, StreamTag::calibration, 3u * i + 1);
            const auto w = random_divfree_field(g, 4242, StreamTag::calibration, 3u * i + 2);

            const double buvw = trilinear_b(u, v, w);
            const double buwv = trilinear_b(u, w, v);
            const double buvv = trilinear_b(u, v, v);
            const double scale = std::abs(buvw) + std::abs(buwv) + 1e-300;
            update_max(worst_bits_anti, std::abs(buvw + buwv) / scale);
            const double nv = std::sqrt(norms(u).h_norm_sq * norms(v).v_norm_sq) + 1e-300;
            update_max(worst_bits_cancel, std::abs(buvv) / (nv * nv + 1e-300));

            // Leray: idempotence and self-adjointness on raw hermitian data
            SpectralField pu = u, pv = v;
            pu.axpy(0.37, stokes_apply(v));  // a non-solenoidal hermitian mix
            SpectralField ppu = pu;
            leray_project_inplace(ppu);
            SpectralField pppu = ppu;
            leray_project_inplace(pppu);
            update_max(worst_leray, std::sqrt(norms(pppu - ppu).h_norm_sq /
                                              (norms(ppu).h_norm_sq + 1e-300)));

            SpectralField x = pu, y = w;
            SpectralField px = x, py = y;
            leray_project_inplace(px);
            leray_project_inplace(py);
            const double nx = std::sqrt(norms(x).h_norm_sq * norms(y).h_norm_sq) + 1e-300;
            update_max(worst_adj, std::abs(inner_h(px, y) - inner_h(x, py)) / nx);

            const auto nu_ = norms(u);
            update_max(worst_stokes, std::abs(inner_h(stokes_apply(u), u) - nu_.v_norm_sq) /
                                         (nu_.v_norm_sq + 1e-300));
        }
    });

    out.require(as_double(worst_bits_cancel) <= 1e-10, "b(u,v,v) != 0");
    out.require(as_double(worst_bits_anti) <= 1e-10, "antisymmetry");
    out.require(as_double(worst_leray) <= 1e-12, "leray idempotence");
    out.require(as_double(worst_adj) <= 1e-12, "leray self-adjointness");
    out.require(as_double(worst_stokes) <= 1e-12, "(Au,u) = |u|_V^2");
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "max ratios: b(u,v,v)=%.2e antisym=%.2e leray=%.2e adj=%.2e stokes=%.2e",
                  as_double(worst_bits_cancel), as_double(worst_bits_anti),
                  as_double(worst_leray), as_double(worst_adj), as_double(worst_stokes));
    if (out.pass) out.detail = buf;
    return out;
}

// 2. Sampled assumption suite, 1e4 draws.
Outcome criterion_2() {
    Outcome out;
    const GridSpec g = grid_n(8);
    const auto rep = check_assumptions(default_params(), default_symbol(g), g, 10000, 77);
    for (const auto& c : rep.checks) {
        out.require(c.pass, c.id + " ratio " + std::to_string(c.max_ratio));
    }
    if (out.pass) {
        double worst = 0.0;
        for (const auto& c : rep.checks) worst = std::max(worst, c.max_ratio);
        out.detail = "all ratios <= 1+1e-9 (max " + std::to_string(worst) + ")";
    }
    return out;
}

// 3. Metric suite: exact assignment vs permutations, d_P axioms, closed form.
Outcome criterion_3() {
    Outcome out;
    const GridSpec g = grid_n(3);
    auto cloud = [&](int m, uint64_t seed, uint32_t base, double scale) {
        std::vector<SpectralField> atoms;
        for (int i = 0; i < m; ++i) {
            auto f = random_divfree_field(g, seed, StreamTag::metric_test, base + i);
            f.scale(scale);
            atoms.push_back(std::move(f));
        }
        return EmpiricalMeasure(std::move(atoms));
    };

    // W2 against the brute-force permutation minimum for M = 2..6
    for (int m = 2; m <= 6; ++m) {
        for (int rep = 0; rep < 6; ++rep) {
            const auto a = cloud(m, 300 + m, 100 * rep, 1.0);
            const auto b = cloud(m, 400 + m, 100 * rep + 50, 1.0);
            const double got = wasserstein2(a, b);
            std::vector<double> cost(static_cast<size_t>(m) * m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    cost[static_cast<size_t>(i) * m + j] =
                        norms(a.atoms()[i] - b.atoms()[j]).h_norm_sq;
            std::vector<int> perm(m);
            for (int i = 0; i < m; ++i) perm[i] = i;
            double best = std::numeric_limits<double>::infinity();
            do {
                double tot = 0.0;
                for (int i = 0; i < m; ++i) tot += cost[static_cast<size_t>(i) * m + perm[i]];
                best = std::min(best, tot);
            } while (std::next_permutation(perm.begin(), perm.end()));
            out.require(std::abs(got - std::sqrt(best / m)) <= 1e-10,
                        "W2 vs permutations at M=" + std::to_string(m));
        }
    }

    // dirac closed form 2d/(2+d)
    for (double scale : {0.1, 1.0, 10.0}) {
        const auto x = random_divfree_field(g, 555, StreamTag::metric_test, 0);
        auto y = random_divfree_field(g, 555, StreamTag::metric_test, 1);
        y.scale(scale);
        const double d = std::sqrt(norms(x - y).h_norm_sq);
        const double got =
            dbl_metric(EmpiricalMeasure::dirac(x), EmpiricalMeasure::dirac(y));
        out.require(std::abs(got - 2.0 * d / (2.0 + d)) <= 1e-8, "dirac closed form");
    }

    // metric axioms + domination over 1e3 random triples
    const int triples = 1000;
    std::atomic<int> fails_sym{0}, fails_tri{0}, fails_dom{0};
    parallel_chunks(triples, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            const double sc = (i % 3 == 0) ? 0.3 : (i % 3 == 1 ? 1.0 : 4.0);
            const auto a = cloud(4, 700, 900u * i, sc);
            const auto b = cloud(4, 701, 900u * i + 300, sc);
            const auto c = cloud(4, 702, 900u * i + 600, sc);
            const double ab = dbl_metric(a, b), ba = dbl_metric(b, a);
            const double bc = dbl_metric(b, c), ac = dbl_metric(a, c);
            if (std::abs(ab - ba) > 1e-9) ++fails_sym;
            if (ac > ab + bc + 1e-10) ++fails_tri;
            const double w = wasserstein2(a, b);
            if (ab > std::min(2.0, w) + 1e-9) ++fails_dom;
            if (dbl_metric(a, a) > 1e-10) ++fails_sym;
        }
    });
    out.require(fails_sym == 0, "d_P symmetry/identity");
    out.require(fails_tri == 0, "d_P triangle inequality");
    out.require(fails_dom == 0, "d_P <= min(2, W2)");
    if (out.pass) out.detail = "assignment exact, axioms hold on 1000 triples";
    return out;
}

// 4. Integrator: exact implicit decay, residual halving, zero-mean residual.
Outcome criterion_4() {
    Outcome out;
    const GridSpec g = grid_n(8);
    auto qp = default_params();
    qp.epsilon = 0.0;
    qp.drift.phi1 = {0.0, 0.0};
    qp.drift.psi1 = {0.0, 0.0};
    qp.drift.phi2 = qp.drift.phi1;
    qp.drift.psi2 = qp.drift.psi1;

    // per-step decay factor exact to 1e-14
    {
        Ensemble ens;
        ens.particles.push_back(pattern_field(g, "shear_x", 1.0));
        NoiseSpec noise;
        noise.seed = 1;
        noise.wiener_modes = qp.noise_modes;
        double amp = std::sqrt(norms(ens.particles[0]).h_norm_sq);
        for (int n = 0; n < 50; ++n) {
            ens = step(ens, 0.05, Symbol{}, qp, noise);
            amp /= 1.0 + qp.nu * 0.05;
            const double now = std::sqrt(norms(ens.particles[0]).h_norm_sq);
            if (std::abs(now - amp) > 1e-14 * std::max(1.0, amp)) {
                out.require(false, "implicit decay factor at step " + std::to_string(n));
                break;
            }
        }
    }

    // eps = 0: residual halves with dt
    {
        auto p = default_params();
        p.epsilon = 0.0;
        const Symbol sym = default_symbol(g);
        Ensemble ens = initial_ensemble(g, 16, 99, 1.0);
        NoiseSpec noise;
        noise.seed = 99;
        noise.wiener_modes = p.noise_modes;
        auto resid = [&](double dt) {
            const auto tr = simulate(ens, 0.5, dt, sym, p, noise);
            return std::abs(tr.energy_residual_at(tr.stats.size() - 1));
        };
        const double r1 = resid(0.02), r2 = resid(0.01);
        const double ratio = r1 / r2;
        out.require(ratio >= 1.5 && ratio <= 2.5,
                    "residual ratio " + std::to_string(ratio));
        if (out.pass) out.detail = "decay exact; residual ratio " + std::to_string(ratio);
    }

    // eps > 0: seed-averaged residual within 3 standard errors over 64 seeds
    {
        const auto p = default_params();
        const Symbol sym = default_symbol(g);
        std::vector<Trajectory> runs(64);
        const Ensemble ens = initial_ensemble(g, 16, 17, 1.0);
        std::atomic<int> next{0};
        parallel_chunks(64, [&](int lo, int hi) {
            (void)lo;
            (void)hi;
            while (true) {
                const int s = next.fetch_add(1);
                if (s >= 64) return;
                NoiseSpec noise;
                noise.seed = 8000 + static_cast<uint64_t>(s);
                noise.wiener_modes = p.noise_modes;
                runs[s] = simulate(ens, 1.0, 1.0 / 128.0, sym, p, noise);
            }
        });
        const auto series = energy_residual(runs);
        const auto& last = series.back();
        out.require(std::abs(last.mean) <= 3.0 * last.stderr_,
                    "stochastic residual " + std::to_string(last.mean) + " vs 3se " +
                        std::to_string(3.0 * last.stderr_));
        if (out.pass)
            out.detail += "; stochastic residual " + std::to_string(last.mean) + " (se " +
                          std::to_string(last.stderr_) + ")";
    }
    return out;
}

void collect(Outcome& out, const ExperimentReport& rep) {
    for (const auto& a : rep.assertions) {
        char line[256];
        std::snprintf(line, sizeof(line), "%s: %.4g vs %.4g (se %.2g)", a.id.c_str(),
                      a.observed, a.bound, a.stderr_);
        out.require(a.pass, line);
        if (a.pass && out.detail.size() < 600) {
            if (!out.detail.empty()) out.detail += "; ";
            out.detail += line;
        }
    }
}

// 5. Second/fourth moment bounds.
Outcome criterion_5() {
    Outcome out;
    auto in = default_inputs(8, 32, 32, 1.0 / 64.0);
    collect(out, moment_experiment(in, 10.0));
    collect(out, moment4_experiment(in, 100.0));
    return out;
}

// 6. Weighted regularity bound.
Outcome criterion_6() {
    Outcome out;
    auto in = default_inputs(8, 32, 32, 1.0 / 64.0);
    collect(out, regularity_experiment(in, 10.0));
    return out;
}

// 7. Stability ladder with common random numbers.
Outcome criterion_7() {
    Outcome out;
    auto in = default_inputs(6, 8, 16, 1.0 / 64.0);
    StabilityKnobs k;
    k.levels = 4;
    k.offset0 = 1.0;
    k.symbol_offset0 = 0.5;
    k.t_fix = 2.0;
    collect(out, stability_experiment(in, k));
    return out;
}

// 8. Translation identity.
Outcome criterion_8() {
    Outcome out;
    auto in = default_inputs(6, 8, 16, 1.0 / 64.0);
    TranslationKnobs k;
    k.shifts = {0.5, 1.0, std::numbers::pi};
    k.horizon = 2.0;
    k.coupled_shift = 1.0;
    collect(out, translation_experiment(in, k));
    return out;
}

// 9. Uniform absorbing ball in the fourth-moment metric.
Outcome criterion_9() {
    Outcome out;
    auto in = default_inputs(6, 6, 16, 1.0 / 64.0);
    AbsorbingKnobs k;
    k.radius_factors = {10.0, 100.0};
    k.hull_samples = 3;
    k.extra_horizon = 4.0;
    collect(out, absorbing_experiment(in, k));
    return out;
}

// 10. Attractor structure: ladder, attraction curve, quasi-invariance.
Outcome criterion_10() {
    Outcome out;
    auto in = default_inputs(6, 6, 16, 1.0 / 64.0);
    in.sizing.pooled_atoms_cap = 48;
    AttractorKnobs k;
    k.hull_samples = 3;
    k.ladder = {5.0, 10.0, 20.0};
    k.probe_dt = 1.0;
    k.attraction_times = {1.0, 2.0, 3.0, 5.0, 8.0};
    k.pullback_seeds = 3;
    collect(out, attractor_experiment(in, k));
    return out;
}

// 11. End-to-end determinism across worker counts.
Outcome criterion_11() {
    Outcome out;
    nlohmann::json cfg;
    cfg["grid"] = {{"modes_per_axis", 6}};
    cfg["experiment"] = {{"kind", "moment"}, {"seeds", 6},  {"particles", 8},
                         {"dt", 1.0 / 32.0}, {"radius", 8.0}, {"workers", 2}};
    cfg["checks"] = {{"assumption_budget", 500}, {"calibration_samples", 200}};
    const auto m2 = parse_config_json(cfg);
    auto m1 = m2;
    RunOverrides o;
    o.workers = 1;
    apply_overrides(m1, o);

    const auto base = std::filesystem::temp_directory_path() / "mvns_acceptance_det";
    std::filesystem::remove_all(base);
    const int c2 = run_manifest(m2, base / "w2");
    const int c1 = run_manifest(m1, base / "w1");
    out.require(c1 == 0 && c2 == 0, "runs failed");
    for (const char* f : {"curves.csv", "report.json", "ledger.csv", "manifest.json"}) {
        std::ifstream a(base / "w2" / f, std::ios::binary), b(base / "w1" / f,
                                                              std::ios::binary);
        const std::string sa((std::istreambuf_iterator<char>(a)), {});
        const std::string sb((std::istreambuf_iterator<char>(b)), {});
        out.require(!sa.empty() && sa == sb, std::string(f) + " differs across workers");
    }
    if (out.pass) out.detail = "byte-identical outputs at 1 and 2 workers";
    return out;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--criterion=", 0) == 0) {
            const std::string list = arg.substr(12);
            size_t pos = 0;
            while (pos < list.size()) {
                const size_t comma = list.find(',', pos);
                wanted.push_back(std::stoi(list.substr(pos, comma - pos)));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        } else if (arg.rfind("--workers=", 0) == 0) {
            g_workers = std::max(1, std::stoi(arg.substr(10)));
        }
    }
    if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};

    bool all_pass = true;
    for (int c : wanted) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        switch (c) {
            case 1: out = criterion_1(); break;
            case 2: out = criterion_2(); break;
            case 3: out = criterion_3(); break;
            case 4: out = criterion_4(); break;
            case 5: out = criterion_5_6(false); break;
            case 6: out = criterion_5_6(true); break;
            case 7: out = criterion_7(); break;
            case 8: out = criterion_8(); break;
            case 9: out = criterion_9(); break;
            case 10: out = criterion_10(); break;
            case 11: out = criterion_11(); break;
            default:
                out.pass = false;
                out.detail = "unknown criterion";
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d: %s  (%.1fs)  %s\n", c, out.pass ? "PASS" : "FAIL", secs,
                    out.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && out.pass;
    }
    return all_pass ? 0 : 1;
}
