// Command-line surface: instance generation, parallelogram approximation,
// piercing with certificate verification, certificate re-verification, and
// corpus benchmarking. All outputs are JSON reports; figures are static SVG.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pierce4/pierce4.hpp"

namespace {

using pierce4::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // verification or pipeline failure
constexpr int kExitUsage = 2;    // usage or input error

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        pierce4::write_file(out_path, text);
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
    if (const char* env = std::getenv("PIERCE4_SEED")) return std::stoull(env);
    return flag_seed;
}

pierce4::ConvexPolygon load_body(const std::string& body_spec, const std::string& body_file,
                                 std::uint64_t seed, std::string* input_bytes) {
    if (!body_file.empty()) {
        *input_bytes = pierce4::read_file(body_file);
        return pierce4::polygon_from_json(json::parse(*input_bytes));
    }
    *input_bytes = body_spec;
    return pierce4::gen_body(body_spec, seed);
}

int cmd_gen(const std::string& body, int families, const std::string& sizes_csv, double spread,
            std::uint64_t seed, int max_rejections, const std::string& out_path) {
    pierce4::GenConfig cfg;
    cfg.seed = effective_seed(seed);
    cfg.body = body;
    cfg.n_families = families;
    cfg.spread = spread;
    cfg.max_rejections = max_rejections;
    cfg.sizes.clear();
    std::stringstream ss(sizes_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.sizes.push_back(std::stoi(tok));
    if (cfg.sizes.empty()) cfg.sizes.assign(static_cast<std::size_t>(families), 5);
    if (static_cast<int>(cfg.sizes.size()) == 1 && families > 1)
        cfg.sizes.assign(static_cast<std::size_t>(families), cfg.sizes[0]);

    const pierce4::Instance inst = pierce4::gen_instance(cfg);
    inst.validate();
    emit(pierce4::to_json(inst), out_path);
    return kExitOk;
}

int cmd_approx(const std::string& body, const std::string& body_file, double direction_deg,
               const pierce4::ApproxConfig& acfg, std::uint64_t seed, const std::string& svg_path,
               const std::string& out_path, const std::string& command_echo) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string input_bytes;
    const pierce4::ConvexPolygon k =
        load_body(body, body_file, effective_seed(seed), &input_bytes);
    const pierce4::Direction u(direction_deg * 3.14159265358979323846 / 180.0);

    const pierce4::ApproxResult res = pierce4::find_homothetic_pair(k, u, acfg);
    const pierce4::ApproxCheck chk = pierce4::verify_approx(k, res);

    if (!svg_path.empty()) {
        pierce4::SvgScene scene;
        scene.add_polygon(res.Q.to_polygon(), "none", "#888888");
        scene.add_polygon(res.P_circ.to_polygon(), "none", "#d62728");
        scene.add_polygon(k, "#c6dbef", "#1f77b4");
        scene.add_polygon(res.P.to_polygon(), "none", "#2ca02c");
        pierce4::write_file(svg_path, scene.render());
    }

    json tol{{"containment", pierce4::kDefaultTol},
             {"root_tol", acfg.root_tol},
             {"ratio_slack", acfg.ratio_slack}};
    json result = pierce4::to_json(res);
    result["checks"] = json{{"ok", chk.ok()},
                            {"p_in_k", chk.p_in_k},
                            {"k_in_q", chk.k_in_q},
                            {"q_is_2p", chk.q_is_2p},
                            {"p_slack", chk.p_slack},
                            {"q_slack", chk.q_slack}};
    emit(pierce4::make_report(command_echo, input_bytes, tol, result, ms_since(t0)), out_path);
    return chk.ok() ? kExitOk : kExitFailure;
}

json certificate_report_result(const pierce4::PiercingCertificate& cert,
                               const pierce4::CertReport& rep) {
    json violations = json::array();
    for (const auto& v : rep.violations)
        violations.push_back(json{{"family", v.family}, {"member", v.member}, {"reason", v.reason}});
    json result = pierce4::to_json(cert);
    result["verification"] =
        json{{"ok", rep.ok}, {"checked", rep.checked}, {"violations", std::move(violations)}};
    return result;
}

void draw_instance_svg(const std::string& path, const pierce4::Instance& inst,
                       const pierce4::PiercingCertificate& cert) {
    static const char* palette[] = {"#9ecae1", "#a1d99b", "#fdae6b", "#bcbddc", "#fdd0a2",
                                    "#c7e9c0", "#9e9ac8", "#fdd835"};
    pierce4::SvgScene scene;
    for (std::size_t i = 0; i < inst.families.size(); ++i) {
        const bool excluded = static_cast<int>(i) == cert.excluded_family;
        const std::string fill = palette[i % (sizeof(palette) / sizeof(palette[0]))];
        for (const auto& x : inst.families[i])
            scene.add_polygon(inst.body.translated(x), fill, "#555555", excluded);
    }
    if (cert.ell) scene.add_line(*cert.ell, "#1f77b4");
    if (cert.ell_prime) scene.add_line(*cert.ell_prime, "#d62728");
    for (const auto& p : cert.points) scene.add_point(p, "#000000");
    pierce4::write_file(path, scene.render());
}

int cmd_pierce(const std::string& instance_path, const std::string& svg_path,
               const std::string& out_path, const std::string& command_echo) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string input_bytes = pierce4::read_file(instance_path);
    const pierce4::Instance inst = pierce4::instance_from_json(json::parse(input_bytes));

    const pierce4::PiercingCertificate cert = pierce4::pierce(inst);
    const pierce4::CertReport rep = pierce4::verify_certificate(inst, cert);

    if (!svg_path.empty()) draw_instance_svg(svg_path, inst, cert);

    json tol{{"containment", pierce4::kDefaultTol}};
    emit(pierce4::make_report(command_echo, input_bytes, tol,
                              certificate_report_result(cert, rep), ms_since(t0)),
         out_path);
    return rep.ok ? kExitOk : kExitFailure;
}

int cmd_verify(const std::string& instance_path, const std::string& cert_path,
               const std::string& out_path, const std::string& command_echo) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string inst_bytes = pierce4::read_file(instance_path);
    const std::string cert_bytes = pierce4::read_file(cert_path);
    const pierce4::Instance inst = pierce4::instance_from_json(json::parse(inst_bytes));
    const pierce4::PiercingCertificate cert =
        pierce4::certificate_from_json(json::parse(cert_bytes));

    const pierce4::CertReport rep = pierce4::verify_certificate(inst, cert);
    json tol{{"containment", pierce4::kDefaultTol}};
    emit(pierce4::make_report(command_echo, inst_bytes + cert_bytes, tol,
                              certificate_report_result(cert, rep), ms_since(t0)),
         out_path);
    return rep.ok ? kExitOk : kExitFailure;
}

int cmd_bench(const std::string& corpus, const std::string& seeds, int jobs,
              const std::string& out_path, const std::string& command_echo) {
    const auto t0 = std::chrono::steady_clock::now();
    if (corpus != "default") {
        std::cerr << "unknown corpus: " << corpus << "\n";
        return kExitUsage;
    }
    std::uint64_t lo = 1, hi = 0;
    {
        const auto pos = seeds.find(':');
        if (pos == std::string::npos) {
            std::cerr << "--seeds expects LO:HI\n";
            return kExitUsage;
        }
        lo = std::stoull(seeds.substr(0, pos));
        hi = std::stoull(seeds.substr(pos + 1));
    }

    const auto corpus_cfgs = pierce4::build_corpus(lo, hi);
    json result;
    if (corpus_cfgs.empty()) {
        result = json{{"cases", 0}, {"note", "0 cases"}};
        std::cout << "0 cases\n";
    } else {
        const pierce4::ProbeStats stats = pierce4::conjecture_probe(corpus_cfgs, jobs);
        int max_cert = 0;
        for (const auto& c : stats.cases) max_cert = std::max(max_cert, c.cert_size);
        json rows = json::array();
        std::cout << "body              n  cases  opt<=3  max_cert  max_opt\n";
        for (const auto& r : stats.rows) {
            rows.push_back(json{{"body", r.body},
                                {"n_families", r.n_families},
                                {"cases", r.cases},
                                {"optimum_le3_fraction",
                                 static_cast<double>(r.optimum_le3) / r.cases},
                                {"max_cert", r.max_cert},
                                {"max_optimum", r.max_optimum}});
            std::ostringstream line;
            line.width(16);
            line << std::left << r.body;
            std::cout << line.str() << "  " << r.n_families << "  " << r.cases << "      "
                      << r.optimum_le3 << "       " << r.max_cert << "         " << r.max_optimum
                      << "\n";
        }
        result = json{{"cases", stats.total},
                      {"fallback_count", stats.fallback_count},
                      {"max_cert_size", max_cert},
                      {"cert_never_below_optimum", stats.cert_never_below_optimum},
                      {"rows", std::move(rows)}};
        if (!stats.cert_never_below_optimum) {
            emit(pierce4::make_report(command_echo, seeds, json{{"containment", pierce4::kDefaultTol}},
                                      result, ms_since(t0)),
                 out_path);
            return kExitFailure;
        }
    }
    emit(pierce4::make_report(command_echo, seeds, json{{"containment", pierce4::kDefaultTol}},
                              result, ms_since(t0)),
         out_path);
    return kExitOk;
}

std::string echo_command(int argc, char** argv) {
    std::ostringstream os;
    for (int i = 0; i < argc; ++i) {
        if (i) os << ' ';
        os << argv[i];
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"piercing translate families of a planar convex body with at most four points"};
    app.set_version_flag("--version", pierce4::kToolVersion);
    app.require_subcommand(1);
    const std::string echo = echo_command(argc, argv);

    // gen
    std::string gen_body_spec = "disk256", gen_sizes = "5,5,5", gen_out = "-";
    int gen_families = 3, gen_max_rej = 100000;
    double gen_spread = 0.25;
    std::uint64_t gen_seed = 1;
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    gen->add_option("--body", gen_body_spec, "body spec (square, triangle, kgon:K, disk256, ...)");
    gen->add_option("--families", gen_families, "number of families")->check(CLI::Range(2, 32));
    gen->add_option("--sizes", gen_sizes, "comma-separated family sizes");
    gen->add_option("--spread", gen_spread, "within-family dispersion");
    gen->add_option("--seed", gen_seed, "generator seed (PIERCE4_SEED overrides)");
    gen->add_option("--max-rejections", gen_max_rej, "rejection budget");
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // approx
    std::string ap_body = "disk256", ap_body_file, ap_svg, ap_out = "-";
    double ap_dir_deg = 0.0;
    std::uint64_t ap_seed = 1;
    pierce4::ApproxConfig acfg;
    auto* ap = app.add_subcommand("approx", "inscribed/circumscribed parallelogram approximation");
    ap->add_option("--body", ap_body, "body spec");
    ap->add_option("--body-file", ap_body_file, "polygon JSON file (overrides --body)");
    ap->add_option("--direction", ap_dir_deg, "direction of the P side pair, degrees");
    ap->add_option("--tol", acfg.root_tol, "root tolerance on the homothety gap");
    ap->add_option("--ratio-slack", acfg.ratio_slack, "accepted ratio overshoot");
    ap->add_option("--seed", ap_seed, "seed for random body specs");
    ap->add_option("--svg", ap_svg, "write an overlay figure (K, P, P', Q)");
    ap->add_option("--out", ap_out, "report file (default stdout)");

    // pierce
    std::string pi_instance, pi_svg, pi_out = "-";
    auto* pi = app.add_subcommand("pierce", "compute and verify a piercing certificate");
    pi->add_option("--instance", pi_instance, "instance JSON file")->required();
    pi->add_option("--svg", pi_svg, "write a scene figure");
    pi->add_option("--out", pi_out, "report file (default stdout)");

    // verify
    std::string ve_instance, ve_cert, ve_out = "-";
    auto* ve = app.add_subcommand("verify", "re-verify a certificate against an instance");
    ve->add_option("--instance", ve_instance, "instance JSON file")->required();
    ve->add_option("--certificate", ve_cert, "certificate JSON file")->required();
    ve->add_option("--out", ve_out, "report file (default stdout)");

    // bench
    std::string be_corpus = "default", be_seeds = "1:100", be_out = "-";
    int be_jobs = 1;
    auto* be = app.add_subcommand("bench", "run the generated corpus and tabulate statistics");
    be->add_option("--corpus", be_corpus, "corpus name");
    be->add_option("--seeds", be_seeds, "seed range LO:HI");
    be->add_option("--jobs", be_jobs, "parallel workers")->check(CLI::Range(1, 64));
    be->add_option("--out", be_out, "report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_body_spec, gen_families, gen_sizes, gen_spread, gen_seed,
                           gen_max_rej, gen_out);
        if (ap->parsed())
            return cmd_approx(ap_body, ap_body_file, ap_dir_deg, acfg, ap_seed, ap_svg, ap_out,
                              echo);
        if (pi->parsed()) return cmd_pierce(pi_instance, pi_svg, pi_out, echo);
        if (ve->parsed()) return cmd_verify(ve_instance, ve_cert, ve_out, echo);
        if (be->parsed()) return cmd_bench(be_corpus, be_seeds, be_jobs, be_out, echo);
    } catch (const pierce4::PipelineFailure& e) {
        std::cerr << "pipeline failure: " << e.what() << "\n";
        return kExitFailure;
    } catch (const pierce4::NoRootFound& e) {
        std::cerr << "approximation failure: " << e.what() << "\n";
        return kExitFailure;
    } catch (const pierce4::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
