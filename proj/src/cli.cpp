#include "riskm/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskm/dependence.hpp"
#include "riskm/distortion.hpp"
#include "riskm/json_io.hpp"
#include "riskm/oracle.hpp"
#include "riskm/randvar.hpp"
#include "riskm/selftest.hpp"
#include "riskm/spectral.hpp"

namespace riskm::cli {

namespace {

namespace fs = std::filesystem;

void emit(std::ostream& out, const Json& j) { out << dump_json(j) << '\n'; }

// Seed precedence: explicit --seed flag, else RISKM_SEED, else 1.
std::uint64_t env_default_seed() {
    const char* env = std::getenv("RISKM_SEED");
    if (env == nullptr) return 1;
    if (*env == '\0' || !std::isdigit(static_cast<unsigned char>(*env)))
        throw std::invalid_argument(
            std::string("RISKM_SEED must be an unsigned integer, got \"") + env +
            "\"");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0')
        throw std::invalid_argument(
            std::string("RISKM_SEED must be an unsigned integer, got \"") + env +
            "\"");
    return v;
}

std::vector<Plrv> load_rvs(const std::vector<std::string>& paths) {
    std::vector<Plrv> xs;
    xs.reserve(paths.size());
    for (const auto& p : paths) xs.push_back(plrv_from_json(load_json_file(p)));
    return xs;
}

std::string write_json_file(const fs::path& dir, const std::string& name,
                            const Json& j) {
    const fs::path path = dir / name;
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write " + path.string());
    f << dump_json(j) << '\n';
    if (!f) throw std::invalid_argument("failed writing " + path.string());
    return path.string();
}

struct Args {
    std::string distortion_path;
    std::string rv_path;
    std::string set_path;
    std::string spectrum_path;
    std::string spec_path;
    std::string out_dir;
    std::string side = "left";
    std::vector<std::string> rv_paths;
    double p = 0.0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool oracle = false;
};

int cmd_eval(const Args& a, std::ostream& out) {
    const DistortionFn h = distortion_from_json(load_json_file(a.distortion_path));
    const Plrv x = plrv_from_json(load_json_file(a.rv_path));
    const double value = choquet(h, x);
    Json j;
    j["value"] = value;
    if (a.oracle) {
        const double ref = choquet_numeric(h, x, 1000000);
        const double abs_err = std::fabs(value - ref);
        j["oracle"] = ref;
        j["abs_err"] = abs_err;
        if (abs_err > 1e-4)
            throw std::runtime_error(
                "oracle cross-check failed: exact " + dump_json(Json(value)) +
                " vs numeric " + dump_json(Json(ref)));
    }
    emit(out, j);
    return 0;
}

int cmd_quantile(const Args& a, std::ostream& out) {
    const Plrv x = plrv_from_json(load_json_file(a.rv_path));
    if (a.side != "left" && a.side != "right")
        throw std::invalid_argument("--side must be left or right, got \"" +
                                    a.side + "\"");
    const double value =
        (a.side == "left") ? quantile_left(x, a.p) : quantile_right(x, a.p);
    Json j;
    j["value"] = value;
    emit(out, j);
    return 0;
}

int cmd_conc(const Args& a, std::ostream& out) {
    const ClosedSet k = closedset_from_json(load_json_file(a.set_path));
    const auto xs = load_rvs(a.rv_paths);
    emit(out, report_to_json(is_k_concentrated(xs, k)));
    return 0;
}

int cmd_kadd(const Args& a, std::ostream& out) {
    const DistortionFn h = distortion_from_json(load_json_file(a.distortion_path));
    const ClosedSet k = closedset_from_json(load_json_file(a.set_path));
    Json j;
    j["additive"] = is_k_additive(h, k);
    emit(out, j);
    return 0;
}

int cmd_core(const Args& a, std::ostream& out) {
    const DistortionFn h = distortion_from_json(load_json_file(a.distortion_path));
    emit(out, core_to_json(additivity_core(h)));
    return 0;
}

int cmd_decompose(const Args& a, std::ostream& out) {
    const Spectrum g = spectrum_from_json(load_json_file(a.spectrum_path));
    const auto m = es_mixture(g);
    if (!m.has_value())
        throw std::invalid_argument(
            "spectrum has sloped pieces: no finite tail-expectation mixture "
            "exists (only step spectra decompose)");
    emit(out, mixture_to_json(*m));
    return 0;
}

int cmd_witness(const Args& a, std::ostream& out) {
    const ClosedSet k = closedset_from_json(load_json_file(a.set_path));
    const auto xs = load_rvs(a.rv_paths);
    const auto report = is_k_concentrated(xs, k);
    if (!report.ok) {
        std::string where;
        if (report.failing_p.has_value())
            where = " (tail check fails at p = " +
                    dump_json(Json(*report.failing_p)) + ")";
        else if (report.failing_layer.has_value())
            where = " (layer [" + dump_json(Json(report.failing_layer->a)) +
                    ", " + dump_json(Json(report.failing_layer->b)) +
                    "] is not conditionally comonotonic)";
        throw std::invalid_argument(
            "vector is not concentrated on the given set" + where);
    }
    Json j;
    j["z"] = plrv_to_json(witness_z(xs, k));
    emit(out, j);
    return 0;
}

int cmd_gen(const Args& a, std::ostream& out) {
    const ClosedSet k = closedset_from_json(load_json_file(a.set_path));
    const GapCopulaSpec spec = gapspec_from_json(load_json_file(a.spec_path));
    const std::uint64_t seed = a.seed_given ? a.seed : env_default_seed();
    const auto xs = generate(k, spec, {}, seed);
    fs::create_directories(a.out_dir);
    Json files = Json::array();
    for (std::size_t i = 0; i < xs.size(); ++i)
        files.push_back(write_json_file(a.out_dir,
                                        "x" + std::to_string(i) + ".json",
                                        plrv_to_json(xs[i])));
    Json j;
    j["files"] = std::move(files);
    emit(out, j);
    return 0;
}

int cmd_counterexample(const Args& a, std::ostream& out) {
    const DistortionFn h = distortion_from_json(load_json_file(a.distortion_path));
    const ClosedSet k = closedset_from_json(load_json_file(a.set_path));
    const std::uint64_t seed = a.seed_given ? a.seed : env_default_seed();
    const auto pair = counterexample(h, k, seed);
    Json j;
    if (!pair.has_value()) {
        j["additive"] = true;
        emit(out, j);
        return 0;
    }
    const double gap =
        std::fabs(choquet(h, pair->first) + choquet(h, pair->second) -
                  choquet(h, pair->first + pair->second));
    fs::create_directories(a.out_dir);
    Json files = Json::array();
    files.push_back(write_json_file(a.out_dir, "x.json",
                                    plrv_to_json(pair->first)));
    files.push_back(write_json_file(a.out_dir, "y.json",
                                    plrv_to_json(pair->second)));
    j["additive"] = false;
    j["files"] = std::move(files);
    j["gap"] = gap;
    emit(out, j);
    return 0;
}

int cmd_selftest(std::ostream& out, std::ostream& err) {
    const auto results = run_selftest();
    bool all = true;
    Json criteria = Json::array();
    for (const auto& r : results) {
        all = all && r.pass;
        err << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.detail
            << ")\n";
        Json c;
        c["name"] = r.name;
        c["pass"] = r.pass;
        c["detail"] = r.detail;
        criteria.push_back(std::move(c));
    }
    Json j;
    j["criteria"] = std::move(criteria);
    j["all_pass"] = all;
    emit(out, j);
    if (!all) err << "selftest: FAILURES present\n";
    return all ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{
        "Exact distortion riskmetrics, dependence structures, and "
        "tail-expectation decompositions. JSON in, JSON out."};
    app.require_subcommand(1);

    Args a;

    CLI::App* eval = app.add_subcommand(
        "eval", "Evaluate a distortion riskmetric on a random variable");
    eval->add_option("--distortion", a.distortion_path, "weight JSON file")
        ->required();
    eval->add_option("--rv", a.rv_path, "random-variable JSON file")->required();
    eval->add_flag("--oracle", a.oracle,
                   "cross-check against the numeric reference integrator");

    CLI::App* quantile =
        app.add_subcommand("quantile", "One-sided quantile of a random variable");
    quantile->add_option("--rv", a.rv_path, "random-variable JSON file")
        ->required();
    quantile->add_option("--p", a.p, "probability level")->required();
    quantile->add_option("--side", a.side, "left or right (default left)");

    CLI::App* conc = app.add_subcommand(
        "conc", "Decide concentration of a vector on a closed set");
    conc->add_option("--set", a.set_path, "closed-set JSON file")->required();
    conc->add_option("rvs", a.rv_paths, "random-variable JSON files")
        ->required()
        ->expected(-1);

    CLI::App* kadd = app.add_subcommand(
        "kadd", "Decide additivity of a weight over a dependence set");
    kadd->add_option("--distortion", a.distortion_path, "weight JSON file")
        ->required();
    kadd->add_option("--set", a.set_path, "closed-set JSON file")->required();

    CLI::App* core = app.add_subcommand(
        "core", "Canonical additivity description of a weight");
    core->add_option("--distortion", a.distortion_path, "weight JSON file")
        ->required();

    CLI::App* decompose = app.add_subcommand(
        "decompose", "Decompose a step spectrum into tail expectations");
    decompose->add_option("--spectrum", a.spectrum_path, "spectrum JSON file")
        ->required();

    CLI::App* witness = app.add_subcommand(
        "witness", "Comonotone reference variable for a concentrated vector");
    witness->add_option("--set", a.set_path, "closed-set JSON file")->required();
    witness->add_option("rvs", a.rv_paths, "random-variable JSON files")
        ->required()
        ->expected(-1);

    CLI::App* gen = app.add_subcommand(
        "gen", "Generate a concentrated vector with chosen gap couplings");
    gen->add_option("--set", a.set_path, "closed-set JSON file")->required();
    gen->add_option("--spec", a.spec_path, "gap-coupling JSON file")->required();
    gen->add_option("--seed", a.seed, "deterministic seed")
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--out-dir", a.out_dir, "directory for component files")
        ->required();

    CLI::App* counterex = app.add_subcommand(
        "counterexample",
        "Additivity-violating concentrated pair, when one exists");
    counterex->add_option("--distortion", a.distortion_path, "weight JSON file")
        ->required();
    counterex->add_option("--set", a.set_path, "closed-set JSON file")
        ->required();
    counterex->add_option("--seed", a.seed, "deterministic seed")
        ->check(CLI::NonNegativeNumber);
    counterex
        ->add_option("--out-dir", a.out_dir, "directory for the pair files")
        ->required();

    CLI::App* selftest = app.add_subcommand(
        "selftest", "Run every shipped-guarantee check");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        a.seed_given = (gen->count("--seed") + counterex->count("--seed")) > 0;

        if (eval->parsed()) return cmd_eval(a, out);
        if (quantile->parsed()) return cmd_quantile(a, out);
        if (conc->parsed()) return cmd_conc(a, out);
        if (kadd->parsed()) return cmd_kadd(a, out);
        if (core->parsed()) return cmd_core(a, out);
        if (decompose->parsed()) return cmd_decompose(a, out);
        if (witness->parsed()) return cmd_witness(a, out);
        if (gen->parsed()) return cmd_gen(a, out);
        if (counterex->parsed()) return cmd_counterexample(a, out);
        if (selftest->parsed()) return cmd_selftest(out, err);
        throw std::invalid_argument("no command given");
    } catch (const CLI::CallForHelp&) {
        err << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        err << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        Json j;
        j["error"] = e.what();
        emit(out, j);
        err << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        Json j;
        j["error"] = e.what();
        emit(out, j);
        err << e.what() << '\n';
        return 1;
    } catch (const std::runtime_error& e) {
        Json j;
        j["error"] = e.what();
        emit(out, j);
        err << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        Json j;
        j["error"] = e.what();
        emit(out, j);
        err << e.what() << '\n';
        return 2;
    }
}

}  // namespace riskm::cli
