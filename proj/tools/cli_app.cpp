#include "cli_app.hpp"

#include <filesystem>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairrep/bipartite2.hpp"
#include "fairrep/bipartite3.hpp"
#include "fairrep/fairness.hpp"
#include "fairrep/interval.hpp"
#include "fairrep/json_io.hpp"
#include "fairrep/lab.hpp"

namespace fairrep::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string in_path;
    std::string out_path;
    std::string format = "json";
    std::string targets;
    int avoid = -1;
    int count = std::numeric_limits<int>::min();
    std::string emit_disk;
    std::string conjecture;
    int n = 4;
    int m = 2;
    std::string mode = "exhaustive";
    long long samples = 1000;
    std::uint64_t seed = 1;
    long long budget = 50'000'000;
    int workers = 1;
    std::string fixtures_dir = "fixtures";
    std::string fixture_action;
};

std::string table_report(const FairnessReport& rep) {
    std::ostringstream out;
    out << std::left << std::setw(8) << "class" << std::setw(8) << "count" << std::setw(8)
        << "quota" << std::setw(8) << "deficit" << "\n";
    for (std::size_t i = 0; i < rep.counts.size(); ++i)
        out << std::left << std::setw(8) << (i + 1) << std::setw(8) << rep.counts[i]
            << std::setw(8) << to_string(rep.quotas[i]) << std::setw(8)
            << to_string(rep.deficits[i]) << "\n";
    out << "total_deficit " << to_string(rep.total_deficit) << "\n";
    return out.str();
}

void emit_solution(const Options& opt, std::ostream& out, const std::string& json_text,
                   const FairnessReport* rep) {
    std::string payload = json_text;
    if (opt.format == "table" && rep) payload = table_report(*rep);
    if (!opt.out_path.empty())
        io::write_file(opt.out_path, payload + "\n");
    else
        out << payload << "\n";
}

std::vector<int> parse_targets(const std::string& spec) {
    std::vector<int> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item) );
    return out;
}

json perm_json(const Permutation& p) {
    json arr = json::array();
    for (int v : p.images()) arr.push_back(v + 1);
    return arr;
}

int solve_interval_cmd(const Options& opt, const std::string& kind, std::ostream& out) {
    VertexPartition vp = io::parse_interval(io::read_file(opt.in_path));
    if (kind == "path") {
        auto [set, rep] = interval::solve_path_total(vp);
        emit_solution(opt, out, io::render_set_solution(set, rep), &rep);
        return 0;
    }
    if (kind == "cycle") {
        if (!opt.targets.empty()) {
            IndependentSet set = interval::solve_cycle_exact(vp, parse_targets(opt.targets));
            FairnessReport rep = fairness_report(vp, set);
            emit_solution(opt, out, io::render_set_solution(set, rep), &rep);
            return 0;
        }
        std::optional<int> avoid;
        if (opt.avoid >= 1) avoid = opt.avoid - 1;
        auto [set, rep] = interval::solve_cycle_individual(vp, avoid);
        emit_solution(opt, out, io::render_set_solution(set, rep), &rep);
        return 0;
    }
    if (kind == "power-cycle") {
        IndependentSet set = interval::solve_power_cycle(vp);
        FairnessReport rep = fairness_report(vp, set);
        emit_solution(opt, out, io::render_set_solution(set, rep), &rep);
        return 0;
    }
    // dhw
    auto [s1, s2] = interval::solve_dhw(vp);
    FairnessReport r1 = fairness_report(vp, s1), r2 = fairness_report(vp, s2);
    json j;
    json sets = json::array();
    json reps = json::array();
    for (const IndependentSet* s : {&s1, &s2}) {
        json arr = json::array();
        for (int p : s->members) arr.push_back(p + 1);
        sets.push_back(arr);
    }
    reps.push_back(json::parse(io::render_report(r1)));
    reps.push_back(json::parse(io::render_report(r2)));
    j["sets"] = sets;
    j["reports"] = reps;
    emit_solution(opt, out, j.dump(), &r1);
    return 0;
}

int solve_bipartite2_cmd(const Options& opt, std::ostream& out, std::ostream& err) {
    ColorMatrix f = io::parse_bipartite(io::read_file(opt.in_path));
    try {
        Permutation p = opt.count == std::numeric_limits<int>::min()
                            ? bipartite2::almost_fair_two(f)
                            : bipartite2::exact_count_matching(f, opt.count);
        FairnessReport rep = fairness_report(f, p);
        emit_solution(opt, out, io::render_perm_solution(p, rep), &rep);
        return 0;
    } catch (const RigidInfeasible& e) {
        json j;
        j["error"] = "rigid_infeasible";
        json ach = json::array();
        for (int c : e.achievable) ach.push_back(c);
        j["achievable"] = ach;
        out << j.dump() << "\n";
        err << e.what() << "\n";
        return 1;
    }
}

int solve_bipartite3_cmd(const Options& opt, std::ostream& out) {
    ColorMatrix a = io::parse_bipartite(io::read_file(opt.in_path));
    if (!opt.emit_disk.empty()) {
        auto built = bipartite3::build_disk(a);
        json dump;
        if (built.disk) {
            json verts = json::array();
            for (const auto& v : built.disk->vertices) {
                json jv;
                jv["id"] = v.id;
                jv["perm"] = perm_json(v.perm);
                jv["color"] = v.color + 1;
                verts.push_back(jv);
            }
            json tris = json::array();
            for (const auto& t : built.disk->triangles)
                tris.push_back(json::array({t[0], t[1], t[2]}));
            json arcs = json::array();
            for (const auto& arc : built.disk->boundary_arcs) arcs.push_back(arc);
            dump["vertices"] = verts;
            dump["triangles"] = tris;
            dump["boundary"] = arcs;
        } else {
            dump["early"] = perm_json(*built.early);
        }
        io::write_file(opt.emit_disk, dump.dump() + "\n");
    }
    auto [p, rep] = bipartite3::solve_three(a);
    emit_solution(opt, out, io::render_perm_solution(p, rep), &rep);
    return 0;
}

int check_rigidity_cmd(const Options& opt, std::ostream& out) {
    ColorMatrix f = io::parse_bipartite(io::read_file(opt.in_path));
    auto cert = bipartite2::check_rigidity(f);
    json j;
    j["rigid"] = cert.rigid;
    if (cert.rigid) {
        json k = json::array(), l = json::array();
        for (int i : cert.K) k.push_back(i + 1);
        for (int i : cert.L) l.push_back(i + 1);
        j["K"] = k;
        j["L"] = l;
        auto par = bipartite2::parity_signature(f);
        j["parity"] = par == bipartite2::Parity::Even ? "even" : "odd";
    } else {
        j["witness"] = json::array({perm_json(cert.witness->first),
                                    perm_json(cert.witness->second)});
        j["parity"] = "mixed";
    }
    if (!opt.out_path.empty())
        io::write_file(opt.out_path, j.dump() + "\n");
    else
        out << j.dump() << "\n";
    return cert.rigid ? 0 : 1;
}

int sweep_cmd(const Options& opt, std::ostream& out) {
    lab::SweepConfig cfg;
    cfg.conjecture = opt.conjecture;
    cfg.n = opt.n;
    cfg.m = opt.m;
    cfg.exhaustive = opt.mode == "exhaustive";
    cfg.samples = opt.samples;
    cfg.seed = opt.seed;
    cfg.budget = opt.budget;
    cfg.workers = opt.workers;
    lab::SweepOutcome res = lab::run_sweep(cfg);
    json j;
    j["conjecture"] = res.conjecture;
    j["tested"] = res.tested;
    j["seed"] = res.seed;
    j["counterexamples"] = json::array();
    for (const auto& ce : res.counterexamples) j["counterexamples"].push_back(json::parse(ce));
    for (const auto& [k, v] : res.stats) j[k] = v;
    // The scope note: hosts here are simple bipartite graphs, never multigraphs.
    j["host_scope"] = "simple";
    if (!opt.out_path.empty())
        io::write_file(opt.out_path, j.dump() + "\n");
    else
        out << j.dump() << "\n";
    return res.counterexamples.empty() ? 0 : 1;
}

int fixtures_cmd(const Options& opt, std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    if (opt.fixture_action == "list") {
        for (const auto& f : lab::fixtures())
            out << f.name << "  (" << f.file << ")  " << f.description << "\n";
        return 0;
    }
    bool all_ok = true;
    for (const auto& f : lab::fixtures()) {
        fs::path path = fs::path(opt.fixtures_dir) / f.file;
        bool ok = false;
        std::string note;
        try {
            ok = lab::run_fixture_check(f.checker, io::read_file(path.string()));
        } catch (const std::exception& e) {
            note = e.what();
        }
        out << (ok ? "[ok]   " : "[FAIL] ") << f.name << (note.empty() ? "" : "  " + note)
            << "\n";
        all_ok = all_ok && ok;
    }
    if (!all_ok) err << "some fixtures failed\n";
    return all_ok ? 0 : 1;
}

int oracle_cmd(const Options& opt, const std::string& target, std::ostream& out) {
    if (target == "interval") {
        VertexPartition vp = io::parse_interval(io::read_file(opt.in_path));
        auto best = interval::oracle_best_total(vp);
        json j;
        j["optimum"] = to_string(best.best_total);
        json w = json::array();
        for (int p : best.witness.members) w.push_back(p + 1);
        j["witness"] = w;
        out << j.dump() << "\n";
        return 0;
    }
    // matchings: exhaustive count profile of a two-part instance
    ColorMatrix f = io::parse_bipartite(io::read_file(opt.in_path));
    if (f.n > 8) throw CapExceeded("matching oracle capped at n = 8");
    std::map<int, long long> profile;
    lab::for_each_permutation(f.n, [&](const Permutation& p) {
        int c = 0;
        for (int i = 0; i < f.n; ++i)
            if (f.color(i, p(i)) == 0) c++;
        profile[c]++;
    });
    json j;
    json counts = json::object();
    for (auto [c, k] : profile) counts[std::to_string(c)] = k;
    j["count_profile"] = counts;
    out << j.dump() << "\n";
    return 0;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"fair representation solvers and conjecture lab"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd, bool needs_in) {
        auto* in = cmd->add_option("--in", opt.in_path, "instance JSON file");
        if (needs_in) in->required();
        cmd->add_option("--out", opt.out_path, "write the result here instead of stdout");
        cmd->add_option("--format", opt.format, "json or table")
            ->check(CLI::IsMember({"json", "table"}));
    };

    auto* solve = app.add_subcommand("solve", "run a solver on an instance");
    solve->require_subcommand(1);
    for (const char* kind : {"path", "cycle", "power-cycle", "dhw"}) {
        auto* cmd = solve->add_subcommand(kind);
        add_common(cmd, true);
        if (std::string(kind) == "cycle") {
            cmd->add_option("--targets", opt.targets, "comma-separated exact per-class counts");
            cmd->add_option("--avoid", opt.avoid, "1-based vertex to avoid (all-odd classes)");
        }
    }
    auto* b2 = solve->add_subcommand("bipartite2");
    add_common(b2, true);
    b2->add_option("--count", opt.count, "exact number of first-part edges");
    auto* b3 = solve->add_subcommand("bipartite3");
    add_common(b3, true);
    b3->add_option("--emit-disk", opt.emit_disk, "dump the simplicial disk to this file");

    auto* check = app.add_subcommand("check", "decide a structural property");
    auto* rigidity = check->add_subcommand("rigidity");
    add_common(rigidity, true);
    check->require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep", "sweep a conjecture over instances");
    sweep->add_option("--conjecture", opt.conjecture, "conjecture id")->required();
    sweep->add_option("--n", opt.n, "instance size");
    sweep->add_option("--m", opt.m, "number of parts/classes/labels");
    sweep->add_option("--mode", opt.mode, "exhaustive or random")
        ->check(CLI::IsMember({"exhaustive", "random"}));
    sweep->add_option("--samples", opt.samples, "random sample count");
    sweep->add_option("--seed", opt.seed, "random seed");
    sweep->add_option("--budget", opt.budget, "instance budget for exhaustive mode");
    sweep->add_option("--workers", opt.workers, "worker threads");
    sweep->add_option("--out", opt.out_path, "write the outcome here");

    auto* fixtures = app.add_subcommand("fixtures", "list or run the named fixtures");
    fixtures->add_option("action", opt.fixture_action, "list or run")
        ->required()
        ->check(CLI::IsMember({"list", "run"}));
    fixtures->add_option("--dir", opt.fixtures_dir, "fixtures directory");

    auto* oracle = app.add_subcommand("oracle", "exhaustive reference computations");
    auto* o_int = oracle->add_subcommand("interval");
    add_common(o_int, true);
    auto* o_match = oracle->add_subcommand("matchings");
    add_common(o_match, true);
    oracle->require_subcommand(1);

    std::vector<const char*> argv;
    argv.push_back("fairrep");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (solve->parsed()) {
            for (const char* kind : {"path", "cycle", "power-cycle", "dhw"})
                if (solve->get_subcommand(kind)->parsed())
                    return solve_interval_cmd(opt, kind, out);
            if (b2->parsed()) return solve_bipartite2_cmd(opt, out, err);
            if (b3->parsed()) return solve_bipartite3_cmd(opt, out);
        }
        if (check->parsed()) return check_rigidity_cmd(opt, out);
        if (sweep->parsed()) return sweep_cmd(opt, out);
        if (fixtures->parsed()) return fixtures_cmd(opt, out, err);
        if (oracle->parsed())
            return oracle_cmd(opt, oracle->get_subcommand("interval")->parsed() ? "interval"
                                                                                : "matchings",
                              out);
    } catch (const InternalInvariantViolation& e) {
        err << "internal invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const SearchExhausted& e) {
        err << "internal search exhausted: " << e.what() << "\n";
        return 3;
    } catch (const NoRainbow& e) {
        err << "internal: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand executed\n";
    return 2;
}

}  // namespace fairrep::cli
