// Command-line front end: validation, clustering, GH computation, and the
// stability experiments, with reproducible JSON/CSV reports.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "hcstab/dendrogram.hpp"
#include "hcstab/io.hpp"
#include "hcstab/linkage.hpp"
#include "hcstab/random.hpp"
#include "hcstab/stability.hpp"
#include "hcstab/unchaining.hpp"

using hcstab::json;

namespace {

struct Options {
    std::string command;
    std::string input, input2, out;
    std::string method = "sl";
    std::string condition;
    std::string format = "json";
    std::string levels = "0.1,0.05,0.025,0.0125";
    double alpha = 1.0;
    double gap = 0.5;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::uint64_t budget = 10'000'000;
    int kmax = 4;
    int trials = 20;
    bool require_exact = false;
};

json resolved_config(const Options& opt) {
    json c;
    c["command"] = opt.command;
    if (!opt.input.empty()) c["input"] = opt.input;
    if (!opt.input2.empty()) c["input2"] = opt.input2;
    c["method"] = opt.method;
    if (!opt.condition.empty()) c["condition"] = opt.condition;
    c["alpha"] = opt.alpha;
    c["format"] = opt.format;
    c["seed"] = opt.seed;
    c["budget"] = opt.budget;
    c["tol"] = opt.tol;
    return c;
}

void emit(const Options& opt, const std::string& text) {
    if (opt.out.empty())
        std::cout << text;
    else
        hcstab::write_file(opt.out, text);
}

/// Plain-text formats carry the resolved config as a leading comment line.
void emit_with_header(const Options& opt, const std::string& body) {
    emit(opt, "# config: " + resolved_config(opt).dump() + "\n" + body);
}

hcstab::MethodSpec resolve_method(const Options& opt) {
    if (opt.method == "sl-alpha") return hcstab::method_sl_alpha(opt.alpha);
    if (opt.method == "almost-standard") {
        std::string cond = opt.condition.empty() ? "always" : opt.condition;
        return hcstab::method_almost_standard(hcstab::make_sl(),
                                              hcstab::condition_by_name(cond));
    }
    return hcstab::method_standard(hcstab::linkage_by_name(opt.method));
}

json trace_to_json(const hcstab::RunTrace& trace) {
    json rounds = json::array();
    for (const auto& r : trace.rounds) {
        json jr;
        jr["level"] = r.level;
        jr["merge_edges"] = r.merge_edges;
        json blocks = json::array();
        for (const auto& b : r.partition.blocks) blocks.push_back(b);
        jr["partition"] = std::move(blocks);
        rounds.push_back(std::move(jr));
    }
    return rounds;
}

int cmd_validate(const Options& opt) {
    hcstab::FiniteMetricSpace m = hcstab::load_matrix(opt.input);
    json report;
    report["config"] = resolved_config(opt);
    report["points"] = m.size();
    report["labels"] = m.labels();
    report["diameter"] = m.diameter();
    report["is_ultrametric"] = hcstab::is_ultrametric(m);
    report["distance_set"] = hcstab::distance_set(m).values;
    emit(opt, report.dump(2) + "\n");
    return 0;
}

int cmd_cluster(const Options& opt) {
    hcstab::FiniteMetricSpace m = hcstab::load_matrix(opt.input);
    hcstab::ClusterResult result = resolve_method(opt).run(m);
    if (opt.format == "newick") {
        emit_with_header(opt, hcstab::to_newick(result.dendrogram) + "\n");
    } else if (opt.format == "merge-table" || opt.format == "csv") {
        emit_with_header(opt, hcstab::merge_table_to_csv(
                                  hcstab::to_merge_table(result.dendrogram)));
    } else {
        json report;
        report["config"] = resolved_config(opt);
        report["dendrogram"] = hcstab::dendrogram_to_json(result.dendrogram);
        report["trace"] = trace_to_json(result.trace);
        emit(opt, report.dump(2) + "\n");
    }
    return 0;
}

int cmd_gh(const Options& opt) {
    hcstab::FiniteMetricSpace a = hcstab::load_matrix(opt.input);
    hcstab::FiniteMetricSpace b = hcstab::load_matrix(opt.input2);
    hcstab::GHResult gh = hcstab::gh_exact(a, b, opt.budget);
    json report;
    report["config"] = resolved_config(opt);
    report["value"] = gh.value;
    report["exact"] = gh.exact;
    report["lower"] = gh.lower;
    report["nodes_explored"] = gh.nodes_explored;
    report["witness"] = gh.witness.pairs;
    emit(opt, report.dump(2) + "\n");
    if (opt.require_exact && !gh.exact) {
        std::cerr << "BudgetExceeded: search budget exhausted before certifying exactness\n";
        return 4;
    }
    return 0;
}

int cmd_path_scan(const Options& opt) {
    int alpha = static_cast<int>(opt.alpha);
    hcstab::BridgeSpace bridge = hcstab::prop_bridge_space(alpha, opt.gap);
    hcstab::PathSpec path =
        hcstab::make_bridge_spec(bridge.space, bridge.block1, bridge.block2);
    hcstab::MethodSpec method = opt.method == "sl-alpha"
                                    ? hcstab::method_sl_alpha(opt.alpha)
                                    : resolve_method(opt);
    hcstab::WitnessPair witness = hcstab::instability_scan(method, path, opt.tol);
    json report;
    report["config"] = resolved_config(opt);
    report["gap"] = opt.gap;
    report["delta"] = path.delta;
    report["r"] = path.r;
    report["s1"] = witness.s1;
    report["s2"] = witness.s2;
    report["input_gap"] = witness.input_gap;
    report["output_gap"] = witness.output_gap;
    report["output_gap_exact"] = witness.output_gap_exact;
    report["merged_at_r"] = {witness.merged_at_r_s1, witness.merged_at_r_s2};
    emit(opt, report.dump(2) + "\n");
    return 0;
}

int cmd_counterexample(const Options& opt) {
    json rows = json::array();
    std::string csv = "k,delta,input_gap_upper,cl_height,output_gap_lower,output_gap_upper,"
                      "output_gap_exact\n";
    for (int k = 0; k <= opt.kmax; ++k) {
        hcstab::CLFamily fam = hcstab::cl_counterexample(k);
        double input_upper = hcstab::gh_upper_from(fam.tau, fam.x, fam.u);
        hcstab::Ultrametric out =
            hcstab::eta(hcstab::run_standard(fam.x, hcstab::make_cl()).dendrogram);
        double cl_height = out.d(fam.x.index_of("a-2"), fam.x.index_of("b-2"));

        double lower, upper;
        bool exact = false;
        if (out.size() <= 8) {
            hcstab::GHResult gh = hcstab::gh_exact(out, fam.u, opt.budget);
            lower = gh.lower;
            upper = gh.value;
            exact = gh.exact;
        } else {
            lower = hcstab::gh_lower_bound(out, fam.u);
            upper = hcstab::gh_upper_from(hcstab::identity_correspondence(out.size()), out,
                                          fam.u);
        }
        json row;
        row["k"] = k;
        row["delta"] = fam.delta;
        row["input_gap_upper"] = input_upper;
        row["cl_height"] = cl_height;
        row["output_gap_lower"] = lower;
        row["output_gap_upper"] = upper;
        row["output_gap_exact"] = exact;
        rows.push_back(row);
        csv += std::to_string(k) + "," + json(fam.delta).dump() + "," +
               json(input_upper).dump() + "," + json(cl_height).dump() + "," +
               json(lower).dump() + "," + json(upper).dump() + "," +
               (exact ? "true" : "false") + "\n";
    }
    if (opt.format == "csv") {
        emit_with_header(opt, csv);
    } else {
        json report;
        report["config"] = resolved_config(opt);
        report["rows"] = std::move(rows);
        emit(opt, report.dump(2) + "\n");
    }
    return 0;
}

int cmd_probe(const Options& opt) {
    hcstab::FiniteMetricSpace m = hcstab::load_matrix(opt.input);
    const hcstab::Ultrametric& u = hcstab::as_ultrametric(m);
    std::vector<double> levels;
    {
        std::string item;
        std::istringstream is(opt.levels);
        while (std::getline(is, item, ',')) levels.push_back(std::stod(item));
    }
    hcstab::PerturbationReport report =
        hcstab::semistability_probe(u, resolve_method(opt), levels, opt.trials, opt.seed);

    if (opt.format == "csv") {
        std::string csv = "level,max_gh,mean_gh,exact\n";
        for (const auto& s : report.per_level)
            csv += json(s.level).dump() + "," + json(s.max_gh).dump() + "," +
                   json(s.mean_gh).dump() + "," + (s.exact ? "true" : "false") + "\n";
        emit_with_header(opt, csv);
    } else {
        json j;
        j["config"] = resolved_config(opt);
        j["trials"] = report.trials;
        json rows = json::array();
        for (const auto& s : report.per_level) {
            json row;
            row["level"] = s.level;
            row["max_gh"] = s.max_gh;
            row["mean_gh"] = s.mean_gh;
            row["exact"] = s.exact;
            rows.push_back(row);
        }
        j["levels"] = std::move(rows);
        emit(opt, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_harness(const Options& opt) {
    hcstab::HarnessReport report =
        hcstab::axiom_harness(hcstab::linkage_by_name(opt.method), opt.trials, opt.seed);
    json j;
    j["config"] = resolved_config(opt);
    j["trials"] = report.trials;
    j["representation_independent"] = report.representation_independent;
    j["monotonic"] = report.monotonic;
    j["scale_preserving"] = report.scale_preserving;
    j["all_passed"] = report.all_passed();
    if (!report.counterexample.empty()) j["counterexample"] = report.counterexample;
    emit(opt, j.dump(2) + "\n");
    return report.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linkage-based hierarchical clustering and stability experiments"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--method", opt.method,
                        "sl, cl, al, exotic, sl-alpha, almost-standard");
        cmd->add_option("--alpha", opt.alpha, "alpha for sl-alpha");
        cmd->add_option("--condition", opt.condition, "always or p-alpha:<a>");
        cmd->add_option("--format", opt.format, "json, csv, newick, merge-table");
        cmd->add_option("--seed", opt.seed, "random seed");
        cmd->add_option("--budget", opt.budget, "search node budget");
        cmd->add_option("--tol", opt.tol, "tolerance / bisection target");
        cmd->add_option("--out", opt.out, "output file (default stdout)");
    };

    auto* validate = app.add_subcommand("validate", "Validate a distance matrix");
    validate->add_option("--input", opt.input)->required();
    add_common(validate);

    auto* cluster = app.add_subcommand("cluster", "Run a clustering method");
    cluster->add_option("--input", opt.input)->required();
    add_common(cluster);

    auto* gh = app.add_subcommand("gh", "Gromov-Hausdorff distance between two spaces");
    gh->add_option("--input", opt.input)->required();
    gh->add_option("--input2", opt.input2)->required();
    gh->add_flag("--require-exact", opt.require_exact, "exit 4 unless certified exact");
    add_common(gh);

    auto* scan = app.add_subcommand("path-scan",
                                    "Instability scan on the bridge-space path");
    scan->add_option("--gap", opt.gap, "cross-distance excess of the bridge space");
    add_common(scan);

    auto* counter = app.add_subcommand("counterexample",
                                       "Complete-linkage counterexample family report");
    counter->add_option("--kmax", opt.kmax, "largest family index");
    add_common(counter);

    auto* probe = app.add_subcommand("probe", "Semi-stability perturbation probe");
    probe->add_option("--input", opt.input)->required();
    probe->add_option("--levels", opt.levels, "comma-separated noise levels");
    probe->add_option("--trials", opt.trials, "trials per level");
    add_common(probe);

    auto* harness = app.add_subcommand("harness", "Linkage axiom harness");
    harness->add_option("--trials", opt.trials, "random trials");
    add_common(harness);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) { opt.command = "validate"; return cmd_validate(opt); }
        if (cluster->parsed()) { opt.command = "cluster"; return cmd_cluster(opt); }
        if (gh->parsed()) { opt.command = "gh"; return cmd_gh(opt); }
        if (scan->parsed()) { opt.command = "path-scan"; opt.method = opt.method == "sl" && !scan->count("--method") ? "sl-alpha" : opt.method; return cmd_path_scan(opt); }
        if (counter->parsed()) { opt.command = "counterexample"; return cmd_counterexample(opt); }
        if (probe->parsed()) { opt.command = "probe"; return cmd_probe(opt); }
        if (harness->parsed()) { opt.command = "harness"; return cmd_harness(opt); }
    } catch (const hcstab::Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        if (e.code() == "NoBehaviorFlip") return 3;
        if (e.code() == "CliqueBudgetExceeded" || e.code() == "BudgetExceeded") return 4;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
