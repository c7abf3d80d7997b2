// codesign: command-line front end for the UAV compute co-design pipeline.
//
// Exit codes: 0 success, 1 usage, 2 config parse/validation, 3 model or I/O
// failure at run time.

#include <iostream>

#include "CLI11.hpp"
#include "codesign/errors.hpp"
#include "commands.hpp"

#ifndef CODESIGN_VERSION
#define CODESIGN_VERSION "unknown"
#endif

namespace {

CLI::Option* config_opt(CLI::App* sub, cli::fs::path& target) {
    return sub->add_option("-c,--config", target, "problem config (JSON)")->envname("CODESIGN_CONFIG")->required();
}

CLI::Option* out_opt(CLI::App* sub, cli::fs::path& target) {
    return sub->add_option("-o,--out", target, "output directory")->envname("CODESIGN_OUT")->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Co-design of UAV policies and accelerators"};
    app.set_version_flag("--version", std::string(CODESIGN_VERSION));
    app.require_subcommand(1);

    cli::ExploreArgs ex;
    auto* explore = app.add_subcommand("explore", "Bayesian-optimization search over the config's design space");
    config_opt(explore, ex.config);
    explore->add_option("-s,--seed", ex.seed, "override search.seed")->envname("CODESIGN_SEED");
    explore->add_option("-b,--budget", ex.budget, "override search.budget")->envname("CODESIGN_BUDGET");
    explore->add_option("-m,--method", ex.method, "bayesopt or random")->check(CLI::IsMember({"bayesopt", "random"}));
    out_opt(explore, ex.out);

    cli::SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "evaluate every point of a small design space");
    config_opt(sweep, sw.config);
    out_opt(sweep, sw.out);

    cli::SelectArgs sel;
    auto* select = app.add_subcommand("select", "pick the design that flies the most missions");
    config_opt(select, sel.config);
    select->add_option("-a,--archive", sel.archive, "archive.jsonl (default: the config's baselines)");
    select->add_flag("--fine-tune", sel.fine_tune, "retarget an over-provisioned choice to the knee");
    select->add_option("--target-node", sel.target_node_nm, "technology node for --fine-tune (nm)");
    out_opt(select, sel.out);

    cli::EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "evaluate one design (template and base accelerator plus --set)");
    config_opt(evaluate, ev.config);
    evaluate->add_option("--set", ev.overrides, "parameter override, e.g. array_rows=8 or dataflow=ws");
    evaluate->add_flag("--dump-layers", ev.dump_layers, "per-layer cycle and traffic table");
    evaluate->add_option("-o,--out", ev.out, "directory for layers.csv (default: stdout)")->envname("CODESIGN_OUT");

    cli::F1Args f1;
    auto* f1cmd = app.add_subcommand("f1", "safe velocity against action throughput");
    config_opt(f1cmd, f1.config);
    f1cmd->add_option("-p,--payload", f1.payload_g, "compute payload in grams (default: knee.reference_payload_g)");
    f1cmd->add_flag("--svg", f1.svg, "also write f1.svg");
    f1cmd->add_option("-a,--archive", f1.archive, "overlay the front of this archive (default: baselines)");
    f1cmd->add_option("--samples", f1.samples, "curve samples")->check(CLI::Range(2, 100000));
    out_opt(f1cmd, f1.out);

    cli::ReportArgs rep;
    auto* report = app.add_subcommand("report", "mission table across scenarios, relative to a baseline design");
    report->add_option("-c,--config", rep.configs, "problem config, repeatable")->required();
    report->add_option("-a,--archive", rep.archives, "archive per config; its selection is labeled 'selected'");
    report->add_option("--baseline", rep.baseline, "design label the ratios are taken against");
    out_opt(report, rep.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::ok : cli::usage;
    }

    try {
        if (*explore) return cli::cmd_explore(ex, std::cout);
        if (*sweep) return cli::cmd_sweep(sw, std::cout);
        if (*select) return cli::cmd_select(sel, std::cout);
        if (*evaluate) return cli::cmd_evaluate(ev, std::cout);
        if (*f1cmd) return cli::cmd_f1(f1, std::cout);
        if (*report) return cli::cmd_report(rep, std::cout);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return cli::usage;
    } catch (const codesign::ValidationError& e) {
        std::cerr << "invalid config:\n";
        for (const auto& i : e.issues()) std::cerr << "  " << (i.path.empty() ? "<root>" : i.path) << ": " << i.message << '\n';
        return cli::config;
    } catch (const codesign::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::runtime;
    }
    return cli::usage;
}
