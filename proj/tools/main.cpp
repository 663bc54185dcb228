#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mfdea/pipeline.hpp"

namespace {

struct CliState {
    mfdea::RunConfig cfg;
    std::string rule_text = "scott";
    std::string format_text = "json";
    std::string transform_text = "none";
};

void add_common_options(CLI::App* cmd, CliState& st) {
    cmd->add_option("--rule", st.rule_text,
                    "Bin-width rule: scott|fd|scott-single|sturges|fixed:<h>")
        ->capture_default_str();
    cmd->add_option("--q-min", st.cfg.q_min, "Smallest entropy order q")
        ->capture_default_str();
    cmd->add_option("--q-max", st.cfg.q_max, "Largest entropy order q")
        ->capture_default_str();
    cmd->add_option("--q-step", st.cfg.q_step, "q grid spacing")
        ->capture_default_str();
    cmd->add_option("--scales", st.cfg.scales,
                    "Explicit window scales (comma separated); default is the "
                    "geometric set 4,8,...,2^(floor(log2 N)-3)")
        ->delimiter(',');
    cmd->add_flag("--compat-r", st.cfg.compat_r,
                  "Legacy R conventions: N-s windows and floor(range/h)+1 bins");
    cmd->add_option("--seed", st.cfg.seed, "Random seed for synthetic inputs")
        ->capture_default_str();
    cmd->add_option("--format", st.format_text, "Output format: json|csv")
        ->capture_default_str();
    cmd->add_option("--output", st.cfg.output_path,
                    "Output path (default: stdout)");
    cmd->add_flag("--emit-surface", st.cfg.emit_surface,
                  "Also emit the raw H(q, s) entropy surface");
    cmd->add_flag("--allow-negative-q", st.cfg.allow_negative_q,
                  "Permit q < 0 (unreliable; gated deliberately)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Multifractal diffusion entropy analysis: delta(q), D(q), tau(q) and "
        "f(alpha) spectra with q-dependent optimal histogram bin widths"};
    app.require_subcommand(1);

    CliState st;

    CLI::App* analyze =
        app.add_subcommand("analyze", "Analyze a delimited text file");
    analyze->add_option("--input", st.cfg.input_path, "Input file")->required();
    analyze
        ->add_option("--column", st.cfg.column, "Column index or header name")
        ->capture_default_str();
    analyze
        ->add_option("--transform", st.transform_text,
                     "Transform: none|log-returns")
        ->capture_default_str();
    add_common_options(analyze, st);

    CLI::App* gauss = app.add_subcommand(
        "gaussian-walk", "Run the pipeline on i.i.d. standard normal draws");
    gauss->add_option("--n", st.cfg.generator.n, "Series length")->required();
    add_common_options(gauss, st);

    CLI::App* levy = app.add_subcommand(
        "levy-walk", "Run the pipeline on i.i.d. symmetric stable draws");
    levy->add_option("--n", st.cfg.generator.n, "Series length")->required();
    levy->add_option("--mu", st.cfg.generator.mu, "Stability index in (0,2]")
        ->required();
    levy->add_option("--levy-scale", st.cfg.generator.levy_scale,
                     "Levy scale parameter")
        ->capture_default_str();
    add_common_options(levy, st);

    CLI::App* multi = app.add_subcommand(
        "multiscale",
        "Run the pipeline on a multi-scale stable series (one window scale)");
    multi
        ->add_option("--profile", st.cfg.generator.profile,
                     "Piecewise-constant mu profile, e.g. 4:2.0,64:1.5")
        ->required();
    multi->add_option("--window", st.cfg.generator.window, "Window scale s")
        ->required();
    multi
        ->add_option("--horizon", st.cfg.generator.horizon,
                     "Horizon t (multiple of the window)")
        ->required();
    add_common_options(multi, st);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gauss->parsed()) {
            st.cfg.generator.kind = mfdea::GeneratorSpec::Kind::gaussian_walk;
        } else if (levy->parsed()) {
            st.cfg.generator.kind = mfdea::GeneratorSpec::Kind::levy_walk;
        } else if (multi->parsed()) {
            st.cfg.generator.kind = mfdea::GeneratorSpec::Kind::multiscale;
        }
        if (analyze->parsed()) {
            if (st.transform_text == "none") {
                st.cfg.transform = mfdea::Transform::none;
            } else if (st.transform_text == "log-returns") {
                st.cfg.transform = mfdea::Transform::log_returns;
            } else {
                throw mfdea::config_error("unknown transform '" +
                                          st.transform_text + "'");
            }
        }
        if (st.format_text == "json") {
            st.cfg.format = mfdea::OutputFormat::json;
        } else if (st.format_text == "csv") {
            st.cfg.format = mfdea::OutputFormat::csv;
        } else {
            throw mfdea::config_error("unknown format '" + st.format_text + "'");
        }
        st.cfg.rule = mfdea::BinWidthRule::parse(st.rule_text);

        const mfdea::Report report = mfdea::run(st.cfg);
        mfdea::write_report(report, st.cfg);
        return 0;
    } catch (const mfdea::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const mfdea::data_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const mfdea::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
