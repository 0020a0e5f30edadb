// qqtrop: solve, tropical-check and enumerate rank-one qq-/QQ-systems from JSON specs.

#include "qqtrop/pipeline.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <string>

using namespace qqtrop;

namespace {

int emit(const json& doc, const std::string& out_path)
{
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path);
    if (!out || !(out << text)) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 1;
    }
    return 0;
}

int fail_validation(const std::string& command, const SpecError& e, const std::string& out_path)
{
    std::cerr << "error: " << e.what() << "\n";
    emit(error_json(command, e.code, e.detail), out_path);
    return exit_code::validation;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Solver and verifier for rank-one qq- and QQ-systems"};
    app.set_version_flag("--version", std::string("qqtrop ") + kToolVersion);
    app.require_subcommand(1);

    std::string spec_path, out_path;
    int jobs = 1;
    bool skip_tropical = false, no_theorem_mode = false;

    auto* solve_cmd = app.add_subcommand("solve", "Lift, certify and Bethe-verify every base");
    solve_cmd->add_option("spec", spec_path, "Spec JSON file")->required();
    solve_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
    solve_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    solve_cmd->add_flag("--skip-tropical", skip_tropical, "Do not run the tropical check");

    auto* trop_cmd = app.add_subcommand("tropical", "Compute the tropical prevariety");
    trop_cmd->add_option("spec", spec_path, "Spec JSON file")->required();
    trop_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
    trop_cmd->add_flag("--no-theorem-mode", no_theorem_mode, "Allow vanishing coefficients d_k");

    auto* enum_cmd = app.add_subcommand("enumerate", "List the solutions of the infinite system");
    enum_cmd->add_option("spec", spec_path, "Spec JSON file")->required();
    enum_cmd->add_option("--out", out_path, "Write the listing here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code::validation;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (command == "solve") {
            const ProblemSpec spec = spec_from_json(read_json_file(spec_path));
            const SolveResult r = solve(spec, {jobs, !skip_tropical});
            for (const auto& f : r.failures)
                std::cerr << "base " << *f.base << ": " << f.code << ": " << f.detail << "\n";
            if (emit(report_json(r), out_path) != 0)
                return 1;
            return r.exit_code;
        }
        if (command == "tropical") {
            const ProblemSpec spec = spec_from_json(read_json_file(spec_path), false);
            const TropicalOutcome t = tropical_check(spec, !no_theorem_mode);
            if (t.status == "hypothesis_not_met" || t.status == "skipped")
                throw SpecError(t.status == "skipped" ? "size_cap_exceeded" : "zero_coefficient", t.detail);
            if (emit(tropical_json(spec, t), out_path) != 0)
                return 1;
            return t.status == "origin_only" ? exit_code::ok : exit_code::tropical_not_origin;
        }
        const ProblemSpec spec = spec_from_json(read_json_file(spec_path), false);
        return emit(enumerate_json(spec), out_path);
    } catch (const SpecError& e) {
        return fail_validation(command, e, out_path);
    }
}
