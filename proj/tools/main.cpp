#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dvrforms/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "dvrforms: classification of epsilon-hermitian forms over complete discrete "
        "valuation rings with involution"};
    app.require_subcommand(1);

    dvrforms::CliOptions opt;
    std::string output_mode = "text";
    int precision_override = 0;
    std::string witness_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--output", output_mode, "Output style: text or machine")
            ->check(CLI::IsMember({"text", "machine"}));
        cmd->add_option("--precision", precision_override,
                        "Override the working precision of the input ring");
    };

    std::string file_a, file_b, witness_file;
    std::string kind;
    std::int64_t p = 0;
    int precision = 0, epsilon = 0;
    std::string d_list;

    CLI::App* validate = app.add_subcommand("validate", "Check that a matrix is epsilon-hermitian");
    validate->add_option("file", file_a, "instance file")->required();
    add_common(validate);

    CLI::App* invariants =
        app.add_subcommand("invariants", "Compute the level dimensions d_i and residue data");
    invariants->add_option("file", file_a, "instance file")->required();
    add_common(invariants);

    CLI::App* nform = app.add_subcommand("normal-form", "Compute the canonical form and witness");
    nform->add_option("file", file_a, "instance file")->required();
    nform->add_option("--witness", witness_path, "write the change-of-basis witness to this file");
    add_common(nform);

    CLI::App* congruent = app.add_subcommand("congruent", "Decide *-congruence of two forms");
    congruent->add_option("fileA", file_a, "first instance file")->required();
    congruent->add_option("fileB", file_b, "second instance file")->required();
    congruent->add_option("--witness", witness_path, "write a congruence witness to this file");
    add_common(congruent);

    CLI::App* realisable =
        app.add_subcommand("realisable", "Decide whether a d-profile is realisable");
    realisable->add_option("kind", kind, "ring kind")->required();
    realisable->add_option("p", p, "odd prime")->required();
    realisable->add_option("precision", precision, "working precision")->required();
    realisable->add_option("epsilon", epsilon, "1 or -1")->required();
    realisable->add_option("d-list", d_list, "comma-separated sizes d_0,d_1,...")->required();
    add_common(realisable);

    CLI::App* verify = app.add_subcommand("verify", "Re-check a witness file: X'* A X = B");
    verify->add_option("fileA", file_a, "source instance file")->required();
    verify->add_option("fileB", file_b, "target instance file")->required();
    verify->add_option("witness", witness_file, "witness file")->required();
    add_common(verify);
    verify->group(""); // hidden utility command

    CLI11_PARSE(app, argc, argv);

    opt.machine = output_mode == "machine";
    if (precision_override > 0) opt.precision = precision_override;
    if (!witness_path.empty()) opt.witness_path = witness_path;

    if (validate->parsed()) return dvrforms::cmd_validate(file_a, opt, std::cout, std::cerr);
    if (invariants->parsed()) return dvrforms::cmd_invariants(file_a, opt, std::cout, std::cerr);
    if (nform->parsed()) return dvrforms::cmd_normal_form(file_a, opt, std::cout, std::cerr);
    if (congruent->parsed())
        return dvrforms::cmd_congruent(file_a, file_b, opt, std::cout, std::cerr);
    if (realisable->parsed())
        return dvrforms::cmd_realisable(kind, p, precision, epsilon, d_list, opt, std::cout,
                                        std::cerr);
    if (verify->parsed())
        return dvrforms::cmd_verify(file_a, file_b, witness_file, opt, std::cout, std::cerr);
    return 1;
}
