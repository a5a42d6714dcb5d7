#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ainf/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"A-infinity structure on Ext over F_p[a]/(a^q)"};
    ainf::RunConfig cfg;
    int truncation = 0;
    std::string mode = "reduced", f1 = "paper", output, query, input;
    bool serial = false;

    app.add_option("--p", cfg.p, "characteristic (prime)")->capture_default_str();
    app.add_option("--q", cfg.q, "nilpotency exponent, at least 3")->capture_default_str();
    app.add_option("--max-arity", cfg.max_arity, "highest arity to compute")->capture_default_str();
    app.add_option("--mode", mode, "reduced or brute-force")
        ->check(CLI::IsMember({"reduced", "brute-force"}))
        ->capture_default_str();
    app.add_option("--f1", f1, "cycle representatives: paper (closed form xi, eta) or auto")
        ->check(CLI::IsMember({"paper", "auto"}))
        ->capture_default_str();
    auto* trunc_opt = app.add_option("--truncation", truncation, "resolution length (default from max-arity)");
    app.add_flag("--verify", cfg.verify, "check the Stasheff identities on the result");
    app.add_option("--output", output, "write the structure file here");
    app.add_option("--query", query, "e.g. \"product (x,x,x,x)\" or \"map (x,x)\"");
    app.add_option("--input", input, "answer --query from this structure file instead of computing");
    app.add_flag("--serial", serial, "do not parallelize within an arity");

    CLI11_PARSE(app, argc, argv);

    if (trunc_opt->count())
        cfg.truncation = truncation;
    cfg.mode = ainf::parse_mode(mode);
    cfg.section = ainf::parse_section(f1);
    cfg.parallel = !serial;
    if (!output.empty())
        cfg.output = output;
    if (!query.empty())
        cfg.query = query;
    if (!input.empty())
        cfg.input = input;
    return ainf::run(cfg, std::cout, std::cerr);
}
