#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ontoir/cli.hpp"

namespace cli = ontoir::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Entity retrieval over inferred triple graphs"};
    app.require_subcommand(1);

    std::vector<std::string> inputs;
    std::string rules;
    std::string output;
    std::string index_dir;
    std::string query;
    std::string queries;
    std::string qrels;
    ontoir::IndexKind kind = ontoir::IndexKind::Basic;
    cli::OutputFormat format = cli::OutputFormat::Tsv;

    const std::map<std::string, ontoir::IndexKind> kinds{{"basic", ontoir::IndexKind::Basic},
                                                         {"rules", ontoir::IndexKind::Rules}};
    const std::map<std::string, cli::OutputFormat> formats{{"tsv", cli::OutputFormat::Tsv},
                                                           {"json", cli::OutputFormat::Json}};

    auto* infer = app.add_subcommand("infer", "Apply rules and print the fixpoint graph as N-Triples");
    infer->add_option("inputs", inputs, "N-Triples files");
    infer->add_option("--rules", rules, "Rule file");
    infer->add_option("-o,--output", output, "Output file (default: stdout)");

    auto* index = app.add_subcommand("index", "Build and persist an index");
    index->add_option("inputs", inputs, "N-Triples files");
    index->add_option("--rules", rules, "Rule file (rules and @pattern blocks)");
    index->add_option("--index", index_dir, "Index directory")->required();
    index->add_option("--kind", kind, "basic or rules")->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case));

    auto* query_cmd = app.add_subcommand("query", "Evaluate one keyword query");
    query_cmd->add_option("query", query, "Query string")->required();
    query_cmd->add_option("--index", index_dir, "Index directory")->required();
    query_cmd->add_option("--format", format, "tsv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

    auto* repl = app.add_subcommand("repl", "Read queries from stdin, one per line");
    repl->add_option("--index", index_dir, "Index directory")->required();
    repl->add_option("--format", format, "tsv or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

    auto* eval = app.add_subcommand("eval", "Report precision, recall and F-measure");
    eval->add_option("--index", index_dir, "Index directory")->required();
    eval->add_option("--queries", queries, "query_id<TAB>query lines")->required();
    eval->add_option("--qrels", qrels, "query_id<TAB>fingerprint<TAB>label lines")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? cli::exit_ok : cli::exit_input;
    }

    std::vector<cli::fs::path> paths(inputs.begin(), inputs.end());
    auto optional_path = [](const std::string& s) -> std::optional<cli::fs::path> {
        if (s.empty()) {
            return std::nullopt;
        }
        return cli::fs::path(s);
    };

    if (infer->parsed()) {
        return cli::cmd_infer(paths, optional_path(rules), optional_path(output), std::cout, std::cerr);
    }
    if (index->parsed()) {
        return cli::cmd_index(paths, optional_path(rules), index_dir, kind, std::cerr);
    }
    if (query_cmd->parsed()) {
        return cli::cmd_query(index_dir, query, format, std::cout, std::cerr);
    }
    if (repl->parsed()) {
        return cli::cmd_repl(index_dir, std::cin, std::cout, std::cerr, format);
    }
    return cli::cmd_eval(index_dir, queries, qrels, std::cout, std::cerr);
}
