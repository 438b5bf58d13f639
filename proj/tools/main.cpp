#include "torusbook/jsonio.hpp"
#include "torusbook/pipeline.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace torusbook;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitOracleMismatch = 2;
constexpr int kExitFixtureFailure = 3;

std::string read_graph_source(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

NormalForm parse_exponents(const std::string& text) {
    NormalForm w;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        std::erase_if(tok, [](unsigned char c) { return std::isspace(c); });
        w.exponents.emplace_back(tok);
    }
    if (w.exponents.empty()) throw std::invalid_argument("empty exponent list");
    return w;
}

void print_graph(const PlumbingGraph& g, bool json, bool dot) {
    if (dot) std::cout << to_dot(g);
    else if (json) std::cout << to_json(g) << "\n";
    else {
        std::cout << g.vertices.size() << " vertices:";
        for (const auto& v : g.vertices) std::cout << " (" << v.euler << "," << v.genus << ")";
        std::cout << "\n" << g.edges.size() << " edges:";
        for (const auto& e : g.edges)
            std::cout << " " << e.u << (e.sign > 0 ? "-+-" : "---") << e.v;
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"open books and homology oracles for torus bundles over the circle"};
    app.require_subcommand(1);

    bool json = false, dot = false;
    std::vector<std::string> relation_files, hint_files, disabled;
    int budget_depth = 12;
    app.add_flag("--json", json, "machine-readable output");
    app.add_flag("--dot", dot, "DOT output for graphs");
    app.add_option("--relations", relation_files, "relation file(s) to load");
    app.add_option("--hints", hint_files, "hint script file(s) to load");
    app.add_option("--disable", disabled, "relation name(s) to disable");
    app.add_option("--budget", budget_depth, "certifier search depth (default 12)");

    auto options = [&] {
        PipelineOptions opt;
        opt.relation_files = relation_files;
        opt.hint_files = hint_files;
        opt.disabled_relations = disabled;
        opt.budget.depth = budget_depth;
        return opt;
    };

    std::string matrix_text, exponents_text, graph_path, word_text;
    int arg_edge = 0, arg_eps = 1, arg_vertex = 0, arg_n = 0;

    CLI::App* dec = app.add_subcommand("decompose", "matrix -> generator normal form");
    dec->add_option("matrix", matrix_text, "a,b,c,d")->required();

    CLI::App* rec = app.add_subcommand("recompose", "normal form exponents -> matrix");
    rec->add_option("exponents", exponents_text, "a1,a2,...,ak")->required();

    CLI::App* plumb = app.add_subcommand("plumb", "normal form -> plumbing graph");
    plumb->add_option("exponents", exponents_text)->required();

    CLI::App* bup = app.add_subcommand("blowup", "blow up an edge or a leaf");
    bup->add_option("--graph", graph_path, "graph JSON file, - for stdin")->required();
    auto* bup_edge = bup->add_option("--edge", arg_edge, "edge id to blow up");
    auto* bup_leaf = bup->add_option("--leaf", arg_vertex, "vertex to attach a leaf to");
    bup->add_option("--eps", arg_eps, "+1 or -1 framing")->required();

    CLI::App* bdown = app.add_subcommand("blowdown", "blow down a +-1 vertex");
    bdown->add_option("--graph", graph_path)->required();
    bdown->add_option("--vertex", arg_vertex)->required();

    CLI::App* h1cmd = app.add_subcommand("h1", "first homology of a plumbing graph");
    auto* h1_graph = h1cmd->add_option("--graph", graph_path);
    auto* h1_nf = h1cmd->add_option("--nf", exponents_text, "normal form exponents");

    CLI::App* ob = app.add_subcommand("openbook", "open book of a plumbing graph");
    auto* ob_graph = ob->add_option("--graph", graph_path);
    auto* ob_nf = ob->add_option("--nf", exponents_text);

    CLI::App* cert = app.add_subcommand("certify", "contact-structure verdict for a word");
    cert->add_option("word", word_text, "e.g. \"d1 d2 a1^-3 a2^-3\"")->required();
    cert->add_option("--n", arg_n, "boundary circles of the surface")->required();

    CLI::App* pipe = app.add_subcommand("pipeline", "full matrix -> verdict run");
    pipe->add_option("matrix", matrix_text)->required();

    app.add_subcommand("fixtures", "run the pinned reference fixtures");

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (dec->parsed()) {
            Sl2Matrix m = parse_sl2(matrix_text);
            NormalForm w = decompose(m);
            bool ok = recompose(w) == m;
            if (!ok) throw std::logic_error("recomposition check failed");
            if (json) {
                nlohmann::json j;
                j["word"] = w.to_string();
                j["exponents"] = nlohmann::json::array();
                for (const Int& e : w.exponents) j["exponents"].push_back(json_int(e));
                j["recomposes"] = ok;
                std::cout << j.dump() << "\n";
            } else {
                std::cout << w.to_string() << "\n";
                std::cout << "recomposes to " << recompose(w).to_string() << " : ok\n";
            }
        } else if (rec->parsed()) {
            Sl2Matrix m = recompose(parse_exponents(exponents_text));
            std::cout << (json ? "[[" + m.a.str() + "," + m.b.str() + "],[" + m.c.str() +
                                     "," + m.d.str() + "]]"
                               : m.to_string())
                      << "\n";
        } else if (plumb->parsed()) {
            print_graph(from_normal_form(parse_exponents(exponents_text)), json, dot);
        } else if (bup->parsed()) {
            PlumbingGraph g = plumbing_from_json(read_graph_source(graph_path));
            if (bup_edge->count() == bup_leaf->count())
                throw std::invalid_argument("blowup: give exactly one of --edge/--leaf");
            PlumbingGraph up = bup_edge->count() ? blow_up_edge(g, arg_edge, arg_eps)
                                                 : blow_up_leaf(g, arg_vertex, arg_eps);
            print_graph(up, !dot, dot);
        } else if (bdown->parsed()) {
            PlumbingGraph g = plumbing_from_json(read_graph_source(graph_path));
            print_graph(blow_down(g, arg_vertex), !dot, dot);
        } else if (h1cmd->parsed()) {
            if (h1_graph->count() == h1_nf->count())
                throw std::invalid_argument("h1: give exactly one of --graph/--nf");
            PlumbingGraph g = h1_graph->count()
                                  ? plumbing_from_json(read_graph_source(graph_path))
                                  : from_normal_form(parse_exponents(exponents_text));
            std::cout << h1(g).to_string() << "\n";
        } else if (ob->parsed()) {
            if (ob_graph->count() == ob_nf->count())
                throw std::invalid_argument("openbook: give exactly one of --graph/--nf");
            PlumbingGraph g = ob_graph->count()
                                  ? plumbing_from_json(read_graph_source(graph_path))
                                  : from_normal_form(parse_exponents(exponents_text));
            OpenBook book = build_from_plumbing(g);
            if (json) std::cout << to_json(book) << "\n";
            else {
                OpenBookStats s = stats(book);
                std::cout << "page: genus " << s.genus << ", " << s.boundary
                          << " boundary circles\n";
                std::cout << "monodromy: " << render_monodromy(book) << "\n";
            }
        } else if (cert->parsed()) {
            PipelineOptions opt = options();
            RelationTable table = opt.make_table();
            HintRegistry hints = opt.make_hints();
            TwistWord w = parse_word(word_text, arg_n);
            Certificate c = certify_stein(w, table, opt.budget, &hints);
            std::cout << certificate_to_json(c) << "\n";
        } else if (pipe->parsed()) {
            PipelineReport r = run_pipeline(parse_sl2(matrix_text), options());
            std::cout << (json ? report_to_json(r) : report_to_text(r)) << "\n";
            if (!r.oracles_agree) return kExitOracleMismatch;
        } else {  // fixtures
            std::vector<FixtureResult> results = run_fixtures(options());
            bool all = true;
            if (json) {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& r : results) {
                    j.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
                    all &= r.pass;
                }
                std::cout << j.dump(2) << "\n";
            } else {
                for (const auto& r : results) {
                    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
                    if (!r.pass) std::cout << " -- " << r.detail;
                    std::cout << "\n";
                    all &= r.pass;
                }
            }
            if (!all) return kExitFixtureFailure;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return kExitOk;
}
