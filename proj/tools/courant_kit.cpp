// courant-kit: runs scenario documents against the library.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "courant/scenario.hpp"

namespace {

std::size_t max_dim_from_env() {
    const char* s = std::getenv("COURANT_KIT_MAX_DIM");
    if (!s || !*s) return 64;
    try {
        std::size_t pos = 0;
        unsigned long n = std::stoul(s, &pos);
        if (pos != std::string(s).size()) throw std::invalid_argument(s);
        return n;
    } catch (const std::exception&) {
        std::cerr << "courant-kit: ignoring malformed COURANT_KIT_MAX_DIM='" << s << "'\n";
        return 64;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks for quadratic spaces, relations and Courant algebroids over a point"};
    std::string input = "-";
    std::string output;
    std::string format = "json";
    bool strict = false;
    bool list = false;
    app.add_option("scenario", input, "scenario document, or - for stdin");
    app.add_option("-o,--output", output, "write the report here instead of stdout");
    app.add_option("-f,--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--strict", strict, "stop at the first failing command");
    app.add_flag("--list-verbs", list, "print the verbs and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (list) {
        for (const auto& v : courant::verbs()) std::cout << v.name << "\t" << v.summary << "\n";
        return 0;
    }

    std::string text;
    if (input == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(input, std::ios::binary);
        if (!in) {
            std::cerr << "courant-kit: cannot read " << input << "\n";
            return 2;
        }
        text.assign(std::istreambuf_iterator<char>(in), {});
    }

    courant::RunOptions opt;
    opt.max_dim = max_dim_from_env();
    opt.strict = strict;

    std::string rendered;
    int code = 0;
    try {
        courant::ScenarioDocument doc = courant::parse_document(text, opt);
        auto reports = courant::execute(doc, opt);
        code = courant::exit_code(reports);
        rendered = format == "json" ? courant::reports_json(reports).dump(2) + "\n" : courant::reports_text(reports);
    } catch (const courant::DocumentError& e) {
        code = 2;
        courant::Json errs = courant::Json::array();
        std::ostringstream txt;
        for (const auto& i : e.issues()) {
            errs.push_back({{"pointer", i.pointer}, {"message", i.message}});
            txt << "schema error at '" << i.pointer << "': " << i.message << "\n";
        }
        rendered = format == "json" ? courant::Json{{"status", "invalid"}, {"errors", errs}}.dump(2) + "\n" : txt.str();
    }

    if (output.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) {
            std::cerr << "courant-kit: cannot write " << output << "\n";
            return 2;
        }
        out << rendered;
    }
    return code;
}
