// vqa-logic: run the scene-graph / functional-program logic pipeline.
//
//   vqa-logic run [--scenes P] [--questions P] [--limit N] [--family F]
//                 [--via-sentence] [--report text|json] [--trace]
//   vqa-logic compile --question-index I [--questions P]
//   vqa-logic parse '<sentence>'

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vqa/compiler.hpp"
#include "vqa/error.hpp"
#include "vqa/harness.hpp"
#include "vqa/sentence.hpp"

namespace {

std::filesystem::path or_fixture(const std::string& given, const char* fallback)
{
    return given.empty() ? vqa::fixture_root() / fallback : std::filesystem::path(given);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Answer visual questions by compiling CLEVR programs to logic rules"};
    app.require_subcommand(1);

    std::string scenes_path;
    std::string questions_path;
    std::optional<std::size_t> limit;
    std::string family;
    bool via_sentence = false;
    std::string report_format = "text";
    bool trace = false;

    auto* run = app.add_subcommand("run", "Evaluate a question set and print accuracy per family");
    run->add_option("--scenes", scenes_path, "CLEVR scenes JSON (default: bundled fixture)");
    run->add_option("--questions", questions_path, "CLEVR questions JSON (default: bundled fixture)");
    run->add_option("--limit", limit, "Evaluate at most N questions");
    run->add_option("--family", family,
                    "Only one family: count, exist, compare_number, compare_attribute, query_attribute");
    run->add_flag("--via-sentence", via_sentence, "Round-trip each program through its target sentence");
    run->add_option("--report", report_format, "Report format")->check(CLI::IsMember({"text", "json"}));
    run->add_flag("--trace", trace, "Print rules and solution sets per question");

    std::size_t question_index = 0;
    auto* compile_cmd = app.add_subcommand("compile", "Print the rules and target sentence of one question");
    compile_cmd->add_option("--question-index", question_index, "Position in the questions file")->required();
    compile_cmd->add_option("--questions", questions_path, "CLEVR questions JSON (default: bundled fixture)");

    std::string sentence;
    auto* parse_cmd = app.add_subcommand("parse", "Reconstruct the rules encoded by a target sentence");
    parse_cmd->add_option("sentence", sentence, "Target sentence")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            vqa::RunOptions opts;
            opts.limit = limit;
            opts.via_sentence = via_sentence;
            if (!family.empty())
                opts.family = vqa::family_from_string(family);
            if (trace)
                opts.trace = &std::cout;
            auto report = vqa::run_dataset(or_fixture(scenes_path, "clevr_scenes.json"),
                                           or_fixture(questions_path, "clevr_questions.json"), opts);
            std::cout << vqa::emit_report(report, report_format == "json" ? vqa::ReportFormat::json
                                                                           : vqa::ReportFormat::text);
            return 0;
        }
        if (compile_cmd->parsed()) {
            auto questions = vqa::load_questions(or_fixture(questions_path, "clevr_questions.json"));
            if (question_index >= questions.size()) {
                std::cerr << "question index " << question_index << " out of range (" << questions.size()
                          << " questions)\n";
                return 1;
            }
            const auto& q = questions[question_index];
            if (!q.program) {
                std::cerr << "question " << question_index << ": " << q.program_error << '\n';
                return 1;
            }
            auto program = vqa::compile(*q.program);
            std::cout << "question: " << q.text << '\n'
                      << "family:   " << vqa::display_name(vqa::classify(*q.program)) << '\n'
                      << vqa::to_string(program) << "sentence: " << vqa::serialize(program) << '\n';
            return 0;
        }
        if (parse_cmd->parsed()) {
            std::cout << vqa::to_string(vqa::parse(sentence));
            return 0;
        }
    } catch (const vqa::ParseError& e) {
        std::cerr << "NULL: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
