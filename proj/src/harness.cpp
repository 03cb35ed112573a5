#include "vqa/harness.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "vqa/compiler.hpp"
#include "vqa/error.hpp"
#include "vqa/inference.hpp"
#include "vqa/sentence.hpp"

#ifndef VQA_LOGIC_FIXTURE_DIR
#define VQA_LOGIC_FIXTURE_DIR "fixtures"
#endif

namespace vqa {

namespace {

nlohmann::json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("error reading " + path.string());
    try {
        return nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

nlohmann::json tally_json(const FamilyTally& t)
{
    nlohmann::json j = {{"total", t.total}, {"correct", t.correct}, {"null", t.null_count}};
    if (auto acc = t.accuracy())
        j["accuracy"] = *acc;
    else
        j["accuracy"] = nullptr;
    return j;
}

FamilyTally tally_from_json(const nlohmann::json& j)
{
    FamilyTally t;
    t.total = j.at("total").get<std::size_t>();
    t.correct = j.at("correct").get<std::size_t>();
    t.null_count = j.at("null").get<std::size_t>();
    return t;
}

std::string percent(const FamilyTally& t)
{
    auto acc = t.accuracy();
    if (!acc)
        return "n/a";
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << *acc * 100.0;
    return os.str();
}

} // namespace

SceneSet scenes_from_json(const nlohmann::json& doc, const std::string& origin)
{
    SceneSet set;
    std::vector<const nlohmann::json*> records;
    if (doc.is_object() && doc.contains("scenes")) {
        const auto& scenes = doc.at("scenes");
        if (!scenes.is_array())
            throw FormatError(origin + ": 'scenes' is not an array");
        for (const auto& s : scenes)
            records.push_back(&s);
    } else if (doc.is_object() && doc.contains("objects")) {
        records.push_back(&doc);
    } else {
        throw FormatError(origin + ": expected a 'scenes' array or a single scene");
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = *records[i];
        try {
            set.scenes.push_back(scene_from_json(rec));
        } catch (const MalformedScene& e) {
            throw FormatError(origin + ": scenes[" + std::to_string(i) + "]: " + e.what());
        }
        std::int64_t image = static_cast<std::int64_t>(i);
        if (auto it = rec.find("image_index"); it != rec.end() && it->is_number_integer())
            image = it->get<std::int64_t>();
        if (!set.by_image.emplace(image, i).second)
            throw FormatError(origin + ": duplicate image_index " + std::to_string(image));
    }
    return set;
}

SceneSet load_scenes(const std::filesystem::path& path)
{
    return scenes_from_json(read_json(path), path.string());
}

std::vector<Question> questions_from_json(const nlohmann::json& doc, const std::string& origin)
{
    if (!doc.is_object() || !doc.contains("questions") || !doc.at("questions").is_array())
        throw FormatError(origin + ": expected a 'questions' array");
    std::vector<Question> out;
    const auto& items = doc.at("questions");
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& j = items[i];
        const std::string where = origin + ": questions[" + std::to_string(i) + "]";
        if (!j.is_object())
            throw FormatError(where + " is not an object");
        Question q;
        q.index = i;
        if (auto t = j.find("question"); t != j.end() && t->is_string())
            q.text = t->get<std::string>();
        auto answer = j.find("answer");
        if (answer == j.end() || !answer->is_string())
            throw FormatError(where + ": missing 'answer'");
        q.answer = answer->get<std::string>();
        auto image = j.find("image_index");
        if (image == j.end() || !image->is_number_integer())
            throw FormatError(where + ": missing 'image_index'");
        q.image_index = image->get<std::int64_t>();
        auto program = j.find("program");
        if (program == j.end())
            throw FormatError(where + ": missing 'program'");
        try {
            q.program = FunctionalProgram::from_json(*program);
        } catch (const Error& e) {
            q.program_error = e.what();
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<Question> load_questions(const std::filesystem::path& path)
{
    return questions_from_json(read_json(path), path.string());
}

EvalReport::EvalReport()
{
    for (auto f : all_families)
        families[f] = {};
}

FamilyTally EvalReport::overall() const
{
    FamilyTally sum = unclassified;
    for (const auto& [f, t] : families) {
        sum.total += t.total;
        sum.correct += t.correct;
        sum.null_count += t.null_count;
    }
    return sum;
}

Answer answer_sentence(const FactBase& fb, std::string_view sentence, std::string* error)
{
    try {
        RuleProgram program = parse(sentence);
        Evaluation ev = evaluate(fb, program);
        if (error)
            *error = ev.error;
        return ev.answer;
    } catch (const ParseError& e) {
        if (error)
            *error = e.what();
        return Answer::null();
    }
}

QuestionOutcome answer_question(const FactBase& fb, const Question& q, const RunOptions& opts)
{
    QuestionOutcome out;
    if (!q.program) {
        out.error = q.program_error;
        return out;
    }
    out.family = classify(*q.program);
    std::ostream* trace = opts.trace;
    if (trace)
        *trace << "# question " << q.index << ": " << q.text << '\n';
    try {
        RuleProgram program = compile(*q.program);
        if (opts.via_sentence) {
            std::string sentence = serialize(program);
            if (opts.sentence_filter)
                sentence = opts.sentence_filter(q.index, std::move(sentence));
            if (trace)
                *trace << "sentence: " << sentence << '\n';
            try {
                RuleProgram decoded = parse(sentence);
                Evaluation ev = evaluate(fb, decoded);
                out.answer = ev.answer;
                out.error = ev.error;
                if (trace)
                    *trace << render_trace(decoded, ev);
            } catch (const ParseError& e) {
                out.answer = Answer::null();
                out.error = e.what();
            }
        } else {
            Evaluation ev = evaluate(fb, program);
            out.answer = ev.answer;
            out.error = ev.error;
            if (trace)
                *trace << render_trace(program, ev);
        }
    } catch (const Error& e) {
        out.answer = Answer::null();
        out.error = e.what();
    }
    out.correct = out.answer.matches(q.answer);
    if (trace) {
        *trace << "expected: " << q.answer << (out.correct ? "  [ok]" : "  [WRONG]");
        if (!out.error.empty())
            *trace << "  (" << out.error << ")";
        *trace << "\n\n";
    }
    return out;
}

EvalReport run_questions(const SceneSet& scenes, const std::vector<Question>& questions,
                         const RunOptions& opts)
{
    auto start = std::chrono::steady_clock::now();
    EvalReport report;
    std::map<std::size_t, FactBase> cache;
    std::size_t processed = 0;

    for (const auto& q : questions) {
        if (opts.limit && processed >= *opts.limit)
            break;
        std::optional<QuestionFamily> family;
        if (q.program)
            family = classify(*q.program);
        if (opts.family && family != opts.family)
            continue;
        ++processed;

        QuestionOutcome outcome;
        outcome.family = family;
        auto scene = scenes.by_image.find(q.image_index);
        if (scene == scenes.by_image.end()) {
            outcome.error = "no scene for image_index " + std::to_string(q.image_index);
        } else {
            try {
                auto it = cache.find(scene->second);
                if (it == cache.end())
                    it = cache.emplace(scene->second, FactBase::from_scene(scenes.scenes[scene->second])).first;
                outcome = answer_question(it->second, q, opts);
            } catch (const MalformedScene& e) {
                outcome.error = e.what();
            }
        }

        FamilyTally& t = outcome.family ? report.families[*outcome.family] : report.unclassified;
        ++t.total;
        t.correct += outcome.correct;
        t.null_count += outcome.answer.is_null();
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

EvalReport run_dataset(const std::filesystem::path& scenes_path,
                       const std::filesystem::path& questions_path, const RunOptions& opts)
{
    auto start = std::chrono::steady_clock::now();
    SceneSet scenes = load_scenes(scenes_path);
    auto questions = load_questions(questions_path);
    EvalReport report = run_questions(scenes, questions, opts);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string emit_report(const EvalReport& report, ReportFormat format)
{
    if (format == ReportFormat::json) {
        nlohmann::json j;
        for (const auto& [f, t] : report.families)
            j["families"][std::string(key_name(f))] = tally_json(t);
        j["unclassified"] = tally_json(report.unclassified);
        j["overall"] = tally_json(report.overall());
        j["seconds"] = report.seconds;
        return j.dump(2) + "\n";
    }

    std::vector<std::pair<std::string, FamilyTally>> columns;
    for (auto f : all_families)
        columns.emplace_back(std::string(display_name(f)), report.families.at(f));
    columns.emplace_back("Overall", report.overall());

    std::ostringstream os;
    auto row = [&](const std::string& label, auto cell) {
        os << std::left << std::setw(14) << label << std::right;
        for (const auto& [name, t] : columns)
            os << "  " << std::setw(static_cast<int>(name.size())) << cell(t);
        os << '\n';
    };
    os << std::setw(14) << "";
    for (const auto& [name, t] : columns)
        os << "  " << name;
    os << '\n';
    row("accuracy (%)", [](const FamilyTally& t) { return percent(t); });
    row("correct", [](const FamilyTally& t) { return std::to_string(t.correct); });
    row("total", [](const FamilyTally& t) { return std::to_string(t.total); });
    row("null", [](const FamilyTally& t) { return std::to_string(t.null_count); });
    if (report.unclassified.total > 0)
        os << "unclassified: " << report.unclassified.total << " question(s), counted in Overall\n";
    os << "time: " << std::fixed << std::setprecision(3) << report.seconds << " s\n";
    return os.str();
}

EvalReport report_from_json(const nlohmann::json& doc)
{
    EvalReport r;
    for (auto f : all_families) {
        const auto& fam = doc.at("families");
        if (auto it = fam.find(std::string(key_name(f))); it != fam.end())
            r.families[f] = tally_from_json(*it);
    }
    if (auto it = doc.find("unclassified"); it != doc.end())
        r.unclassified = tally_from_json(*it);
    r.seconds = doc.value("seconds", 0.0);
    return r;
}

std::filesystem::path fixture_root()
{
    if (const char* env = std::getenv("VQA_LOGIC_FIXTURES"); env != nullptr && *env != '\0')
        return env;
    return VQA_LOGIC_FIXTURE_DIR;
}

} // namespace vqa
