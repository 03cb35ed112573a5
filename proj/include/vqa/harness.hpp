#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vqa/answer.hpp"
#include "vqa/program.hpp"
#include "vqa/scene.hpp"

namespace vqa {

struct SceneSet {
    std::vector<SceneGraph> scenes;
    /// image_index -> position in `scenes`.
    std::map<std::int64_t, std::size_t> by_image;
};

struct Question {
    std::size_t index = 0;  // position in the questions file
    std::string text;
    std::int64_t image_index = 0;
    std::string answer;
    /// Unset when the program could not be read; `program_error` says why.
    std::optional<FunctionalProgram> program;
    std::string program_error;
};

/// Accepts `{"scenes": [...]}` or a single scene object. Throws IoError or
/// FormatError (with the file name and byte offset or scene position).
SceneSet load_scenes(const std::filesystem::path& path);
SceneSet scenes_from_json(const nlohmann::json& doc, const std::string& origin = "<json>");

/// Reads `{"questions": [...]}`. Programs that fail validation are kept
/// with `program_error` set so they count as failures, not abort the run.
std::vector<Question> load_questions(const std::filesystem::path& path);
std::vector<Question> questions_from_json(const nlohmann::json& doc, const std::string& origin = "<json>");

struct FamilyTally {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t null_count = 0;

    std::optional<double> accuracy() const
    {
        if (total == 0)
            return std::nullopt;
        return static_cast<double>(correct) / static_cast<double>(total);
    }

    friend bool operator==(const FamilyTally&, const FamilyTally&) = default;
};

struct EvalReport {
    std::map<QuestionFamily, FamilyTally> families;
    /// Questions whose program could not be classified.
    FamilyTally unclassified;
    double seconds = 0.0;

    EvalReport();
    FamilyTally overall() const;
    std::optional<double> accuracy() const { return overall().accuracy(); }
};

/// Rewrites the target sentence of question `index` before it is parsed
/// (only on the sentence path).
using SentenceFilter = std::function<std::string(std::size_t index, std::string sentence)>;

struct RunOptions {
    std::optional<std::size_t> limit;
    std::optional<QuestionFamily> family;
    /// Compile -> serialize -> parse -> infer instead of compile -> infer.
    bool via_sentence = false;
    /// Per-question rule dumps with solution sets.
    std::ostream* trace = nullptr;
    SentenceFilter sentence_filter;
};

struct QuestionOutcome {
    Answer answer = Answer::null();
    std::optional<QuestionFamily> family;
    bool correct = false;
    std::string error;
};

/// Parses a target sentence and answers it; any parse error yields NULL.
Answer answer_sentence(const FactBase& fb, std::string_view sentence, std::string* error = nullptr);

QuestionOutcome answer_question(const FactBase& fb, const Question& q, const RunOptions& opts);

EvalReport run_questions(const SceneSet& scenes, const std::vector<Question>& questions,
                         const RunOptions& opts);

EvalReport run_dataset(const std::filesystem::path& scenes_path,
                       const std::filesystem::path& questions_path, const RunOptions& opts);

enum class ReportFormat { text, json };

/// Text mirrors the usual per-family accuracy table (Count, Exist, Compare
/// Number, Compare Attribute, Query Attribute, Overall); empty columns read
/// "n/a". JSON keys are stable.
std::string emit_report(const EvalReport& report, ReportFormat format);
EvalReport report_from_json(const nlohmann::json& doc);

/// Bundled fixture directory, or $VQA_LOGIC_FIXTURES when set.
std::filesystem::path fixture_root();

} // namespace vqa
