#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace vqa {

/// Pipeline output: yes / no / a count / an attribute word / NULL.
class Answer {
public:
    enum class Kind : std::uint8_t { yes, no, number, attribute, null };

    static Answer yes() { return Answer(Kind::yes, 0, {}); }
    static Answer no() { return Answer(Kind::no, 0, {}); }
    static Answer boolean(bool b) { return b ? yes() : no(); }
    static Answer number(std::int64_t n) { return Answer(Kind::number, n, {}); }
    static Answer attribute(std::string word) { return Answer(Kind::attribute, 0, std::move(word)); }
    static Answer null() { return Answer(Kind::null, 0, {}); }

    Kind kind() const noexcept { return kind_; }
    bool is_null() const noexcept { return kind_ == Kind::null; }
    std::int64_t number_value() const noexcept { return number_; }
    const std::string& word() const noexcept { return word_; }

    /// "yes", "no", "3", "red" or "NULL".
    std::string to_string() const;

    /// Case-insensitive comparison against a dataset answer string. NULL
    /// matches nothing.
    bool matches(std::string_view ground_truth) const;

    friend bool operator==(const Answer&, const Answer&) = default;

private:
    Answer(Kind kind, std::int64_t n, std::string w) : kind_(kind), number_(n), word_(std::move(w)) {}

    Kind kind_;
    std::int64_t number_;
    std::string word_;
};

} // namespace vqa
