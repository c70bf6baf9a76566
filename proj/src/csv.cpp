#include "execbench/csv.hpp"

#include "execbench/errors.hpp"

namespace execbench::csv {

Reader::Reader(std::istream& in, char separator) : in_(in), sep_(separator) {}

std::optional<Row> Reader::next() {
    Row row;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool any_char = false;
    record_line_ = line_;

    auto finish_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };

    int c;
    while ((c = in_.get()) != std::char_traits<char>::eof()) {
        const char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && field.empty() && !field_was_quoted) {
            in_quotes = true;
            field_was_quoted = true;
            any_char = true;
        } else if (ch == sep_) {
            finish_field();
            any_char = true;
        } else if (ch == '\r') {
            if (in_.peek() == '\n') continue;
            field.push_back(ch);
        } else if (ch == '\n') {
            ++line_;
            if (!any_char && row.empty()) {
                record_line_ = line_;
                continue;
            }
            finish_field();
            return row;
        } else {
            field.push_back(ch);
            any_char = true;
        }
    }
    if (in_quotes) {
        throw DataError("unterminated quoted field starting on line " +
                        std::to_string(record_line_));
    }
    if (!any_char && row.empty()) return std::nullopt;
    finish_field();
    return row;
}

std::string escape(std::string_view field, char separator) {
    const bool needs_quotes =
        field.find_first_of(std::string{separator, '"', '\n', '\r'}) != std::string_view::npos ||
        (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const Row& row, char separator) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.put(separator);
        out << escape(row[i], separator);
    }
    out.put('\n');
}

}  // namespace execbench::csv
