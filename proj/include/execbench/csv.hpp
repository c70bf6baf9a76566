#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace execbench::csv {

using Row = std::vector<std::string>;

// Streaming RFC-4180 reader. Quoted fields may contain separators, doubled
// quotes and line breaks. Accepts both LF and CRLF record terminators.
class Reader {
public:
    explicit Reader(std::istream& in, char separator = ',');

    // Next record, or nullopt at end of input. Blank lines are skipped.
    std::optional<Row> next();

    // 1-based physical line on which the last returned record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    char sep_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
};

// Quote a field if it contains the separator, a quote, or a line break.
std::string escape(std::string_view field, char separator = ',');

void write_row(std::ostream& out, const Row& row, char separator = ',');

}  // namespace execbench::csv
