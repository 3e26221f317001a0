#pragma once

// Internal: minimal RFC 4180 helpers shared by the catalog loader and
// the report emitter.

#include <string>
#include <string_view>
#include <vector>

namespace dreadfuzz::csv {

inline std::string quote(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct Row {
    std::vector<std::string> fields;
    int line;  // 1-based line the row starts on
};

// Splits into rows honoring quoted fields (embedded commas, quotes and
// newlines). Returns false on a lone '"' that never closes; bad_line
// then holds its line. Empty unquoted rows are dropped.
inline bool split(std::string_view text, std::vector<Row>& rows,
                  int& bad_line) {
    rows.clear();
    Row row{{}, 1};
    std::string field;
    bool quoted = false;
    bool row_has_data = false;
    int line = 1;
    int quote_open_line = 0;

    std::size_t i = 0;
    const auto end_field = [&]() {
        row.fields.push_back(std::move(field));
        field.clear();
    };
    const auto end_row = [&]() {
        if (row_has_data || !row.fields.empty() || !field.empty()) {
            end_field();
            rows.push_back(std::move(row));
        }
        row = {{}, line};
        row_has_data = false;
    };

    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            if (c == '\n') ++line;
            field += c;
            ++i;
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                quote_open_line = line;
                row_has_data = true;
                ++i;
                break;
            case ',':
                end_field();
                row_has_data = true;
                ++i;
                break;
            case '\r':
                ++i;
                break;
            case '\n':
                ++line;
                end_row();
                row.line = line;
                ++i;
                break;
            default:
                field += c;
                row_has_data = true;
                ++i;
                break;
        }
    }
    if (quoted) {
        bad_line = quote_open_line;
        return false;
    }
    end_row();
    return true;
}

}  // namespace dreadfuzz::csv
