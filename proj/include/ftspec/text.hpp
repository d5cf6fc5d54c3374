#pragma once

// Line tokenizer shared by the line-oriented text formats.

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftspec/error.hpp"

namespace ftspec::text {

/// Non-empty lines with '#' comments stripped, split on whitespace. Each entry
/// carries its 1-based line number.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> tokenize_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(pos, end - pos);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::istringstream is{std::string(line)};
        std::vector<std::string> tokens;
        for (std::string t; is >> t;) tokens.push_back(std::move(t));
        if (!tokens.empty()) out.emplace_back(line_no, std::move(tokens));
        if (end == text.size()) break;
        pos = end + 1;
    }
    return out;
}

inline std::size_t parse_count(const std::string& token, std::size_t line) {
    if (token.empty() || token.size() > 9 || token.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("expected a non-negative integer, got '" + token + "'", line);
    return static_cast<std::size_t>(std::stoul(token));
}

} // namespace ftspec::text
