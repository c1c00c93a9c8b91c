#include "mdsl/settings.hpp"

#include <sstream>

namespace mdsl {

namespace {

std::string trim(std::string_view s)
{
    const char* ws = " \t\r";
    std::size_t b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    return std::string(s.substr(b, s.find_last_not_of(ws) - b + 1));
}

}  // namespace

Result<std::vector<Setting>> parse_settings(std::string_view text, const std::string& file, Phase phase)
{
    std::vector<Setting> out;
    Diagnostics diags;
    std::istringstream in{std::string(text)};
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        std::string body = trim(std::string_view(line).substr(0, line.find('#')));
        if (body.empty())
            continue;
        SourceLocation loc{file, lineno, 1};
        std::size_t eq = body.find('=');
        if (eq == std::string::npos || eq == 0) {
            diags.push_back(make_error(phase, "config", "expected 'key = value'", loc));
            continue;
        }
        out.push_back(Setting{trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)), loc});
    }
    return {std::move(out), std::move(diags)};
}

std::vector<std::string> split_list(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = text.find(',', start);
        std::string item = trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (!item.empty())
            out.push_back(item);
        if (comma == std::string_view::npos)
            return out;
        start = comma + 1;
    }
}

std::string join_list(const std::vector<std::string>& items)
{
    std::string out;
    for (const std::string& i : items)
        out += (out.empty() ? "" : ", ") + i;
    return out;
}

}  // namespace mdsl
