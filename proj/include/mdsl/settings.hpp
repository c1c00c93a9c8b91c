#ifndef MDSL_SETTINGS_HPP
#define MDSL_SETTINGS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "mdsl/diagnostics.hpp"

namespace mdsl {

/// One `key = value` line of a settings file.
struct Setting {
    std::string key;
    std::string value;
    SourceLocation loc;
};

/// `key = value` lines; `#` starts a comment, blank lines are ignored. Malformed lines are
/// `config` errors in `phase`, reported next to the well-formed ones.
Result<std::vector<Setting>> parse_settings(std::string_view text, const std::string& file, Phase phase);

/// Comma-separated items, trimmed, empty items dropped.
std::vector<std::string> split_list(std::string_view text);
std::string join_list(const std::vector<std::string>& items);

}  // namespace mdsl

#endif
