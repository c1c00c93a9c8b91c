#ifndef MDSL_TESTS_SUPPORT_HPP
#define MDSL_TESTS_SUPPORT_HPP

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mdsl/diagnostics.hpp"
#include "mdsl/emfatic.hpp"

namespace testing_support {

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data(const std::string& name)
{
    return std::string(MDSL_TEST_DATA) + "/" + name;
}

inline std::string sample(const std::string& name)
{
    return std::string(MDSL_SAMPLES) + "/" + name;
}

inline std::string show(const mdsl::Diagnostics& diags)
{
    std::string out;
    for (const auto& d : diags)
        out += mdsl::format_diagnostic(d) + "\n";
    return out;
}

/// Parses a metamodel or throws with the diagnostics.
inline std::shared_ptr<const mdsl::Metamodel> mm(const std::string& text, const std::string& name = "test")
{
    auto r = mdsl::parse_metamodel(text, name);
    if (!r)
        throw std::runtime_error(show(r.diagnostics()));
    return std::make_shared<const mdsl::Metamodel>(std::move(r).value());
}

}  // namespace testing_support

#endif
