#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "roso/vocabulary.hpp"

namespace roso::test {

inline const Catalog& catalog()
{
    static const Catalog c = Catalog::load();
    return c;
}

inline std::string read_fixture(const std::string& name)
{
    std::ifstream f(std::filesystem::path(ROSO_FIXTURE_DIR) / name, std::ios::binary);
    if (!f)
        throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace roso::test
