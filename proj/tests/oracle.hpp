#pragma once

// Loads the frozen reference tables under tests/oracles.

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

inline std::string path(const std::string& name) { return std::string(AMSEQ_ORACLE_DIR) + "/" + name; }

inline std::vector<std::vector<std::string>> rows(const std::string& name) {
    std::ifstream in(path(name));
    if (!in) throw std::runtime_error("missing oracle file " + name);
    std::vector<std::vector<std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> row;
        for (std::string w; ls >> w;) row.push_back(w);
        if (!row.empty()) out.push_back(std::move(row));
    }
    return out;
}

/// key value table
inline std::map<std::string, long double> values(const std::string& name) {
    std::map<std::string, long double> out;
    for (auto& r : rows(name)) out[r.at(0)] = std::stold(r.at(1));
    return out;
}

}  // namespace oracle
