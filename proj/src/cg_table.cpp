#include "polyham/cg_table.hpp"

#include "polyham/error.hpp"

#include <array>
#include <tuple>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace polyham {

std::string to_string(const SO5Label& l) {
    return "(" + std::to_string(l.v) + "," + std::to_string(l.alpha) + "," +
           std::to_string(l.L) + ")";
}

std::string to_string(const CGKey& k) {
    return to_string(k.first) + " x " + to_string(k.second) + " -> " + to_string(k.coupled);
}

namespace {

template <typename T>
bool parse_number(const std::string& token, T& out) {
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

CGTable CGTable::parse(std::istream& in, const std::string& source) {
    CGTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string t; fields >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        if (tokens.size() != 10) {
            throw ConfigError(where + ": expected 9 labels and a value, got " +
                              std::to_string(tokens.size()) + " fields");
        }
        std::array<int, 9> n{};
        for (int i = 0; i < 9; ++i) {
            if (!parse_number(tokens[i], n[i])) {
                throw ConfigError(where + ": bad integer label '" + tokens[i] + "'");
            }
        }
        double value = 0.0;
        if (!parse_number(tokens[9], value)) {
            throw ConfigError(where + ": bad coefficient '" + tokens[9] + "'");
        }
        const CGKey key{{n[0], n[1], n[2]}, {n[3], n[4], n[5]}, {n[6], n[7], n[8]}};
        if (table.find(key)) throw ConfigError(where + ": duplicate entry " + to_string(key));
        table.insert(key, value);
    }
    return table;
}

CGTable CGTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CG table '" + path + "'");
    return parse(in, path);
}

void CGTable::insert(const CGKey& key, double value) { entries_[key] = value; }

std::optional<double> CGTable::find(const CGKey& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

double CGTable::at(const CGKey& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw MissingCoefficient(to_string(key));
    return it->second;
}

std::vector<CGTable::BlockNorm> CGTable::block_norms() const {
    std::map<std::tuple<int, SO5Label, SO5Label>, double> sums;
    for (const auto& [key, value] : entries_) {
        sums[{key.first.v, key.second, key.coupled}] += value * value;
    }
    std::vector<BlockNorm> out;
    for (const auto& [k, s] : sums) out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), s});
    return out;
}

void CGTable::write(std::ostream& out) const {
    out << "# v1 alpha1 L1  v2 alpha2 L2  v3 alpha3 L3  value\n";
    for (const auto& [k, value] : entries_) {
        out << k.first.v << ' ' << k.first.alpha << ' ' << k.first.L << "  " << k.second.v << ' '
            << k.second.alpha << ' ' << k.second.L << "  " << k.coupled.v << ' ' << k.coupled.alpha
            << ' ' << k.coupled.L << "  " << std::setprecision(17) << value << '\n';
    }
}

}  // namespace polyham
