#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polyham {

struct SO5Label {
    int v = 0;
    int alpha = 1;
    int L = 0;
    auto operator<=>(const SO5Label&) const = default;
};

// (first ⊗ second → coupled)
struct CGKey {
    SO5Label first;
    SO5Label second;
    SO5Label coupled;
    auto operator<=>(const CGKey&) const = default;
};

std::string to_string(const SO5Label& label);
std::string to_string(const CGKey& key);

// SO(5) ⊃ SO(3) isoscalar factors.  Text format, one entry per line:
//   v1 alpha1 L1  v2 alpha2 L2  v3 alpha3 L3  value
// with '#' starting a comment.
class CGTable {
public:
    static CGTable parse(std::istream& in, const std::string& source = "<stream>");
    static CGTable load(const std::string& path);

    void insert(const CGKey& key, double value);
    std::optional<double> find(const CGKey& key) const;
    double at(const CGKey& key) const;  // throws MissingCoefficient

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::map<CGKey, double>& entries() const { return entries_; }

    struct BlockNorm {
        int v1;
        SO5Label second;
        SO5Label coupled;
        double sum_of_squares;
    };
    // Σ coeff² over (α1, L1) for each (v1, second, coupled) block.
    std::vector<BlockNorm> block_norms() const;

    void write(std::ostream& out) const;

private:
    std::map<CGKey, double> entries_;
};

}  // namespace polyham
