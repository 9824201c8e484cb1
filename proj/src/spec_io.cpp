#include "polyham/spec_io.hpp"

#include "polyham/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace polyham::hamiltonian {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

class ExpressionParser {
public:
    ExpressionParser(const std::string& text, const std::map<std::string, double>& params)
        : s_(text), params_(params) {}

    double parse() {
        const double v = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression '" + s_ + "': " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double sum() {
        double v = product();
        for (;;) {
            if (accept('+')) v += product();
            else if (accept('-')) v -= product();
            else return v;
        }
    }

    double product() {
        double v = unary();
        for (;;) {
            if (accept('*')) v *= unary();
            else if (accept('/')) v /= unary();
            else return v;
        }
    }

    double unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    double power() {
        const double base = atom();
        if (accept('^')) return std::pow(base, unary());
        return base;
    }

    double atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (accept('(')) {
            const double v = sum();
            if (!accept(')')) fail("missing ')'");
            return v;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (ec != std::errc()) fail("bad number");
            pos_ = ptr - s_.data();
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "sqrt") {
                if (!accept('(')) fail("sqrt needs parentheses");
                const double v = sum();
                if (!accept(')')) fail("missing ')'");
                return std::sqrt(v);
            }
            auto it = params_.find(name);
            if (it == params_.end()) fail("unknown parameter '" + name + "'");
            return it->second;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    const std::map<std::string, double>& params_;
    std::size_t pos_ = 0;
};

RadialFactor parse_factor(const std::string& raw, const std::string& where) {
    const std::string f = trim(raw);
    if (f == "laplacian") return RadialFactor::laplacian();
    if (f == "d2dr2") return RadialFactor::d2dr2();
    if (f == "ddr") return RadialFactor::ddr();
    if (f == "1") return RadialFactor::r_power(0);
    if (f == "r") return RadialFactor::r_power(1);
    if (f == "1/r") return RadialFactor::r_power(-1);
    auto parse_int = [&](const std::string& s) {
        int k = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw ConfigError(where + ": bad radial factor '" + f + "'");
        }
        return k;
    };
    if (f.rfind("1/r^", 0) == 0) return RadialFactor::r_power(-parse_int(f.substr(4)));
    if (f.rfind("r^", 0) == 0) return RadialFactor::r_power(parse_int(f.substr(2)));
    throw ConfigError(where + ": unknown radial factor '" + f + "'");
}

OrbitalTensor parse_orbital(const std::string& raw, const std::string& where) {
    const std::string o = trim(raw);
    if (o == "scalar") return OrbitalTensor::scalar;
    if (o == "crystal_field") return OrbitalTensor::crystal_field;
    if (o == "triple_q") return OrbitalTensor::triple_q;
    throw ConfigError(where + ": unknown orbital tensor '" + o + "'");
}

}  // namespace

double evaluate_expression(const std::string& text, const std::map<std::string, double>& params) {
    return ExpressionParser(text, params).parse();
}

HamiltonianSpec parse_spec(std::istream& in, const std::string& source, const Overrides& overrides) {
    HamiltonianSpec spec;
    struct PendingTerm {
        std::string expr;
        std::vector<RadialFactor> radial;
        OrbitalTensor orbital;
        std::string where;
    };
    std::vector<PendingTerm> pending;
    std::set<std::string> seen_keys;
    bool have_dimension = false;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.rfind("term", 0) == 0 && line.size() > 4 && std::isspace(static_cast<unsigned char>(line[4]))) {
            const std::string body = line.substr(5);
            const auto colon = body.find(':');
            if (colon == std::string::npos) throw ConfigError(where + ": term needs ':'");
            PendingTerm t;
            t.expr = trim(body.substr(0, colon));
            t.where = where;
            std::string rest = body.substr(colon + 1);
            t.orbital = OrbitalTensor::scalar;
            if (auto at = rest.find('@'); at != std::string::npos) {
                t.orbital = parse_orbital(rest.substr(at + 1), where);
                rest = rest.substr(0, at);
            }
            std::stringstream ss(rest);
            std::string piece;
            while (std::getline(ss, piece, '*')) {
                if (trim(piece).empty()) throw ConfigError(where + ": empty radial factor");
                const RadialFactor f = parse_factor(piece, where);
                if (f.kind == RadialFactor::Kind::power && f.power == 0) continue;
                t.radial.push_back(f);
            }
            if (t.expr.empty()) throw ConfigError(where + ": term needs a coefficient");
            pending.push_back(std::move(t));
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError(where + ": missing value");

        if (key.rfind("param", 0) == 0 && key.size() > 5 && std::isspace(static_cast<unsigned char>(key[5]))) {
            const std::string name = trim(key.substr(6));
            if (!is_identifier(name) || name == "sqrt") {
                throw ConfigError(where + ": bad parameter name '" + name + "'");
            }
            if (spec.parameters.count(name)) {
                throw ConfigError(where + ": parameter '" + name + "' defined twice");
            }
            auto ov = overrides.find(name);
            spec.parameters[name] =
                ov != overrides.end() ? ov->second : evaluate_expression(value, spec.parameters);
            continue;
        }
        if (!seen_keys.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
        if (key == "dimension") {
            int n = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
            if (ec != std::errc() || ptr != value.data() + value.size()) {
                throw ConfigError(where + ": dimension must be an integer");
            }
            spec.dimension = n;
            have_dimension = true;
        } else if (key == "mass") {
            if (spec.parameters.count("M")) throw ConfigError(where + ": parameter 'M' defined twice");
            auto ov = overrides.find("M");
            spec.mass = ov != overrides.end() ? ov->second : evaluate_expression(value, spec.parameters);
            spec.parameters["M"] = spec.mass;
        } else if (key == "cg_table") {
            spec.cg_table = value;
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
    if (!have_dimension) throw ConfigError(source + ": missing 'dimension'");
    for (const auto& [name, value] : overrides) {
        if (!spec.parameters.count(name)) {
            throw ConfigError(source + ": override of undeclared parameter '" + name + "'");
        }
    }
    for (auto& t : pending) {
        Term term;
        try {
            term.coefficient = evaluate_expression(t.expr, spec.parameters);
        } catch (const ConfigError& e) {
            throw ConfigError(t.where + ": " + e.what());
        }
        term.radial = std::move(t.radial);
        term.orbital = t.orbital;
        spec.terms.push_back(std::move(term));
    }
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return spec;
}

HamiltonianSpec load_spec(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec file '" + path + "'");
    HamiltonianSpec spec = parse_spec(in, path, overrides);
    if (!spec.cg_table.empty() && spec.cg_table.front() != '/') {
        const auto slash = path.find_last_of('/');
        if (slash != std::string::npos) spec.cg_table = path.substr(0, slash + 1) + spec.cg_table;
    }
    return spec;
}

BasisSpec parse_basis(const std::string& text, int N, double scale, int nu_max, int v_max) {
    if (text == "harmonic") return BasisSpec::harmonic(N, scale, nu_max, v_max);
    if (text.rfind("pair:", 0) == 0) {
        const std::string body = text.substr(5);
        const auto comma = body.find(',');
        if (comma == std::string::npos) throw ConfigError("basis 'pair:EVEN,ODD' needs two values");
        const std::map<std::string, double> none;
        const double even = evaluate_expression(body.substr(0, comma), none);
        const double odd = evaluate_expression(body.substr(comma + 1), none);
        return BasisSpec::parity_pair(N, even, odd, scale, nu_max, v_max);
    }
    if (text.rfind("per-v:", 0) == 0) {
        const std::string path = text.substr(6);
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open per-v basis file '" + path + "'");
        std::map<int, std::pair<double, double>> rows;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            int v = 0;
            double lambda = 0.0;
            if (!(ls >> v)) continue;
            if (!(ls >> lambda)) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'v lambda [scale]'");
            double a = scale;
            ls >> a;
            if (!rows.emplace(v, std::make_pair(lambda, a)).second) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate v");
            }
        }
        std::vector<double> lambdas;
        std::vector<double> scales;
        for (int v = 0; v <= v_max; ++v) {
            auto it = rows.find(v);
            if (it == rows.end()) throw ConfigError(path + ": no lambda for v = " + std::to_string(v));
            lambdas.push_back(it->second.first);
            scales.push_back(it->second.second);
        }
        return BasisSpec::per_v(N, lambdas, scales, nu_max);
    }
    throw ConfigError("unknown basis '" + text + "' (harmonic | pair:EVEN,ODD | per-v:FILE)");
}

}  // namespace polyham::hamiltonian
