#include "dyadic/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace dyadic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_{x0}^{x1} x^a dx for 0 <= x0 < x1.
double pow_pos(double x0, double x1, double a) {
    const double e = a + 1.0;
    if (x0 == 0.0) return e > 0.0 ? std::pow(x1, e) / e : kInf;
    const double t = std::log1p((x1 - x0) / x0);
    if (std::abs(e) < 1e-300) return t * 1.0;  // a == -1
    return std::pow(x0, e) * std::expm1(e * t) / e;
}

// int_{x0}^{x1} log x dx for 0 <= x0 < x1.
double log_pos(double x0, double x1) {
    const double len = x1 - x0;
    if (x0 == 0.0) return x1 * (std::log(x1) - 1.0);
    return len * (std::log(x1) - 1.0) + x0 * std::log1p(len / x0);
}

template <typename F>
double split_at_zero(double x0, double x1, F pos) {
    if (x0 >= 0.0) return pos(x0, x1);
    if (x1 <= 0.0) return pos(-x1, -x0);
    return pos(0.0, -x0) + pos(0.0, x1);
}

double to_double(const std::string& s, const std::string& whole) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw Error("profile: cannot parse number '" + s + "' in '" + whole + "'");
    }
    if (used != s.size()) throw Error("profile: cannot parse number '" + s + "' in '" + whole + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

double integral_pow_abs(double x0, double x1, double a) {
    return split_at_zero(x0, x1, [a](double u, double v) { return pow_pos(u, v, a); });
}

double integral_log_abs(double x0, double x1) { return split_at_zero(x0, x1, log_pos); }

AnalyticProfile AnalyticProfile::constant(double c) {
    AnalyticProfile p;
    p.kind = Kind::Constant;
    p.c = c;
    return p;
}

AnalyticProfile AnalyticProfile::power_abs(double a) {
    AnalyticProfile p;
    p.kind = Kind::PowerAbs;
    p.a = a;
    return p;
}

AnalyticProfile AnalyticProfile::log_abs() {
    AnalyticProfile p;
    p.kind = Kind::LogAbs;
    return p;
}

AnalyticProfile AnalyticProfile::indicator_power(double lo, double hi, double a) {
    if (!(lo < hi)) throw Error("profile: indpow needs lo < hi");
    AnalyticProfile p;
    p.kind = Kind::IndicatorPower;
    p.lo = lo;
    p.hi = hi;
    p.a = a;
    return p;
}

AnalyticProfile AnalyticProfile::parse(const std::string& text) {
    if (text == "logabs") return log_abs();
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error("profile: unknown profile '" + text + "'");
    const std::string head = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (head == "const") return constant(to_double(rest, text));
    if (head == "powabs") return power_abs(to_double(rest, text));
    if (head == "indpow") {
        const auto parts = split(rest, ',');
        if (parts.size() != 3) throw Error("profile: indpow expects <lo>,<hi>,<a> in '" + text + "'");
        return indicator_power(to_double(parts[0], text), to_double(parts[1], text), to_double(parts[2], text));
    }
    throw Error("profile: unknown profile '" + text + "'");
}

std::string AnalyticProfile::to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::Constant: os << "const:" << c; break;
        case Kind::PowerAbs: os << "powabs:" << a; break;
        case Kind::LogAbs: os << "logabs"; break;
        case Kind::IndicatorPower: os << "indpow:" << lo << ',' << hi << ',' << a; break;
    }
    return os.str();
}

double AnalyticProfile::integral(double x0, double x1) const {
    switch (kind) {
        case Kind::Constant: return c * (x1 - x0);
        case Kind::PowerAbs: return integral_pow_abs(x0, x1, a);
        case Kind::LogAbs: return integral_log_abs(x0, x1);
        case Kind::IndicatorPower: {
            const double u = std::max(x0, lo), v = std::min(x1, hi);
            return v > u ? integral_pow_abs(u, v, a) : 0.0;
        }
    }
    return 0.0;
}

double AnalyticProfile::cell_average(double x0, double x1) const {
    if (kind == Kind::Constant) return c;
    return integral(x0, x1) / (x1 - x0);
}

StepFunction AnalyticProfile::sample(const DyadicGrid& g) const {
    std::vector<double> v(g.cells());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = cell_average(g.cell_left(i), g.cell_left(i + 1));
    return StepFunction(g, std::move(v));
}

}  // namespace dyadic
