#include "dyadic/haar_shift.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dyadic/haar.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

namespace {

bool inside(NodeId child, NodeId parent) {
    if (child.level < parent.level) return false;
    return (child.index >> (child.level - parent.level)) == parent.index;
}

std::string triple(const HaarShiftEntry& e) {
    return "(" + e.q.to_string() + "," + e.from.to_string() + "," + e.to.to_string() + ")";
}

double size_ratio(const HaarShiftEntry& e, const DyadicGrid& g) {
    const double bound = std::sqrt(g.node_length(e.from) * g.node_length(e.to)) / g.node_length(e.q);
    return std::abs(e.a) / bound;
}

HaarKind parse_kind(const std::string& s) {
    if (s == "haar") return HaarKind::Haar;
    if (s == "box") return HaarKind::Box;
    throw Error("haar shift spec: unknown kind '" + s + "'");
}

const char* kind_name(HaarKind k) { return k == HaarKind::Haar ? "haar" : "box"; }

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

double HaarShiftSpec::scale(NodeId n) const {
    const auto it = scales.find(n);
    return it == scales.end() ? 1.0 : it->second;
}

bool HaarShiftSpec::first_class() const {
    return std::all_of(entries.begin(), entries.end(), [](const HaarShiftEntry& e) {
        return e.from_kind == HaarKind::Haar && e.to_kind == HaarKind::Haar;
    });
}

HaarShiftSpec HaarShiftSpec::adjoint() const {
    HaarShiftSpec out = *this;
    for (auto& e : out.entries) {
        std::swap(e.from, e.to);
        std::swap(e.from_kind, e.to_kind);
    }
    return out;
}

void validate(const HaarShiftSpec& spec, const DyadicGrid& g) {
    if (spec.tau < 1) throw Error("haar shift spec: tau must be at least 1");
    if (!(spec.C >= 0.0)) throw Error("haar shift spec: C must be non-negative");
    for (const auto& [n, s] : spec.scales) {
        if (!g.is_internal(n)) throw Error("haar shift spec: scale on non-internal node " + n.to_string());
        if (!(std::abs(s) <= 1.0)) throw Error("haar shift spec: |scale| exceeds 1 at " + n.to_string());
    }
    for (const auto& e : spec.entries) {
        const std::string t = triple(e);
        for (NodeId n : {e.q, e.from, e.to})
            if (!g.contains(n)) throw Error("haar shift spec: node off the grid in " + t);
        if (!inside(e.from, e.q) || !inside(e.to, e.q)) throw Error("haar shift spec: Q', Q'' not inside Q in " + t);
        if (e.from.level - e.q.level > spec.tau || e.to.level - e.q.level > spec.tau)
            throw Error("haar shift spec: level gap exceeds tau in " + t);
        if ((e.from_kind == HaarKind::Haar && !g.is_internal(e.from)) ||
            (e.to_kind == HaarKind::Haar && !g.is_internal(e.to)))
            throw Error("haar shift spec: Haar function on a finest cell in " + t);
        if (!std::isfinite(e.a)) throw Error("haar shift spec: non-finite coefficient in " + t);
        if (size_ratio(e, g) > spec.C * (1.0 + 1e-12))
            throw Error("haar shift spec: size condition violated by " + t + ", |a| = " + std::to_string(std::abs(e.a)));
    }
}

double minimal_size_constant(const HaarShiftSpec& spec, const DyadicGrid& g) {
    double c = 0.0;
    for (const auto& e : spec.entries) c = std::max(c, size_ratio(e, g));
    return c;
}

LinOp haar_shift(const HaarShiftSpec& spec, const DyadicGrid& g) {
    validate(spec, g);
    auto make = [g](const HaarShiftSpec& sp) {
        return [g, sp](std::span<const double> x) {
            const StepFunction f(g, std::vector<double>(x.begin(), x.end()));
            const auto c = haar_analysis(f);
            const auto avg = node_averages(f);
            HaarCoefficients out(g);
            std::vector<double> box(g.node_count(), 0.0);
            for (const auto& e : sp.entries) {
                const double in = e.from_kind == HaarKind::Haar ? sp.scale(e.from) * c[e.from]
                                                                : std::sqrt(g.node_length(e.from)) * avg[e.from];
                if (e.to_kind == HaarKind::Haar)
                    out[e.to] += e.a * in * sp.scale(e.to);
                else
                    box[e.to.flat()] += e.a * in / std::sqrt(g.node_length(e.to));
            }
            auto y = std::move(haar_synthesis(out)).release();
            for (std::size_t p = 0; p < g.internal_count(); ++p) {
                box[2 * p + 1] += box[p];
                box[2 * p + 2] += box[p];
            }
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += box[g.internal_count() + i];
            return y;
        };
    };
    std::ostringstream desc;
    desc << "shift-spec(tau=" << spec.tau << ",entries=" << spec.entries.size() << ")";
    return LinOp(g, desc.str(), make(spec), make(spec.adjoint()));
}

HaarShiftSpec shift_S_spec(const DyadicGrid& g) {
    HaarShiftSpec s;
    s.tau = 1;
    s.C = std::sqrt(2.0);
    if (g.depth() < 2) return s;
    for_each_node(0, g.depth() - 2, [&](NodeId n) {
        s.entries.push_back({n, n, n.left(), 1.0});
        s.entries.push_back({n, n, n.right(), -1.0});
    });
    return s;
}

HaarShiftSpec lambda_shift_commutator(const HaarShiftSpec& spec, const StepFunction& b) {
    validate(spec, b.grid());
    if (!spec.first_class())
        throw Error("lambda_shift_commutator: spec has box entries; the identity needs mean-zero Haar functions");
    const auto avg = node_averages(b);
    HaarShiftSpec out = spec;
    double m = 0.0;
    for (auto& e : out.entries) {
        const double diff = avg[e.to] - avg[e.from];
        e.a *= diff;
        m = std::max(m, std::abs(diff));
    }
    out.C = spec.C * m;
    return out;
}

HaarShiftSpec random_haar_shift_spec(const DyadicGrid& g, int tau, double C, int per_node, std::uint64_t seed) {
    if (tau < 1) throw Error("random spec: tau must be at least 1");
    Rng rng(seed);
    HaarShiftSpec s;
    s.tau = tau;
    s.C = C;
    for_each_node(0, g.depth() - 1, [&](NodeId q) {
        const int gap = std::min(tau, g.depth() - 1 - q.level);
        for (int k = 0; k < per_node; ++k) {
            auto pick = [&] {
                const int dl = static_cast<int>(rng.below(static_cast<std::uint64_t>(gap) + 1));
                const auto idx = static_cast<std::int64_t>(rng.below(std::uint64_t{1} << dl));
                return NodeId{q.level + dl, (q.index << dl) + idx};
            };
            HaarShiftEntry e;
            e.q = q;
            e.from = pick();
            e.to = pick();
            const double bound = std::sqrt(g.node_length(e.from) * g.node_length(e.to)) / g.node_length(q);
            e.a = C * bound * rng.uniform(-1.0, 1.0);
            s.entries.push_back(e);
        }
        const double mag = rng.uniform(0.5, 1.0);
        s.scales[q] = rng.uniform() < 0.5 ? -mag : mag;
    });
    return s;
}

HaarShiftSpec read_haar_shift_spec(std::istream& is, const DyadicGrid& g) {
    HaarShiftSpec s;
    bool have_tau = false, have_c = false;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string d = trim(line.substr(1));
            if (d.rfind("tau=", 0) == 0) {
                s.tau = std::stoi(d.substr(4));
                have_tau = true;
            } else if (d.rfind("C=", 0) == 0) {
                s.C = std::stod(d.substr(2));
                have_c = true;
            } else if (d.rfind("scale=", 0) == 0) {
                std::istringstream ls(d.substr(6));
                std::string a, b, c;
                std::getline(ls, a, ',');
                std::getline(ls, b, ',');
                std::getline(ls, c);
                s.scales[NodeId{std::stoi(a), std::stoll(b)}] = std::stod(c);
            }
            continue;
        }
        if (line.rfind("Q_level", 0) == 0) continue;
        std::vector<std::string> cols;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cols.push_back(trim(c));
        if (cols.size() != 7 && cols.size() != 9)
            throw Error("haar shift spec: line " + std::to_string(lineno) + " needs 7 or 9 columns");
        try {
            HaarShiftEntry e;
            e.q = {std::stoi(cols[0]), std::stoll(cols[1])};
            e.from = {std::stoi(cols[2]), std::stoll(cols[3])};
            e.to = {std::stoi(cols[4]), std::stoll(cols[5])};
            e.a = std::stod(cols[6]);
            if (cols.size() == 9) {
                e.from_kind = parse_kind(cols[7]);
                e.to_kind = parse_kind(cols[8]);
            }
            s.entries.push_back(e);
        } catch (const std::invalid_argument&) {
            throw Error("haar shift spec: unparsable number on line " + std::to_string(lineno));
        }
    }
    if (!have_tau) {
        s.tau = 1;
        for (const auto& e : s.entries) s.tau = std::max({s.tau, e.from.level - e.q.level, e.to.level - e.q.level});
    }
    if (!have_c) s.C = minimal_size_constant(s, g);
    validate(s, g);
    return s;
}

HaarShiftSpec load_haar_shift_spec(const std::string& path, const DyadicGrid& g) {
    std::ifstream in(path);
    if (!in) throw Error("haar shift spec: cannot open " + path);
    return read_haar_shift_spec(in, g);
}

void write_haar_shift_spec(std::ostream& os, const HaarShiftSpec& spec) {
    os << std::setprecision(17);
    os << "# tau=" << spec.tau << "\n# C=" << spec.C << "\n";
    for (const auto& [n, v] : spec.scales) os << "# scale=" << n.level << ',' << n.index << ',' << v << '\n';
    os << "Q_level,Q_index,Q'_level,Q'_index,Q''_level,Q''_index,a,analysis_kind,synthesis_kind\n";
    for (const auto& e : spec.entries)
        os << e.q.level << ',' << e.q.index << ',' << e.from.level << ',' << e.from.index << ',' << e.to.level << ','
           << e.to.index << ',' << e.a << ',' << kind_name(e.from_kind) << ',' << kind_name(e.to_kind) << '\n';
}

}  // namespace dyadic
