#include "dyadic/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dyadic {

nlohmann::json to_json(const InequalityReport& r) {
    auto num = [](double x) -> nlohmann::json {
        if (std::isfinite(x)) return x;
        return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
    };
    return {{"lemma_id", r.lemma_id},
            {"params", r.params},
            {"relation", r.relation == Relation::LessEq ? "<=" : ">="},
            {"lhs", num(r.lhs)},
            {"rhs", num(r.rhs)},
            {"ratio", num(r.ratio)},
            {"witness", r.witness},
            {"exact_constant", r.exact},
            {"pass", r.pass},
            {"seed", r.seed},
            {"instances", r.instances},
            {"violations", r.violations}};
}

Tally::Tally(std::string lemma_id, Relation rel, bool exact, std::uint64_t seed) {
    r_.lemma_id = std::move(lemma_id);
    r_.relation = rel;
    r_.exact = exact;
    r_.seed = seed;
}

bool Tally::tighter(double ratio) const {
    if (!have_) return true;
    return r_.relation == Relation::LessEq ? ratio > r_.ratio : ratio < r_.ratio;
}

void Tally::add(double lhs, double rhs, const std::function<std::string()>& witness) {
    ++r_.instances;
    const double slack = kRelSlack * std::max(std::abs(lhs), std::abs(rhs));
    const bool ok = r_.relation == Relation::LessEq ? lhs <= rhs + slack : lhs >= rhs - slack;
    double ratio;
    if (rhs != 0.0)
        ratio = lhs / rhs;
    else
        ratio = lhs == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), lhs);
    if (!ok) ++r_.violations;
    // A failing instance always becomes the witness; among passing ones keep the tightest.
    const bool take = (!ok && !have_violation_) || ((ok || have_violation_) && ok == !have_violation_ && tighter(ratio)) ||
                      (!ok && have_violation_ && tighter(ratio));
    if (take) {
        r_.lhs = lhs;
        r_.rhs = rhs;
        r_.ratio = ratio;
        r_.witness = witness ? witness() : std::string();
        have_ = true;
        if (!ok) have_violation_ = true;
    }
}

void Tally::merge(const Tally& o) {
    const long long inst = r_.instances + o.r_.instances;
    const long long viol = r_.violations + o.r_.violations;
    const bool take = o.have_ && (!have_ || (o.have_violation_ && !have_violation_) ||
                                  (o.have_violation_ == have_violation_ && tighter(o.r_.ratio)));
    if (take) {
        r_.lhs = o.r_.lhs;
        r_.rhs = o.r_.rhs;
        r_.ratio = o.r_.ratio;
        r_.witness = o.r_.witness;
        have_ = true;
        have_violation_ = have_violation_ || o.have_violation_;
    }
    r_.instances = inst;
    r_.violations = viol;
}

InequalityReport Tally::report() const {
    InequalityReport r = r_;
    // Without an asserted constant there is nothing to violate.
    if (!r.exact) r.violations = 0;
    r.pass = !r.exact || r.violations == 0;
    return r;
}

InequalityReport merge_reports(const std::vector<InequalityReport>& parts, const std::string& label_key) {
    if (parts.empty()) throw Error("merge_reports: nothing to merge");
    InequalityReport out = parts.front();
    out.instances = 0;
    out.violations = 0;
    const bool le = out.relation == Relation::LessEq;
    int best = -1;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& p = parts[i];
        out.instances += p.instances;
        out.violations += p.violations;
        if (p.instances == 0) continue;
        if (best < 0) {
            best = static_cast<int>(i);
            continue;
        }
        const auto& b = parts[static_cast<std::size_t>(best)];
        const bool pv = p.violations > 0, bv = b.violations > 0;
        if ((pv && !bv) || (pv == bv && (le ? p.ratio > b.ratio : p.ratio < b.ratio))) best = static_cast<int>(i);
    }
    if (best >= 0) {
        const auto& b = parts[static_cast<std::size_t>(best)];
        out.lhs = b.lhs;
        out.rhs = b.rhs;
        out.ratio = b.ratio;
        out.params = b.params;
        out.witness = b.witness;
        if (b.params.contains(label_key) && b.params[label_key].is_string())
            out.witness = b.params[label_key].get<std::string>() + " " + b.witness;
    }
    out.params["inputs"] = parts.size();
    out.pass = out.exact ? out.violations == 0 : std::all_of(parts.begin(), parts.end(), [](const auto& p) { return p.pass; });
    return out;
}

}  // namespace dyadic
