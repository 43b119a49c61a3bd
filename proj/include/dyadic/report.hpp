#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyadic/grid.hpp"

namespace dyadic {

/// Raised when an input fails the hypothesis of a verifier; carries the offending node.
class HypothesisError : public Error {
public:
    HypothesisError(const std::string& what, NodeId witness) : Error(what + " at " + witness.to_string()), witness_(witness) {}
    NodeId witness() const { return witness_; }

private:
    NodeId witness_;
};

enum class Relation { LessEq, GreaterEq };

/// Outcome of checking one inequality over many instances; lhs, rhs and witness
/// describe the tightest instance seen.
struct InequalityReport {
    std::string lemma_id;
    nlohmann::json params = nlohmann::json::object();
    Relation relation = Relation::LessEq;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    std::string witness;
    bool exact = true;  // false: the constant is measured, not asserted
    bool pass = true;
    std::uint64_t seed = 0;
    long long instances = 0;
    long long violations = 0;
};

nlohmann::json to_json(const InequalityReport& r);

/// Accumulates instances of lhs <= rhs (or >=), keeping the tightest one.
class Tally {
public:
    Tally(std::string lemma_id, Relation rel, bool exact, std::uint64_t seed);

    /// `witness` is only evaluated when the instance becomes the tightest one or fails.
    void add(double lhs, double rhs, const std::function<std::string()>& witness);
    void merge(const Tally& other);
    InequalityReport report() const;
    InequalityReport& base() { return r_; }

    static constexpr double kRelSlack = 1e-12;

private:
    bool tighter(double ratio) const;
    InequalityReport r_;
    bool have_ = false;
    bool have_violation_ = false;
};

/// Combines reports of one inequality over several inputs: counts add up, the witness
/// of the worst input wins and is prefixed with `label_key` from its params when present.
InequalityReport merge_reports(const std::vector<InequalityReport>& parts, const std::string& label_key = "weight");

}  // namespace dyadic
