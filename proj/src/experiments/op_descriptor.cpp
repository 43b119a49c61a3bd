#include "dyadic/experiments/op_descriptor.hpp"

#include "dyadic/haar_shift.hpp"
#include "dyadic/hilbert.hpp"
#include "dyadic/profile.hpp"
#include "dyadic/shift.hpp"

namespace dyadic::experiments {

namespace {

StepFunction symbol(const std::string& prof, const DyadicGrid& g) { return AnalyticProfile::parse(prof).sample(g); }

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

LinOp sweep_operator(const std::string& id, const StepFunction& b) {
    const auto& g = b.grid();
    if (id == "S") return shift_S(g);
    if (id == "comm-lambda-S") return commutator(lambda_op(b), shift_S(g));
    if (id == "pistar-S") return compose(paraproduct_adjoint(b), shift_S(g));
    if (id == "S-pi") return compose(shift_S(g), paraproduct(b));
    throw Error("unknown sweep operator '" + id + "' (expected S, comm-lambda-S, pistar-S, S-pi)");
}

LinOp parse_operator(const std::string& desc, const DyadicGrid& g) {
    if (desc == "S") return shift_S(g);
    if (desc == "S*") return shift_S_adjoint(g);
    if (desc == "hilbert") return hilbert_direct(g);
    if (starts_with(desc, "pi:")) return paraproduct(symbol(desc.substr(3), g));
    if (starts_with(desc, "pistar:")) return paraproduct_adjoint(symbol(desc.substr(7), g));
    if (starts_with(desc, "lambda:")) return lambda_op(symbol(desc.substr(7), g));
    if (starts_with(desc, "S-b:")) return shift_S_b(symbol(desc.substr(4), g));
    for (const char* id : {"comm-lambda-S", "pistar-S", "S-pi"}) {
        const std::string p = std::string(id) + ":";
        if (starts_with(desc, p)) return sweep_operator(id, symbol(desc.substr(p.size()), g));
    }
    if (starts_with(desc, "hilbert-avg:")) {
        const std::string rest = desc.substr(12);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw Error("hilbert-avg expects hilbert-avg:<n>:<seed>");
        const int n = std::stoi(rest.substr(0, colon));
        const auto seed = static_cast<std::uint64_t>(std::stoull(rest.substr(colon + 1)));
        return hilbert_averaged(g, n, seed);
    }
    if (starts_with(desc, "shift-spec:")) return haar_shift(load_haar_shift_spec(desc.substr(11), g), g);
    if (starts_with(desc, "comm:")) {
        // The profile itself may contain ':', so try every split point.
        const std::string rest = desc.substr(5);
        for (std::size_t pos = rest.find(':'); pos != std::string::npos; pos = rest.find(':', pos + 1)) {
            StepFunction b(g);
            try {
                b = symbol(rest.substr(0, pos), g);
            } catch (const Error&) {
                continue;
            }
            const LinOp inner = parse_operator(rest.substr(pos + 1), g);
            return commutator(mult_op(b), inner);
        }
        throw Error("comm expects comm:<profile>:<operator>, got '" + desc + "'");
    }
    throw Error("unknown operator descriptor '" + desc + "'");
}

}  // namespace dyadic::experiments
