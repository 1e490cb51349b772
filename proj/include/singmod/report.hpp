#ifndef SINGMOD_REPORT_HPP
#define SINGMOD_REPORT_HPP

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace singmod {

enum class Verdict { PASS, FAIL, UNKNOWN, SKIPPED };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::PASS: return "PASS";
        case Verdict::FAIL: return "FAIL";
        case Verdict::UNKNOWN: return "UNKNOWN";
        case Verdict::SKIPPED: return "SKIPPED";
    }
    return "?";
}

// Structured verdict for one congruence claim.  observed_valuation is the
// minimum p-adic valuation seen over the window; nullopt means +infinity
// (every tested coefficient vanished).  A FAIL carries a concrete witness.
struct CongruenceReport {
    std::string claim_id;
    std::map<std::string, std::string> params;
    std::optional<long> observed_valuation;
    long required = 0;
    std::pair<long, long> window{0, 0};
    Verdict verdict = Verdict::UNKNOWN;
    std::string witness;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["claim_id"] = claim_id;
        j["params"] = params;
        if (observed_valuation)
            j["observed_valuation"] = *observed_valuation;
        else
            j["observed_valuation"] = "inf";
        j["required"] = required;
        j["window"] = {window.first, window.second};
        j["verdict"] = verdict_name(verdict);
        if (!witness.empty()) j["witness"] = witness;
        return j;
    }
};

// PASS iff the window is nonempty and the observed valuation meets the bar.
inline Verdict verdict_from(const std::optional<long>& observed, long required, bool window_empty) {
    if (window_empty) return Verdict::UNKNOWN;
    if (!observed || *observed >= required) return Verdict::PASS;
    return Verdict::FAIL;
}

inline bool any_fail(const std::vector<CongruenceReport>& rs) {
    for (const auto& r : rs)
        if (r.verdict == Verdict::FAIL) return true;
    return false;
}

}  // namespace singmod

#endif
