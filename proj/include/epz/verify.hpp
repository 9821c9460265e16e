#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epz/config.hpp"

namespace epz {

struct CheckInfo {
    int id = 0;
    std::string name;
    std::string title;
    double budget_s = 0.0;  // wall-clock allowance
};

const std::vector<CheckInfo>& check_catalog();
// By name or by number; nullopt when unknown.
std::optional<CheckInfo> find_check(const std::string& key);

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    nlohmann::json detail;
    double runtime = 0.0;  // seconds; kept out of the JSON report
    std::string error;     // exception text when the check threw
};

struct VerifyReport {
    nlohmann::json header;
    std::vector<CheckResult> results;

    bool all_passed() const;
    nlohmann::json to_json() const;  // deterministic for a fixed config
    std::string summary() const;     // one line per check
};

// Runs the selected checks (all when `only` is empty). Exceptions are recorded per check.
VerifyReport run_verify(const RunConfig& cfg, const std::vector<std::string>& only = {},
                        const std::function<void(const CheckResult&)>& on_result = {});

std::string summary_line(const CheckResult& r);

}  // namespace epz
