#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "epz/quadforms.hpp"

namespace epz {

struct ConfigKey {
    std::string key;
    std::string default_value;
    std::string doc;
};

// Every recognised key with its default.
const std::vector<ConfigKey>& config_keys();

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Plain key = value configuration. Unknown keys are rejected.
class RunConfig {
public:
    RunConfig();

    // '#' starts a comment; blank lines ignored.
    static RunConfig from_file(const std::string& path);
    static RunConfig from_text(const std::string& text);

    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    long get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;
    QuadForm form() const;

    // Sorted key=value lines.
    std::string canonical() const;
    std::string fingerprint() const;

    const std::map<std::string, std::string>& values() const { return v_; }

private:
    std::map<std::string, std::string> v_;
};

std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t x);

QuadForm parse_form(const std::string& s);  // "a,b,c"

// Validated form plus its class group; throws DomainError on bad input.
struct FormContext {
    QuadForm Q;
    ClassGroup G;
    std::vector<ClassCharacter> chars;
    std::string char_fingerprint;
};
FormContext make_form_context(const RunConfig& cfg);

// Embedded in every artifact.
nlohmann::json artifact_header(const RunConfig& cfg, const FormContext& ctx);

}  // namespace epz
