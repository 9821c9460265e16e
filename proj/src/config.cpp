#include "epz/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace epz {

const std::vector<ConfigKey>& config_keys()
{
    static const std::vector<ConfigKey> keys = {
        {"form", "1,0,5", "coefficients a,b,c of Q(x,y) = ax^2 + bxy + cy^2"},
        {"check_discriminant", "true", "require b^2 - 4ac to be a fundamental discriminant"},
        {"seed", "20240101", "master seed for QMC scrambles and random test points"},
        {"threads", "1", "worker threads"},
        {"qmc.log2_points", "16", "Sobol points per replicate, as a power of two"},
        {"qmc.replicates", "8", "independent scrambles"},
        {"strip.sigma1", "0.6", "left edge of the counting strip"},
        {"strip.sigma2", "0.9", "right edge of the counting strip"},
        {"count.T", "4000", "height of the direct count"},
        {"model.n", "8", "primes in the torus model"},
        {"model.quad_points", "6", "Gauss-Legendre nodes over sigma for c_pred"},
        {"linescan.sigma0", "0.75", "abscissa of the line scan"},
        {"linescan.tol", "1e-3", "half width around sigma0"},
        {"linescan.T", "500,1000,2000", "heights of the line scan"},
        {"search.T", "10000", "height budget for zeros with Re > 1"},
        {"jensen.T", "500", "time horizon of Jensen averages"},
        {"jensen.step", "0.05", "trapezoid step of Jensen averages"},
        {"zerofree.sigma_lo", "1.05", "left end of the zero-free map"},
        {"zerofree.sigma_hi", "3", "right end of the zero-free map"},
        {"zerofree.step", "0.05", "sigma spacing of the zero-free map"},
        {"decay.log2_points", "21", "Sobol points per replicate for the Fourier decay fit"},
        {"decay.sigmas", "0.75,1,1.5", "abscissae of the Fourier decay fit"},
        {"meansquare.sigma", "0.75", "abscissa of the truncation mean square"},
        {"meansquare.T", "1000", "height of the truncation mean square"},
        {"meansquare.n", "10,20,40,80", "truncation lengths"},
        {"output.dir", ".", "directory for artifacts"},
    };
    return keys;
}

RunConfig::RunConfig()
{
    for (const auto& k : config_keys()) v_[k.key] = k.default_value;
}

static std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

RunConfig RunConfig::from_text(const std::string& text)
{
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_text(ss.str());
}

void RunConfig::set(const std::string& key, const std::string& value)
{
    auto it = v_.find(key);
    if (it == v_.end()) throw ConfigError("unknown config key: " + key);
    it->second = value;
}

const std::string& RunConfig::get(const std::string& key) const
{
    auto it = v_.find(key);
    if (it == v_.end()) throw ConfigError("unknown config key: " + key);
    return it->second;
}

double RunConfig::get_double(const std::string& key) const
{
    const std::string& s = get(key);
    try {
        std::size_t pos = 0;
        const double x = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: " + s);
    }
}

long RunConfig::get_int(const std::string& key) const
{
    const std::string& s = get(key);
    try {
        std::size_t pos = 0;
        const long x = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: " + s);
    }
}

bool RunConfig::get_bool(const std::string& key) const
{
    const std::string& s = get(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(key + ": not a boolean: " + s);
}

std::vector<double> RunConfig::get_list(const std::string& key) const
{
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(key + ": bad list entry: " + item);
        }
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

QuadForm parse_form(const std::string& s)
{
    QuadForm Q;
    char c1 = 0, c2 = 0;
    long long a = 0, b = 0, c = 0;
    std::istringstream in(s);
    if (!(in >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',')
        throw ConfigError("form must look like a,b,c: " + s);
    std::string rest;
    if (in >> rest) throw ConfigError("trailing characters in form: " + s);
    Q.a = a;
    Q.b = b;
    Q.c = c;
    return Q;
}

QuadForm RunConfig::form() const { return parse_form(get("form")); }

std::string RunConfig::canonical() const
{
    std::string out;
    for (const auto& [k, v] : v_) out += k + "=" + v + "\n";
    return out;
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::string RunConfig::fingerprint() const { return hex64(fnv1a(canonical())); }

FormContext make_form_context(const RunConfig& cfg)
{
    FormContext ctx;
    ctx.Q = cfg.form();
    if (!ctx.Q.positive_definite()) throw DomainError("form " + ctx.Q.str() + " is not positive definite");
    const i64 D = ctx.Q.disc();
    if (cfg.get_bool("check_discriminant") && !is_fundamental_discriminant(D))
        throw DomainError("discriminant " + std::to_string(D) + " is not fundamental");
    ctx.G = build_class_group(D);
    ctx.chars = characters(ctx.G);
    ctx.char_fingerprint = hex64(fnv1a(to_json(ctx.G, ctx.chars).dump()));
    return ctx;
}

nlohmann::json artifact_header(const RunConfig& cfg, const FormContext& ctx)
{
    nlohmann::json j;
    j["form"] = {ctx.Q.a, ctx.Q.b, ctx.Q.c};
    j["discriminant"] = ctx.G.D;
    j["h"] = ctx.G.h;
    j["w"] = ctx.G.w;
    j["character_table_fingerprint"] = ctx.char_fingerprint;
    j["seed"] = cfg.get_int("seed");
    j["budgets"] = {
        {"qmc.log2_points", cfg.get_int("qmc.log2_points")},
        {"qmc.replicates", cfg.get_int("qmc.replicates")},
        {"decay.log2_points", cfg.get_int("decay.log2_points")},
        {"count.T", cfg.get_double("count.T")},
        {"search.T", cfg.get_double("search.T")},
        {"jensen.T", cfg.get_double("jensen.T")},
    };
    j["config_fingerprint"] = cfg.fingerprint();
    return j;
}

}  // namespace epz
