// epz: Epstein zeta zeros, Jensen functions and the torus model from the command line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epz/config.hpp"
#include "epz/epstein.hpp"
#include "epz/jensen.hpp"
#include "epz/lfunc.hpp"
#include "epz/randmodel.hpp"
#include "epz/verify.hpp"
#include "epz/zeros.hpp"

using namespace epz;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0, kExitFail = 1, kExitUsage = 2;

std::string num(double x)
{
    if (!std::isfinite(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) { row(header); }
    void row(const std::vector<std::string>& fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i) text_ += (i ? "," : "") + csv_field(fields[i]);
        text_ += "\r\n";
    }
    const std::string& str() const { return text_; }

private:
    std::string text_;
};

void write_file(const std::filesystem::path& p, const std::string& s)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << s;
}

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

struct Common {
    std::string config_path;
    std::vector<std::string> sets;
    std::string form;
    long seed = -1;
    int threads = 0;

    RunConfig build() const
    {
        RunConfig cfg = config_path.empty() ? RunConfig() : RunConfig::from_file(config_path);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!form.empty()) cfg.set("form", form);
        if (seed >= 0) cfg.set("seed", std::to_string(seed));
        if (threads > 0) cfg.set("threads", std::to_string(threads));
        return cfg;
    }
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config_path, "key = value config file");
    app->add_option("--set", c.sets, "override a config key (key=value)");
    app->add_option("--form", c.form, "form coefficients a,b,c");
    app->add_option("--seed", c.seed, "master seed");
    app->add_option("--threads", c.threads, "worker threads");
}

void emit(const json& j, const std::string& path)
{
    const std::string s = j.dump(2) + "\n";
    if (path.empty() || path == "-")
        std::cout << s;
    else
        write_file(path, s);
}

QmcOptions qmc_of(const RunConfig& cfg)
{
    QmcOptions q;
    q.log2_points = int(cfg.get_int("qmc.log2_points"));
    q.replicates = int(cfg.get_int("qmc.replicates"));
    q.seed = std::uint64_t(cfg.get_int("seed"));
    q.threads = int(cfg.get_int("threads"));
    return q;
}

ZeroOptions zero_of(const RunConfig& cfg)
{
    ZeroOptions o;
    o.seed = std::uint64_t(cfg.get_int("seed"));
    o.threads = int(cfg.get_int("threads"));
    return o;
}

JensenOptions jensen_of(const RunConfig& cfg)
{
    JensenOptions o;
    o.step = cfg.get_double("jensen.step");
    o.threads = int(cfg.get_int("threads"));
    return o;
}

std::vector<double> sigma_grid(const RunConfig& cfg)
{
    const double lo = cfg.get_double("zerofree.sigma_lo"), hi = cfg.get_double("zerofree.sigma_hi");
    const double st = cfg.get_double("zerofree.step");
    if (!(st > 0 && hi > lo)) throw ConfigError("zerofree grid: need sigma_hi > sigma_lo and step > 0");
    std::vector<double> g;
    for (int i = 0; lo + i * st <= hi + 1e-9; ++i) g.push_back(lo + i * st);
    return g;
}

json zero_json(const ZeroRecord& z)
{
    return {{"location", cj(z.location)}, {"residual", z.residual}, {"certified", z.certified},
            {"multiplicity", z.multiplicity}};
}

int experiment_count(const RunConfig& cfg, const FormContext& ctx, const std::filesystem::path& dir, json& out)
{
    const double s1 = cfg.get_double("strip.sigma1"), s2 = cfg.get_double("strip.sigma2");
    const double T = cfg.get_double("count.T");
    const EpsteinEvaluator E(ctx.Q);
    ZeroOptions o = zero_of(cfg);
    o.localize = false;
    const StripCount sc = count_strip(E, s1, s2, T, o);
    const PredictedConstant c = predicted_constant(ctx.G, ctx.Q, s1, s2, int(cfg.get_int("model.n")),
                                                   int(cfg.get_int("model.quad_points")), qmc_of(cfg));
    Csv csv({"T", "N", "N_over_T", "c_pred", "c_pred_err"});
    int N = 0;
    for (std::size_t i = 0; i < sc.window_counts.size(); ++i) {
        N += sc.window_counts[i];
        const double t = sc.window_tops[i];
        csv.row({num(t), std::to_string(N), num(N / t), num(c.value), num(c.err)});
    }
    write_file(dir / "count_vs_predict.csv", csv.str());
    const double ratio = sc.winding_count / T;
    out["count_over_T"] = ratio;
    out["winding_count"] = sc.winding_count;
    out["c_pred"] = c.value;
    out["c_pred_err"] = c.err;
    out["ratio"] = c.value > 0 ? ratio / c.value : NAN;
    out["files"] = {"count_vs_predict.csv"};
    return kExitPass;
}

int experiment_zero_free(const RunConfig& cfg, const FormContext& ctx, const std::filesystem::path& dir, json& out)
{
    const EpsteinEvaluator E(ctx.Q);
    const double T = cfg.get_double("jensen.T");
    const auto grid = sigma_grid(cfg);
    const JensenProfile p = derivative_profile(jensen_profile(E, grid, T, 0.0, jensen_of(cfg)));
    const LinearityReport lr = detect_linearity(p, grid.front());
    ZeroOptions o = zero_of(cfg);
    o.localize = false;
    Csv csv({"sigma_lo", "sigma_hi", "winding", "failed", "dphi_mid", "in_linear_interval"});
    json cells = json::array();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        std::string w, failed = "0";
        try {
            w = std::to_string(count_strip(E, grid[i], grid[i + 1], T, o).winding_count);
        } catch (const std::exception&) {
            failed = "1";
        }
        bool lin = false;
        for (const auto& I : lr.intervals) lin = lin || (grid[i] >= I.sigma_lo - 1e-12 && grid[i + 1] <= I.sigma_hi + 1e-12);
        const double dmid = 0.5 * (p.dphi[i] + p.dphi[i + 1]);
        csv.row({num(grid[i]), num(grid[i + 1]), w, failed, num(dmid), lin ? "1" : "0"});
    }
    json iv = json::array();
    for (const auto& I : lr.intervals)
        iv.push_back({{"sigma_lo", I.sigma_lo}, {"sigma_hi", I.sigma_hi}, {"slope", I.slope}, {"slope_err", I.slope_err},
                      {"n", I.n ? json(*I.n) : json(nullptr)}});
    write_file(dir / "zero_free_map.csv", csv.str());
    out["T"] = T;
    out["intervals"] = iv;
    out["files"] = {"zero_free_map.csv"};
    return kExitPass;
}

int experiment_sigma_q(const RunConfig& cfg, const FormContext& ctx, const std::filesystem::path& dir, json& out)
{
    const double T = cfg.get_double("search.T");
    const MaxRealPart m = max_real_part(ctx.Q, T, zero_of(cfg), 1.0);
    Csv csv({"search_T", "sigma_dom", "zeros_found", "re", "im", "residual", "certified"});
    csv.row({num(T), num(m.sigma_dom), std::to_string(m.zeros_found),
             m.zeros_found ? num(m.witness.location.real()) : "", m.zeros_found ? num(m.witness.location.imag()) : "",
             m.zeros_found ? num(m.witness.residual) : "", m.witness.certified ? "1" : "0"});
    write_file(dir / "sigma_q_lower_bound.csv", csv.str());
    out["search_T"] = T;
    out["sigma_dom"] = m.sigma_dom;
    out["zeros_found"] = m.zeros_found;
    if (m.zeros_found) {
        out["witness"] = zero_json(m.witness);
        out["sigma_Q_lower_bound"] = m.value;
    }
    out["files"] = {"sigma_q_lower_bound.csv"};
    return m.zeros_found && m.value > 1.0 ? kExitPass : kExitFail;
}

int experiment_line_scan(const RunConfig& cfg, const FormContext& ctx, const std::filesystem::path& dir, json& out)
{
    const double sigma0 = cfg.get_double("linescan.sigma0"), tol = cfg.get_double("linescan.tol");
    std::vector<double> Ts = cfg.get_list("linescan.T");
    std::sort(Ts.begin(), Ts.end());
    const EpsteinEvaluator E(ctx.Q);
    const LineScan ls = scan_line(E, sigma0, Ts.back(), tol, zero_of(cfg));
    Csv csv({"T", "count", "count_over_T"});
    json rows = json::array();
    for (double T : Ts) {
        long c = 0;
        for (const auto& z : ls.zeros) c += z.location.imag() <= T;
        csv.row({num(T), std::to_string(c), num(c / T)});
        rows.push_back({{"T", T}, {"count", c}, {"count_over_T", c / T}});
    }
    write_file(dir / "line_scan.csv", csv.str());
    out["table"] = rows;
    out["files"] = {"line_scan.csv"};
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Epstein zeta functions of binary quadratic forms: zeros, Jensen functions, torus model"};
    app.require_subcommand(1);
    Common com;
    std::string out_path;

    auto* ev = app.add_subcommand("eval", "E(s, Q) and E'(s, Q)");
    double sigma = 2.0, t = 0.0;
    ev->add_option("--sigma", sigma, "Re s")->required();
    ev->add_option("--t", t, "Im s");
    ev->add_option("-o,--output", out_path, "JSON output path");
    add_common(ev, com);

    auto* dec = app.add_subcommand("decompose", "E(s, Q) as a combination of Hecke L-functions");
    dec->add_option("--sigma", sigma, "Re s")->required();
    dec->add_option("--t", t, "Im s");
    dec->add_option("-o,--output", out_path, "JSON output path");
    add_common(dec, com);

    auto* zs = app.add_subcommand("zeros", "count and locate zeros in a rectangle");
    double s1 = 0.6, s2 = 0.9, t1 = 0.0, t2 = 100.0;
    bool no_localize = false;
    std::string csv_path;
    zs->add_option("--sigma1", s1, "left edge");
    zs->add_option("--sigma2", s2, "right edge");
    zs->add_option("--t1", t1, "bottom edge");
    zs->add_option("--t2", t2, "top edge");
    zs->add_flag("--no-localize", no_localize, "winding count only");
    zs->add_option("-o,--output", out_path, "JSON output path");
    zs->add_option("--csv", csv_path, "zero list as CSV");
    add_common(zs, com);

    auto* jn = app.add_subcommand("jensen", "Jensen profile over the zerofree.* sigma grid");
    double xre = 0.0, xim = 0.0;
    jn->add_option("--x-re", xre, "Re x in log|E - x|");
    jn->add_option("--x-im", xim, "Im x");
    jn->add_option("-o,--output", out_path, "JSON output path");
    jn->add_option("--csv", csv_path, "profile as CSV");
    add_common(jn, com);

    auto* dn = app.add_subcommand("density", "density of the value distribution of the torus model");
    std::string target = "E", method = "kde";
    dn->add_option("--sigma", sigma, "Re s")->required();
    dn->add_option("--x-re", xre, "Re x");
    dn->add_option("--x-im", xim, "Im x");
    dn->add_option("--target", target, "E or ratio")->check(CLI::IsMember({"E", "ratio"}));
    dn->add_option("--method", method, "kde or fourier")->check(CLI::IsMember({"kde", "fourier"}));
    dn->add_option("-o,--output", out_path, "JSON output path");
    add_common(dn, com);

    auto* vf = app.add_subcommand("verify", "run the acceptance checks");
    std::vector<std::string> only;
    vf->add_option("--only", only, "check name or number (repeatable)");
    vf->add_option("-o,--output", out_path, "JSON report path");
    add_common(vf, com);

    auto* ex = app.add_subcommand("experiment", "write experiment artifacts to output.dir");
    std::string name;
    ex->add_option("name", name, "experiment")
        ->required()
        ->check(CLI::IsMember({"CountVsPredict", "ZeroFreeMap", "SigmaQLowerBound", "LineScan"}));
    add_common(ex, com);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitUsage;
    }

    try {
        const RunConfig cfg = com.build();
        if (*vf) {
            for (const auto& k : only)
                if (!find_check(k)) throw ConfigError("unknown check: " + k);
            const VerifyReport rep = run_verify(cfg, only, [](const CheckResult& r) {
                std::cerr << summary_line(r) << std::endl;
            });
            emit(rep.to_json(), out_path);
            int pass = 0;
            for (const auto& r : rep.results) pass += r.passed;
            std::cerr << pass << "/" << rep.results.size() << " checks passed" << std::endl;
            return rep.all_passed() ? kExitPass : kExitFail;
        }

        const FormContext ctx = make_form_context(cfg);
        json out;
        out["header"] = artifact_header(cfg, ctx);

        if (*ev) {
            const EpsteinEvaluator E(ctx.Q);
            const FuncValue v = E.eval({sigma, t}, true);
            out["s"] = {sigma, t};
            out["value"] = cj(v.f);
            out["derivative"] = cj(v.df);
            out["err"] = v.err;
            out["derivative_err"] = v.derr;
        } else if (*dec) {
            const HeckeFamily F(ctx.G.D);
            const auto coef = epstein_coefficients(ctx.G, ctx.Q);
            const cplx s(sigma, t);
            cplx sum = 0.0;
            json terms = json::array();
            for (int j = 0; j < coef.J(); ++j) {
                const FuncValue L = F.eval_L(coef.chars[j], s);
                sum += coef.a_list[j] * L.f;
                terms.push_back({{"character", coef.char_index[j]}, {"a", coef.a_list[j]}, {"L", cj(L.f)},
                                 {"err", L.err}});
            }
            const cplx e = EpsteinEvaluator(ctx.Q).value(s);
            out["s"] = {sigma, t};
            out["terms"] = terms;
            out["sum"] = cj(sum);
            out["E"] = cj(e);
            out["difference"] = std::abs(e - sum);
        } else if (*zs) {
            const EpsteinEvaluator E(ctx.Q);
            ZeroOptions o = zero_of(cfg);
            o.localize = !no_localize;
            const StripCount sc = count_rectangle(E, {s1, s2, t1, t2}, o);
            out["rectangle"] = {s1, s2, t1, t2};
            out["winding_count"] = sc.winding_count;
            out["boundary_min_modulus"] = sc.boundary_min_modulus;
            out["perturbations"] = sc.perturbations;
            json zl = json::array();
            Csv csv({"re", "im", "residual", "certified", "multiplicity"});
            for (const auto& z : sc.zero_list) {
                zl.push_back(zero_json(z));
                csv.row({num(z.location.real()), num(z.location.imag()), num(z.residual), z.certified ? "1" : "0",
                         std::to_string(z.multiplicity)});
            }
            out["zeros"] = zl;
            if (!csv_path.empty()) write_file(csv_path, csv.str());
        } else if (*jn) {
            const EpsteinEvaluator E(ctx.Q);
            const auto grid = sigma_grid(cfg);
            const JensenProfile p =
                derivative_profile(jensen_profile(E, grid, cfg.get_double("jensen.T"), {xre, xim}, jensen_of(cfg)));
            Csv csv({"sigma", "phi", "phi_err", "dphi", "dphi_err", "d2phi", "d2phi_err"});
            for (std::size_t i = 0; i < grid.size(); ++i)
                csv.row({num(grid[i]), num(p.phi[i]), num(p.phi_err[i]), num(p.dphi[i]), num(p.dphi_err[i]),
                         num(p.d2phi[i]), num(p.d2phi_err[i])});
            if (!csv_path.empty()) write_file(csv_path, csv.str());
            const LinearityReport lr = detect_linearity(p, grid.front());
            json iv = json::array();
            for (const auto& I : lr.intervals)
                iv.push_back({{"sigma_lo", I.sigma_lo}, {"sigma_hi", I.sigma_hi}, {"slope", I.slope},
                              {"n", I.n ? json(*I.n) : json(nullptr)}});
            out["T"] = p.T_used;
            out["sigma"] = p.sigma_grid;
            out["phi"] = p.phi;
            out["phi_err"] = p.phi_err;
            out["linearity_intervals"] = iv;
        } else if (*dn) {
            const TorusModel M = TorusModel::build(ctx.G, ctx.Q, int(cfg.get_int("model.n")), sigma);
            const DensityTarget tg = target == "E" ? DensityTarget::EAtX : DensityTarget::RatioAtMinusA;
            const DensityMethod mt = method == "kde" ? DensityMethod::WeightedKDE : DensityMethod::FourierInversion;
            const DensityEstimate d = estimate_density(M, {xre, xim}, mt, qmc_of(cfg), tg);
            out["sigma"] = sigma;
            out["target"] = to_string(d.target);
            out["method"] = to_string(d.method);
            out["x"] = cj(d.x);
            out["G"] = d.G;
            out["G_err"] = d.G_err;
            out["bandwidth"] = d.bandwidth;
            out["samples"] = d.samples_used;
        } else if (*ex) {
            const std::filesystem::path dir = cfg.get("output.dir");
            std::filesystem::create_directories(dir);
            out["experiment"] = name;
            int rc = kExitPass;
            if (name == "CountVsPredict") rc = experiment_count(cfg, ctx, dir, out);
            else if (name == "ZeroFreeMap") rc = experiment_zero_free(cfg, ctx, dir, out);
            else if (name == "SigmaQLowerBound") rc = experiment_sigma_q(cfg, ctx, dir, out);
            else rc = experiment_line_scan(cfg, ctx, dir, out);
            write_file(dir / (name + ".json"), out.dump(2) + "\n");
            std::cout << out.dump(2) << "\n";
            return rc;
        }
        emit(out, out_path);
        return kExitPass;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}
