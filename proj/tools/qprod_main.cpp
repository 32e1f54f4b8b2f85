// qprod: spectra, regularized inner products, and momentum-map figures for
// 1-D piecewise-constant cut-off potentials.

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qprod/oracle.hpp"
#include "qprod/products.hpp"
#include "qprod/regint.hpp"
#include "qprod/spectrum.hpp"
#include "qprod/svg.hpp"

using namespace qprod;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumeric = 2, kIo = 3 };

int log_level() {
    static const int level = [] {
        const char* v = std::getenv("QPROD_LOG");
        if (!v) return 0;
        const std::string s(v);
        if (s == "debug") return 2;
        if (s == "info") return 1;
        return 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[qprod] %s\n", msg.c_str());
}
void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::fprintf(stderr, "[qprod:debug] %s\n", msg.c_str());
}

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// output written atomically: temp file in the same directory, then rename
void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(out_path);
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write " + tmp.string());
        f << content;
        if (!f.good()) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename into place: " + target.string());
    log_info("wrote " + target.string());
}

PotentialSpec load_potential(const std::string& path) {
    try {
        return PotentialSpec::from_json(read_file(path));
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        throw IoError("malformed potential file " + path + ": " + e.what());
    }
}

SearchRegion parse_region(const std::string& text) {
    SearchRegion r;
    double v[4];
    char c;
    std::istringstream is(text);
    for (int i = 0; i < 4; ++i) {
        if (!(is >> v[i])) throw UsageError("--region expects RE_MIN,RE_MAX,IM_MIN,IM_MAX");
        if (i < 3 && !(is >> c)) throw UsageError("--region expects four comma-separated numbers");
    }
    r.corner_a = {v[0], v[2]};
    r.corner_b = {v[1], v[3]};
    if (!(v[1] > v[0]) || !(v[3] > v[2])) throw UsageError("--region rectangle is degenerate");
    return r;
}

cplx parse_complex(const std::string& text) {
    double re = 0.0, im = 0.0;
    char c;
    std::istringstream is(text);
    if (!(is >> re)) throw UsageError("expected a complex number as RE[,IM]");
    if (is >> c) {
        if (!(is >> im)) throw UsageError("expected a complex number as RE[,IM]");
    }
    return {re, im};
}

std::vector<double> parse_lambda_seq(const std::string& text) {
    std::vector<double> seq;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) seq.push_back(std::stod(tok));
    if (seq.empty()) throw UsageError("--lambda-seq is empty");
    return seq;
}

std::optional<Family> parse_family(const std::string& text) {
    if (text.empty()) return std::nullopt;
    if (text == "in") return Family::right_in();
    if (text == "out") return Family::right_out();
    throw UsageError("--family must be 'in' or 'out'");
}

std::vector<SpectralPoint> gather_spectrum(const PotentialSpec& pot, const SearchRegion& region,
                                           std::optional<Family> fam, double tol_root) {
    std::vector<SpectralPoint> pts;
    std::vector<Family> fams;
    if (fam)
        fams.push_back(*fam);
    else
        fams = {Family::right_in(), Family::right_out()};
    for (Family f : fams) {
        const FindResult fr = find_spectrum(pot, f, region, tol_root);
        for (const cplx e : fr.excluded) {
            std::ostringstream os;
            os << "excluded spurious point (" << e.real() << ", " << e.imag()
               << "): the closed-form scale factor vanishes there without an eigenfunction";
            log_info(os.str());
        }
        pts.insert(pts.end(), fr.points.begin(), fr.points.end());
    }
    return pts;
}

std::string spectrum_json(const std::vector<SpectralPoint>& pts) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : pts) {
        j.push_back({{"kind", to_string(p.kind)},
                     {"family", to_string(p.family)},
                     {"re_z", p.z.real()},
                     {"im_z", p.z.imag()},
                     {"re_E", p.energy.real()},
                     {"im_E", p.energy.imag()},
                     {"residual", p.residual}});
    }
    return j.dump(2) + "\n";
}

/// state selectors: bound:i, antibound:i, res:n, antires:n, incoming:n,
/// scattering:p, background:re,im[,in|out]
StateRef resolve_state(const std::string& sel, std::shared_ptr<const PotentialSpec> pot,
                       const SearchRegion& res_region, double tol_root) {
    const auto colon = sel.find(':');
    if (colon == std::string::npos)
        throw UsageError("state selector '" + sel + "' needs kind:arg");
    const std::string kind = sel.substr(0, colon);
    const std::string arg = sel.substr(colon + 1);

    const double qmax = [&] {
        double vmax = 0.0;
        for (const auto& s : pot->segments()) vmax = std::max(vmax, std::abs(s.height));
        return std::sqrt(2.0 * pot->mass() * vmax) + 8.0;
    }();

    auto nth = [&](const FindResult& fr, int n, const char* what) {
        if (n < 0 || n >= static_cast<int>(fr.points.size())) {
            std::ostringstream os;
            os << "selector " << what << ":" << n << " out of range (found "
               << fr.points.size() << ")";
            throw UsageError(os.str());
        }
        return fr.points[static_cast<std::size_t>(n)];
    };

    if (kind == "bound" || kind == "antibound") {
        SearchRegion r;
        r.corner_a = {-0.4, kind == "bound" ? 0.02 : -qmax};
        r.corner_b = {0.4, kind == "bound" ? qmax : -0.02};
        FindResult fr = find_spectrum(*pot, Family::right_in(), r, tol_root);
        if (kind == "antibound") // index by increasing |q|
            std::reverse(fr.points.begin(), fr.points.end());
        StateRef s = make_discrete_state(pot, nth(fr, std::stoi(arg), kind.c_str()));
        s.index = std::stoi(arg);
        return s;
    }
    if (kind == "res" || kind == "antires" || kind == "incoming") {
        SearchRegion r = res_region;
        if (kind == "antires") {
            r.corner_a = {-res_region.re_max(), res_region.im_min()};
            r.corner_b = {-std::max(res_region.re_min(), 0.02), res_region.im_max()};
        }
        const FindResult fr = find_spectrum(*pot, Family::right_in(), r, tol_root);
        SpectralPoint sp = nth(fr, std::stoi(arg), kind.c_str());
        if (kind == "incoming") {
            sp.z = std::conj(sp.z);
            sp.family = Family::right_out();
        }
        StateRef s = make_discrete_state(pot, sp);
        s.index = std::stoi(arg);
        return s;
    }
    if (kind == "scattering") return make_scattering_state(pot, std::stod(arg));
    if (kind == "background") {
        std::istringstream is(arg);
        std::string tok;
        std::vector<std::string> parts;
        while (std::getline(is, tok, ',')) parts.push_back(tok);
        if (parts.size() < 2) throw UsageError("background selector needs re,im[,in|out]");
        Family fam = Family::right_in();
        if (parts.size() >= 3) fam = *parse_family(parts[2]);
        return make_background_state(pot, {std::stod(parts[0]), std::stod(parts[1])}, fam);
    }
    throw UsageError("unknown state kind '" + kind + "'");
}

std::string product_report(const ProductValue& v) {
    char buf[256];
    switch (v.tag) {
        case ProductTag::Zero:
            std::snprintf(buf, sizeof(buf), "Zero (residual %.3g)", v.residual);
            break;
        case ProductTag::FiniteValue:
            std::snprintf(buf, sizeof(buf), "FiniteValue (%.17g%+.17gi)", v.value.real(),
                          v.value.imag());
            break;
        case ProductTag::KroneckerDelta:
            std::snprintf(buf, sizeof(buf), "KroneckerDelta (<a|a> = %.17g)", v.value.real());
            break;
        case ProductTag::DiracDelta:
            std::snprintf(buf, sizeof(buf), "DiracDelta (coefficient m/p = %.17g)",
                          v.delta_coeff);
            break;
        case ProductTag::Divergent:
            std::snprintf(buf, sizeof(buf),
                          "Divergent (term %s, wedge apex %.17g%+.17gi)",
                          v.divergent_term.c_str(),
                          v.wedge ? v.wedge->apex.real() : 0.0,
                          v.wedge ? v.wedge->apex.imag() : 0.0);
            break;
    }
    return buf;
}

// ---- verify: the invariant battery -----------------------------------------

struct Battery {
    int passed = 0;
    int failed = 0;
    void report(const std::string& name, bool ok, const std::string& detail = "") {
        std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                    detail.empty() ? "" : ": ", detail.c_str());
        (ok ? passed : failed) += 1;
    }
};

int cmd_verify(const PotentialSpec& pot, const SearchRegion& region, double tol_root) {
    Battery bat;
    char detail[256];

    // unimodular transfer matrices
    {
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 60; ++i) {
            const cplx z{-9.0 + 0.3 * i, 5.0 - 0.17 * i};
            if (std::abs(z) < 0.2) continue;
            const Mat2 M = transfer_matrix(pot, z);
            const cplx det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
            worst = std::max(worst, std::abs(det - 1.0));
        }
        ok = worst < 1e-12;
        std::snprintf(detail, sizeof(detail), "max |det M - 1| = %.3g", worst);
        bat.report("transfer matrix unimodular", ok, detail);
    }
    // real-axis unitarity
    {
        double worst = 0.0;
        for (double p : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const Amplitudes a = amplitudes(pot, {p, 0.0}, Family::right_in());
            worst = std::max(worst, std::abs(std::norm(a.R_num) + std::norm(a.T_num) -
                                             std::norm(a.D)) /
                                        std::norm(a.D));
        }
        std::snprintf(detail, sizeof(detail), "max relative defect = %.3g", worst);
        bat.report("real-axis unitarity |R|^2+|T|^2=|D|^2", worst < 1e-12, detail);
    }
    // conjugation symmetry between families
    {
        double worst = 0.0;
        for (int i = 0; i < 24; ++i) {
            const cplx z{0.4 + 0.37 * i, ((i % 2) ? 1.0 : -1.0) * (0.3 + 0.21 * i)};
            const Amplitudes in = amplitudes(pot, std::conj(z), Family::right_in());
            const Amplitudes out = amplitudes(pot, z, Family::right_out());
            worst = std::max(worst, std::abs(out.D - std::conj(in.D)) /
                                        std::max(1e-300, std::abs(out.D)));
        }
        std::snprintf(detail, sizeof(detail), "max relative defect = %.3g", worst);
        bat.report("family conjugation symmetry", worst < 1e-11, detail);
    }
    // spectrum invariants inside the requested region
    try {
        const FindResult fr = find_spectrum(pot, Family::right_in(), region, tol_root);
        bool mirror_ok = true;
        bool a5_ok = true;
        double worst_a5 = 0.0;
        for (const auto& p : fr.points) {
            const cplx m = -std::conj(p.z);
            if (m.real() >= region.re_min() && m.real() <= region.re_max() &&
                m.imag() >= region.im_min() && m.imag() <= region.im_max()) {
                bool found = false;
                for (const auto& q : fr.points)
                    if (std::abs(q.z - m) < 1e-8 * (1.0 + std::abs(m))) found = true;
                mirror_ok = mirror_ok && found;
            }
            if (p.kind == SpectralKind::Resonance || p.kind == SpectralKind::AntiResonance) {
                const double r = verify_pole_location(pot, p);
                worst_a5 = std::max(worst_a5, r);
                a5_ok = a5_ok && r < 1e-6;
            } else {
                const ImaginaryPoleCheck c = verify_pole_location_imaginary(pot, p);
                a5_ok = a5_ok && c.derivative_identity_residual < 1e-6;
                worst_a5 = std::max(worst_a5, c.derivative_identity_residual);
            }
        }
        std::snprintf(detail, sizeof(detail), "%zu zeros in region", fr.points.size());
        bat.report("zero multiset mirror-symmetric under z -> -conj z", mirror_ok, detail);
        std::snprintf(detail, sizeof(detail), "worst residual = %.3g", worst_a5);
        bat.report("pole-location identities", a5_ok, detail);
    } catch (const Error& e) {
        bat.report("spectrum invariants", false, e.what());
    }
    // wedge reciprocity
    {
        bool ok = true;
        for (int i = 0; i < 40; ++i) {
            const cplx z{-5.0 + 0.25 * i, 3.0 - 0.15 * i};
            const cplx zp{4.0 - 0.2 * i, -2.0 + 0.11 * i};
            ok = ok && wedge_classify(z, zp) == wedge_classify(zp, z);
        }
        bat.report("wedge reciprocity", ok);
    }
    // single-segment well: bisection oracle vs spectrum
    if (pot.segments().size() == 1 && pot.segments()[0].height < 0.0) {
        const auto qs = square_well_bound_oracle(pot.mass(), pot.segments()[0].height,
                                                 pot.total_width());
        SearchRegion axis;
        const double qmax = std::sqrt(2.0 * pot.mass() * std::abs(pot.segments()[0].height));
        axis.corner_a = {-0.4, 0.02};
        axis.corner_b = {0.4, qmax + 4.0};
        const FindResult fr = find_spectrum(pot, Family::right_in(), axis, tol_root);
        bool ok = fr.points.size() == qs.size();
        double worst = 0.0;
        for (std::size_t i = 0; ok && i < qs.size(); ++i)
            worst = std::max(worst, std::abs(fr.points[i].z.imag() - qs[i]));
        ok = ok && worst < 1e-8;
        std::snprintf(detail, sizeof(detail), "%zu bound states, worst |dq| = %.3g",
                      qs.size(), worst);
        bat.report("bound momenta match the transcendental oracle", ok, detail);
    }

    std::printf("%d passed, %d failed\n", bat.passed, bat.failed);
    return bat.failed == 0 ? kOk : kNumeric;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"complex-momentum spectra and regularized inner products for 1-D "
                 "piecewise-constant cut-off potentials"};
    app.require_subcommand(1);

    std::string potential_path, region_str, family_str, format = "csv", out_path = "-";
    std::string state_a, state_b, wedge_sel, k_str, lambda_seq_str, detail_out;
    double tol_root = 1e-10, scatter_p = 2.0;
    std::string background_str = "3,-2";

    auto add_common = [&](CLI::App* cmd, bool need_region) {
        cmd->add_option("--potential", potential_path, "potential JSON file")->required();
        auto* reg = cmd->add_option("--region", region_str,
                                    "search rectangle RE_MIN,RE_MAX,IM_MIN,IM_MAX");
        if (need_region) reg->required();
        cmd->add_option("--family", family_str, "restrict to one family: in|out");
        cmd->add_option("--format", format, "output format: csv|json|svg")
            ->check(CLI::IsMember({"csv", "json", "svg"}));
        cmd->add_option("--out", out_path, "output path ('-' = stdout)");
        cmd->add_option("--tol-root", tol_root, "root residual tolerance")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* c_spectrum = app.add_subcommand("spectrum", "locate and classify denominator zeros");
    add_common(c_spectrum, true);

    CLI::App* c_figure = app.add_subcommand("figure", "momentum-map scatter (SVG)");
    add_common(c_figure, true);
    c_figure->add_option("--wedge", wedge_sel,
                         "divergence wedge anchor: state selector or RE,IM");

    CLI::App* c_product = app.add_subcommand("product", "one inner product");
    add_common(c_product, false);
    c_product->add_option("--state-a", state_a, "bra selector")->required();
    c_product->add_option("--state-b", state_b, "ket selector")->required();

    CLI::App* c_table = app.add_subcommand("table", "pairwise product tag matrix");
    add_common(c_table, false);
    c_table->add_option("--scattering-p", scatter_p, "real momentum of the scattering state");
    c_table->add_option("--background", background_str, "background momentum RE,IM");
    c_table->add_option("--detail-out", detail_out, "also write the JSON cell payload here");

    CLI::App* c_regint = app.add_subcommand("regint", "regularized integral diagnostics");
    c_regint->add_option("--k", k_str, "integral argument RE[,IM]")->required();
    c_regint->add_option("--lambda-seq", lambda_seq_str, "comma-separated lambda sweep");
    c_regint->add_option("--out", out_path, "output path ('-' = stdout)");

    CLI::App* c_verify = app.add_subcommand("verify", "run the invariant battery");
    add_common(c_verify, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (c_regint->parsed()) {
            const cplx k = parse_complex(k_str);
            std::vector<double> seq{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
            if (!lambda_seq_str.empty()) seq = parse_lambda_seq(lambda_seq_str);
            const RegIntValue cl = reg_i(k);
            std::string body = "k_re,k_im,lambda,j_re,j_im,classification\n";
            const char* cname = cl.tag == RegIntValue::Tag::Finite ? "Finite"
                                : cl.tag == RegIntValue::Tag::Distribution ? "Distribution"
                                                                           : "Divergent";
            char line[256];
            for (double lam : seq) {
                const cplx j = gaussian_j(k, lam);
                std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                              k.real(), k.imag(), lam, j.real(), j.imag(), cname);
                body += line;
            }
            write_output(out_path, body);
            std::fprintf(stderr, "%s\n", cname);
            return kOk;
        }

        const PotentialSpec pot = load_potential(potential_path);
        const auto fam = parse_family(family_str);
        SearchRegion region;
        if (!region_str.empty()) {
            region = parse_region(region_str);
        } else {
            region.corner_a = {0.02, -6.0};
            region.corner_b = {12.0, -1e-3};
        }

        if (c_spectrum->parsed() || c_figure->parsed()) {
            std::vector<SpectralPoint> pts;
            int rc = kOk;
            try {
                pts = gather_spectrum(pot, region, fam, tol_root);
            } catch (const NonConvergence& e) {
                std::fprintf(stderr, "qprod: %s (partial output)\n", e.what());
                rc = kNumeric;
            }
            if (c_figure->parsed() && format == "svg") {
                FigureOptions opt;
                opt.title = "momentum map";
                if (!wedge_sel.empty()) {
                    if (wedge_sel.find(':') != std::string::npos) {
                        const StateRef s = resolve_state(
                            wedge_sel, std::make_shared<PotentialSpec>(pot), region, tol_root);
                        opt.wedge_state = s.z;
                    } else {
                        opt.wedge_state = parse_complex(wedge_sel);
                    }
                }
                write_output(out_path, spectrum_svg(pts, region, opt));
            } else if (format == "json") {
                write_output(out_path, spectrum_json(pts));
            } else {
                write_output(out_path, spectrum_to_csv(pts));
            }
            return rc;
        }

        if (c_product->parsed()) {
            auto shared = std::make_shared<PotentialSpec>(pot);
            const StateRef a = resolve_state(state_a, shared, region, tol_root);
            const StateRef b = resolve_state(state_b, shared, region, tol_root);
            const ProductValue v = master_inner_product(a, b);
            std::string body = "<" + state_label(a) + "|" + state_label(b) + "> = " +
                               product_report(v) + "\n";
            write_output(out_path, body);
            return kOk;
        }

        if (c_table->parsed()) {
            auto shared = std::make_shared<PotentialSpec>(pot);
            std::vector<StateRef> states;
            const double qmax = [&] {
                double vmax = 0.0;
                for (const auto& s : pot.segments()) vmax = std::max(vmax, std::abs(s.height));
                return std::sqrt(2.0 * pot.mass() * vmax) + 8.0;
            }();
            SearchRegion up, dn;
            up.corner_a = {-0.4, 0.02};
            up.corner_b = {0.4, qmax};
            dn.corner_a = {-0.4, -qmax};
            dn.corner_b = {0.4, -0.02};
            FindResult bound = find_spectrum(pot, Family::right_in(), up, tol_root);
            FindResult anti = find_spectrum(pot, Family::right_in(), dn, tol_root);
            // deepest bound first, then the rest; anti-bound by increasing |q|
            std::reverse(bound.points.begin(), bound.points.end());
            std::reverse(anti.points.begin(), anti.points.end());
            int idx = 0;
            for (std::size_t i = 0; i < bound.points.size(); ++i) {
                StateRef s = make_discrete_state(shared, bound.points[i]);
                s.index = static_cast<int>(bound.points.size() - 1 - i);
                const double n = bound_norm(s);
                states.push_back(scaled_state(s, 1.0 / std::sqrt(n)));
            }
            for (std::size_t i = 0; i < anti.points.size(); ++i) {
                StateRef s = make_discrete_state(shared, anti.points[i]);
                s.index = idx++;
                states.push_back(s);
            }
            const FindResult res = find_spectrum(pot, Family::right_in(), region, tol_root);
            if (!res.points.empty()) {
                StateRef s = make_discrete_state(shared, res.points.front());
                s.index = 0;
                states.push_back(s);
            }
            if (res.points.size() >= 2) {
                SpectralPoint sp = res.points[1];
                sp.z = std::conj(sp.z);
                sp.family = Family::right_out();
                StateRef s = make_discrete_state(shared, sp);
                s.index = 1;
                states.push_back(s);
            }
            states.push_back(make_scattering_state(shared, scatter_p));
            states.push_back(make_background_state(shared, parse_complex(background_str)));

            const ProductTable t = product_table(pot, states);
            if (format == "json")
                write_output(out_path, table_to_json(t));
            else
                write_output(out_path, table_to_csv(t));
            if (!detail_out.empty()) write_output(detail_out, table_to_json(t));
            return kOk;
        }

        if (c_verify->parsed()) return cmd_verify(pot, region, tol_root);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "qprod: %s\n", e.what());
        return kUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "qprod: %s\n", e.what());
        return kIo;
    } catch (const Error& e) {
        std::fprintf(stderr, "qprod: %s\n", e.what());
        return kNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qprod: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}
