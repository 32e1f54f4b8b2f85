#include "qprod/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qprod/regint.hpp"

namespace qprod {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Mapper {
    double x0, x1, y0, y1; // data range
    double W, H, m;        // viewport
    double px(double x) const { return m + (x - x0) / (x1 - x0) * (W - 2 * m); }
    double py(double y) const { return H - m - (y - y0) / (y1 - y0) * (H - 2 * m); }
};

const char* kind_color(SpectralKind k) {
    switch (k) {
        case SpectralKind::Bound: return "#1f77b4";
        case SpectralKind::AntiBound: return "#17becf";
        case SpectralKind::Resonance: return "#d62728";
        case SpectralKind::AntiResonance: return "#ff7f0e";
    }
    return "#000";
}

void glyph(std::ostringstream& os, const Mapper& M, const SpectralPoint& p, bool divergent) {
    const double x = M.px(p.z.real());
    const double y = M.py(p.z.imag());
    const char* color = kind_color(p.kind);
    os << "<g class=\"point\" data-kind=\"" << to_string(p.kind) << "\" data-re=\""
       << fmt17(p.z.real()) << "\" data-im=\"" << fmt17(p.z.imag()) << "\" data-divergent=\""
       << (divergent ? "true" : "false") << "\">";
    switch (p.kind) {
        case SpectralKind::Bound:
            os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y)
               << "\" r=\"5\" fill=\"" << color << "\"/>";
            break;
        case SpectralKind::AntiBound:
            os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y)
               << "\" r=\"5\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
            break;
        case SpectralKind::Resonance:
            os << "<path d=\"M" << fmt(x) << " " << fmt(y - 6) << " L" << fmt(x - 5.5) << " "
               << fmt(y + 4.5) << " L" << fmt(x + 5.5) << " " << fmt(y + 4.5)
               << " Z\" fill=\"" << color << "\"/>";
            break;
        case SpectralKind::AntiResonance:
            os << "<path d=\"M" << fmt(x) << " " << fmt(y - 6) << " L" << fmt(x - 5.5) << " "
               << fmt(y + 4.5) << " L" << fmt(x + 5.5) << " " << fmt(y + 4.5)
               << " Z\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
            break;
    }
    if (divergent)
        os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y)
           << "\" r=\"9\" fill=\"none\" stroke=\"#d62728\" stroke-dasharray=\"2,2\"/>";
    os << "</g>\n";
}

} // namespace

std::string spectrum_svg(const std::vector<SpectralPoint>& pts, const SearchRegion& region,
                         const FigureOptions& opt) {
    Mapper M{region.re_min(), region.re_max(), region.im_min(), region.im_max(),
             opt.width,       opt.height,      opt.margin};
    if (M.x1 <= M.x0) M.x1 = M.x0 + 1.0;
    if (M.y1 <= M.y0) M.y1 = M.y0 + 1.0;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(opt.width)
       << "\" height=\"" << fmt(opt.height) << "\" viewBox=\"0 0 " << fmt(opt.width) << " "
       << fmt(opt.height) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        os << "<text x=\"" << fmt(opt.width / 2) << "\" y=\"24\" text-anchor=\"middle\" "
              "font-family=\"sans-serif\" font-size=\"15\">"
           << opt.title << "</text>\n";

    // wedge of the chosen state: apex at conj(z), divergent cone between the
    // rays at angles -3pi/4 and -pi/4
    std::optional<Wedge> wedge;
    if (opt.wedge_state) {
        wedge = Wedge{std::conj(*opt.wedge_state)};
        const double ax = wedge->apex.real();
        const double ay = wedge->apex.imag();
        const double reach = 2.0 * std::hypot(M.x1 - M.x0, M.y1 - M.y0);
        const double x_lo = ax + reach * std::cos(Wedge::ray_lo);
        const double y_lo = ay + reach * std::sin(Wedge::ray_lo);
        const double x_hi = ax + reach * std::cos(Wedge::ray_hi);
        const double y_hi = ay + reach * std::sin(Wedge::ray_hi);
        os << "<path class=\"wedge\" data-apex-re=\"" << fmt17(ax) << "\" data-apex-im=\""
           << fmt17(ay) << "\" d=\"M" << fmt(M.px(ax)) << " " << fmt(M.py(ay)) << " L"
           << fmt(M.px(x_lo)) << " " << fmt(M.py(y_lo)) << " L" << fmt(M.px(x_hi)) << " "
           << fmt(M.py(y_hi)) << " Z\" fill=\"#d62728\" fill-opacity=\"0.12\" "
              "stroke=\"#d62728\" stroke-width=\"1\"/>\n";
    }

    // axes
    if (M.y0 < 0.0 && M.y1 > 0.0)
        os << "<line x1=\"" << fmt(M.px(M.x0)) << "\" y1=\"" << fmt(M.py(0)) << "\" x2=\""
           << fmt(M.px(M.x1)) << "\" y2=\"" << fmt(M.py(0))
           << "\" stroke=\"#555\" stroke-width=\"1\"/>\n";
    if (M.x0 < 0.0 && M.x1 > 0.0)
        os << "<line x1=\"" << fmt(M.px(0)) << "\" y1=\"" << fmt(M.py(M.y0)) << "\" x2=\""
           << fmt(M.px(0)) << "\" y2=\"" << fmt(M.py(M.y1))
           << "\" stroke=\"#555\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << fmt(M.px(M.x1) - 36) << "\" y=\""
       << fmt((M.y0 < 0 && M.y1 > 0 ? M.py(0) : M.py(M.y0)) - 6)
       << "\" font-family=\"sans-serif\" font-size=\"12\">Re z</text>\n";
    os << "<text x=\"" << fmt((M.x0 < 0 && M.x1 > 0 ? M.px(0) : M.px(M.x0)) + 6) << "\" y=\""
       << fmt(M.py(M.y1) + 14) << "\" font-family=\"sans-serif\" font-size=\"12\">Im z</text>\n";

    for (const auto& p : pts) {
        const bool div = wedge ? wedge->test(p.z) : false;
        glyph(os, M, p, div);
    }

    // legend
    const double lx = opt.width - opt.margin - 150.0;
    double ly = opt.margin;
    for (SpectralKind k : {SpectralKind::Bound, SpectralKind::AntiBound,
                           SpectralKind::Resonance, SpectralKind::AntiResonance}) {
        os << "<circle cx=\"" << fmt(lx) << "\" cy=\"" << fmt(ly) << "\" r=\"4\" fill=\""
           << kind_color(k) << "\"/><text x=\"" << fmt(lx + 10) << "\" y=\"" << fmt(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << to_string(k)
           << "</text>\n";
        ly += 18.0;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace qprod
