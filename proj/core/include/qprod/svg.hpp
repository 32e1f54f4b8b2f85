#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qprod/spectrum.hpp"

namespace qprod {

/// Static SVG scatter of spectral points in the complex momentum plane.
struct FigureOptions {
    double width = 760.0;
    double height = 560.0;
    double margin = 56.0;
    std::string title;
    /// when set, draw the divergence wedge of this momentum (apex at its
    /// conjugate) and flag every point inside it
    std::optional<cplx> wedge_state;
};

std::string spectrum_svg(const std::vector<SpectralPoint>& pts, const SearchRegion& region,
                         const FigureOptions& opt);

} // namespace qprod
