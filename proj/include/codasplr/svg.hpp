#pragma once

#include <string>

#include "codasplr/csv.hpp"

namespace codasplr {

/// Chart kinds the renderer understands. Each consumes the matching Table
/// layout produced by the command layer:
///  - Tradeoff: [x, series, series] numeric columns; two-line chart.
///  - Stability: [label, g0..gN, total, exvar]; binary selection heatmap
///    with the count and single-ratio percentage annotated per row.
///  - Parts: [label, g0..gN] counts; shaded heatmap.
enum class SvgKind { Tradeoff, Stability, Parts };

/// Renders a self-contained deterministic SVG document: identical tables
/// produce byte-identical output, colors stay distinguishable in grayscale.
/// Throws UnsupportedKind when the table does not match the kind's layout.
std::string render_svg(const Table& table, SvgKind kind);

}  // namespace codasplr
