#pragma once

#include <string>
#include <vector>

namespace isodecay {

/// Standalone SVG line plot of log10(values) against t with labelled axes.
/// Nonpositive values are skipped; with fewer than two plottable points the
/// plot holds only the axes and a note.
std::string render_log_plot(const std::vector<double>& t, const std::vector<double>& values,
                            const std::string& title, const std::string& y_label);

}  // namespace isodecay
