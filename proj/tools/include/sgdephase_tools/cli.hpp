#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "sgdephase/sweep.hpp"

namespace sgdephase::tools {

/// Full command-line entry point. Results go to `out` (or the --out file),
/// diagnostics to `err` as one JSON line. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Named sweep set-ups: fig1, fig2, fig3, fig4, fig5, fig6a, fig6b.
sweep::SweepSpec sweep_preset(std::string_view name, double gamma_tau_target = 1.0);

/// `name:min:max:n[:log]`.
sweep::Axis parse_axis(std::string_view text);

/// Companion path for contour output: `<stem>.contours.csv`.
std::string contour_path(const std::string& out_path);

}  // namespace sgdephase::tools
