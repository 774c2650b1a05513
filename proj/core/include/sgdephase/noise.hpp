#pragma once

// Stationary Gaussian noise: spectral densities, synthesis, estimation.
//
// Convention throughout: two-sided power spectral density per angular
// frequency, matching delta(t) = Integral dw noise~(w) e^{i w t} and
// E[noise~*(w) noise~(w')] = S(w) delta(w - w'). Hence
//   variance = Integral_{-inf}^{inf} S(w) dw,
// and white noise of level S sampled every dt has per-sample variance
// 2 pi S / dt.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sgdephase::noise {

enum class PsdKind { kWhite, kTabulated };

/// A real, stationary noise spectrum. Tabulated spectra are stored on
/// omega >= 0 (S is even), interpolated linearly and taken as zero outside the
/// grid.
class PsdSpec {
 public:
  static PsdSpec white(double level, std::string units = {});
  static PsdSpec tabulated(std::vector<double> omega, std::vector<double> value,
                           std::string units = {});

  PsdKind kind() const { return kind_; }
  bool is_white() const { return kind_ == PsdKind::kWhite; }
  /// White level; throws for tabulated spectra.
  double level() const;
  std::span<const double> omega() const { return omega_; }
  std::span<const double> values() const { return values_; }
  const std::string& units() const { return units_; }

  /// S(omega), evaluated at |omega|.
  double operator()(double omega) const;

  /// Integral of S over [lo, hi] with 0 <= lo <= hi. Exact for the piecewise
  /// linear table.
  double integral(double lo, double hi) const;

  /// Largest value of S anywhere.
  double max_value() const;

  /// True if S is defined (not extrapolated) on all of [0, omega_max].
  bool covers(double omega_max) const;

  PsdSpec scaled(double factor) const;

 private:
  void rebuild_cumulative();
  // Integral of S over [0, w], tabulated spectra only.
  double cumulative(double w) const;

  PsdKind kind_ = PsdKind::kWhite;
  double level_ = 0.0;
  std::vector<double> omega_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
  std::string units_;
};

/// Reads the tabulated format: header `omega_rad_s,psd_value`, one strictly
/// increasing row per grid point. Lines starting with '#' are skipped.
PsdSpec read_psd_csv(std::istream& in, std::string units = {});
PsdSpec load_psd_csv(const std::string& path, std::string units = {});
void write_psd_csv(std::ostream& out, const PsdSpec& psd);

/// PSD of Z = X - Y for jointly wide-sense-stationary X, Y:
/// S_xx + S_yy - 2 Re S_xy.
double differential_psd(double s_xx, double s_yy, double re_s_xy);

struct NoiseTrace {
  double dt = 0.0;
  std::vector<double> samples;
  std::uint64_t seed = 0;

  std::size_t size() const { return samples.size(); }
};

/// i.i.d. zero-mean Gaussian samples with variance 2 pi level / dt. `stream`
/// selects an independent sub-stream of `seed`.
NoiseTrace synth_white(double level, double dt, std::size_t n, std::uint64_t seed,
                       std::uint64_t stream = 0);

/// Circularly stationary Gaussian trace with the given spectrum, by spectral
/// synthesis. n must be a power of two; tabulated grids must cover
/// [0, pi/dt]. Each FFT bin receives the exact integral of S over its width.
NoiseTrace synth_colored(const PsdSpec& psd, double dt, std::size_t n, std::uint64_t seed,
                         std::uint64_t stream = 0);

enum class Window { kHann, kRectangular };

struct WelchOptions {
  std::size_t segment_length = 256;
  double overlap = 0.5;
  Window window = Window::kHann;
};

/// Welch average of windowed periodograms. The result is tabulated on
/// omega_k = 2 pi k / (segment_length dt), k = 0..segment_length/2, in the same
/// two-sided per-rad/s convention. The mean is not removed.
PsdSpec estimate_psd(const NoiseTrace& trace, const WelchOptions& options = {});

}  // namespace sgdephase::noise
