#include "sgdephase/noise.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

#include "sgdephase/errors.hpp"
#include "sgdephase/random.hpp"

namespace sgdephase::noise {

using detail::raise;
using detail::require;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr const char* kPsdHeader = "omega_rad_s,psd_value";

template <typename T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <typename T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

// FFTW planning is not thread-safe; executing an existing plan on new arrays
// is. Plans are created once per size and kept for the process lifetime.
enum class PlanKind { kRealToComplex, kComplexToReal };

fftw_plan cached_plan(PlanKind kind, std::size_t n) {
  static std::mutex mutex;
  static std::map<std::pair<PlanKind, std::size_t>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto it = plans.find({kind, n});
  if (it != plans.end()) return it->second;

  auto real = fftw_alloc<double>(n);
  auto spectrum = fftw_alloc<fftw_complex>(n / 2 + 1);
  const int size = static_cast<int>(n);
  fftw_plan plan = kind == PlanKind::kRealToComplex
                       ? fftw_plan_dft_r2c_1d(size, real.get(), spectrum.get(), FFTW_ESTIMATE)
                       : fftw_plan_dft_c2r_1d(size, spectrum.get(), real.get(), FFTW_ESTIMATE);
  require(plan != nullptr, ErrorCode::kNumeric, "FFTW planning failed");
  plans.emplace(std::make_pair(kind, n), plan);
  return plan;
}

bool is_power_of_two(std::size_t n) { return n >= 2 && std::has_single_bit(n); }

}  // namespace

// ---------------------------------------------------------------------------
// PsdSpec

PsdSpec PsdSpec::white(double level, std::string units) {
  require(std::isfinite(level) && level >= 0.0, ErrorCode::kInvalidParameter,
          "white PSD level must be finite and non-negative");
  PsdSpec psd;
  psd.kind_ = PsdKind::kWhite;
  psd.level_ = level;
  psd.units_ = std::move(units);
  return psd;
}

PsdSpec PsdSpec::tabulated(std::vector<double> omega, std::vector<double> value,
                           std::string units) {
  require(omega.size() == value.size(), ErrorCode::kInvalidParameter,
          "PSD grid and values differ in length");
  require(omega.size() >= 2, ErrorCode::kInvalidParameter, "PSD grid needs at least two points");
  require(std::isfinite(omega.front()) && omega.front() >= 0.0, ErrorCode::kInvalidParameter,
          "PSD grid must start at omega >= 0");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    require(std::isfinite(omega[i]), ErrorCode::kInvalidParameter, "PSD grid is not finite");
    require(std::isfinite(value[i]) && value[i] >= 0.0, ErrorCode::kInvalidParameter,
            fmt::format("PSD value at omega = {} must be finite and non-negative", omega[i]));
    if (i > 0) {
      require(omega[i] > omega[i - 1], ErrorCode::kInvalidParameter,
              fmt::format("PSD grid not strictly increasing at omega = {}", omega[i]));
    }
  }
  PsdSpec psd;
  psd.kind_ = PsdKind::kTabulated;
  psd.omega_ = std::move(omega);
  psd.values_ = std::move(value);
  psd.units_ = std::move(units);
  psd.rebuild_cumulative();
  return psd;
}

void PsdSpec::rebuild_cumulative() {
  cumulative_.assign(omega_.size(), 0.0);
  for (std::size_t i = 1; i < omega_.size(); ++i) {
    cumulative_[i] =
        cumulative_[i - 1] + 0.5 * (values_[i - 1] + values_[i]) * (omega_[i] - omega_[i - 1]);
  }
}

double PsdSpec::level() const {
  require(is_white(), ErrorCode::kSpec, "level() requires a white PSD");
  return level_;
}

double PsdSpec::operator()(double omega) const {
  if (is_white()) return level_;
  const double w = std::abs(omega);
  if (w < omega_.front() || w > omega_.back()) return 0.0;
  const auto upper = std::upper_bound(omega_.begin(), omega_.end(), w);
  if (upper == omega_.end()) return values_.back();
  const auto i = static_cast<std::size_t>(upper - omega_.begin());
  const double t = (w - omega_[i - 1]) / (omega_[i] - omega_[i - 1]);
  return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

double PsdSpec::cumulative(double w) const {
  if (w <= omega_.front()) return 0.0;
  if (w >= omega_.back()) return cumulative_.back();
  const auto upper = std::upper_bound(omega_.begin(), omega_.end(), w);
  const auto i = static_cast<std::size_t>(upper - omega_.begin());
  return cumulative_[i - 1] + 0.5 * (values_[i - 1] + (*this)(w)) * (w - omega_[i - 1]);
}

double PsdSpec::integral(double lo, double hi) const {
  require(lo >= 0.0 && hi >= lo, ErrorCode::kDomain, "PSD integral needs 0 <= lo <= hi");
  if (is_white()) return level_ * (hi - lo);
  return std::max(0.0, cumulative(hi) - cumulative(lo));
}

double PsdSpec::max_value() const {
  if (is_white()) return level_;
  return *std::max_element(values_.begin(), values_.end());
}

bool PsdSpec::covers(double omega_max) const {
  if (is_white()) return true;
  return omega_.front() <= 0.0 && omega_.back() >= omega_max;
}

PsdSpec PsdSpec::scaled(double factor) const {
  require(std::isfinite(factor) && factor >= 0.0, ErrorCode::kInvalidParameter,
          "PSD scale factor must be non-negative");
  PsdSpec out = *this;
  out.level_ *= factor;
  for (double& v : out.values_) v *= factor;
  out.rebuild_cumulative();
  return out;
}

// ---------------------------------------------------------------------------
// CSV

PsdSpec read_psd_csv(std::istream& in, std::string units) {
  std::string line;
  bool header_seen = false;
  std::vector<double> omega;
  std::vector<double> value;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      require(line == kPsdHeader, ErrorCode::kIo,
              fmt::format("PSD file header must be '{}', got '{}'", kPsdHeader, line));
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorCode::kIo,
            fmt::format("PSD file line {}: expected two comma-separated values", line_no));
    try {
      std::size_t used_w = 0;
      std::size_t used_s = 0;
      const std::string w_text = line.substr(0, comma);
      const std::string s_text = line.substr(comma + 1);
      const double w = std::stod(w_text, &used_w);
      const double s = std::stod(s_text, &used_s);
      require(used_w == w_text.size() && used_s == s_text.size(), ErrorCode::kIo,
              fmt::format("PSD file line {}: trailing characters", line_no));
      omega.push_back(w);
      value.push_back(s);
    } catch (const std::logic_error&) {
      raise(ErrorCode::kIo, fmt::format("PSD file line {}: not a number", line_no));
    }
  }
  require(header_seen, ErrorCode::kIo, "PSD file is empty");
  return PsdSpec::tabulated(std::move(omega), std::move(value), std::move(units));
}

PsdSpec load_psd_csv(const std::string& path, std::string units) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, fmt::format("cannot open PSD file '{}'", path));
  return read_psd_csv(in, std::move(units));
}

void write_psd_csv(std::ostream& out, const PsdSpec& psd) {
  require(!psd.is_white(), ErrorCode::kSpec, "only tabulated spectra have a file form");
  out << kPsdHeader << '\n';
  const auto w = psd.omega();
  const auto s = psd.values();
  for (std::size_t i = 0; i < w.size(); ++i) out << fmt::format("{},{}\n", w[i], s[i]);
}

// ---------------------------------------------------------------------------
// Algebra

double differential_psd(double s_xx, double s_yy, double re_s_xy) {
  require(s_xx >= 0.0 && s_yy >= 0.0, ErrorCode::kInvalidParameter,
          "auto-spectra must be non-negative");
  const double limit = std::sqrt(s_xx * s_yy);
  require(std::abs(re_s_xy) <= limit * (1.0 + 1e-12), ErrorCode::kInvalidCorrelation,
          fmt::format("|Re S_xy| = {} exceeds sqrt(S_xx S_yy) = {}", std::abs(re_s_xy), limit));
  return std::max(0.0, s_xx + s_yy - 2.0 * re_s_xy);
}

// ---------------------------------------------------------------------------
// Synthesis

NoiseTrace synth_white(double level, double dt, std::size_t n, std::uint64_t seed,
                       std::uint64_t stream) {
  require(std::isfinite(level) && level >= 0.0, ErrorCode::kInvalidParameter,
          "white noise level must be non-negative");
  require(std::isfinite(dt) && dt > 0.0, ErrorCode::kInvalidParameter, "dt must be positive");
  NoiseTrace trace{dt, std::vector<double>(n, 0.0), seed};
  if (level == 0.0) return trace;
  auto rng = make_stream(seed, {0x77686974ULL, stream});
  std::normal_distribution<double> gauss(0.0, std::sqrt(kTwoPi * level / dt));
  for (double& x : trace.samples) x = gauss(rng);
  return trace;
}

NoiseTrace synth_colored(const PsdSpec& psd, double dt, std::size_t n, std::uint64_t seed,
                         std::uint64_t stream) {
  require(std::isfinite(dt) && dt > 0.0, ErrorCode::kInvalidParameter, "dt must be positive");
  require(is_power_of_two(n), ErrorCode::kInvalidParameter,
          fmt::format("spectral synthesis needs a power-of-two length, got {}", n));
  const double nyquist = std::numbers::pi / dt;
  require(psd.covers(nyquist), ErrorCode::kCoverage,
          fmt::format("PSD grid must cover [0, {}] rad/s", nyquist));

  const std::size_t half = n / 2;
  const double bin = kTwoPi / (static_cast<double>(n) * dt);
  auto spectrum = fftw_alloc<fftw_complex>(half + 1);
  auto rng = make_stream(seed, {0x636f6c6fULL, stream});
  std::normal_distribution<double> gauss(0.0, 1.0);

  bool any_power = false;
  for (std::size_t k = 0; k <= half; ++k) {
    const double centre = static_cast<double>(k) * bin;
    double power = 0.0;
    if (k == 0) {
      power = 2.0 * psd.integral(0.0, 0.5 * bin);
    } else if (k == half) {
      power = 2.0 * psd.integral(nyquist - 0.5 * bin, nyquist);
    } else {
      power = psd.integral(centre - 0.5 * bin, centre + 0.5 * bin);
    }
    any_power = any_power || power > 0.0;
    if (k == 0 || k == half) {
      spectrum[k][0] = std::sqrt(power) * gauss(rng);
      spectrum[k][1] = 0.0;
    } else {
      const double amp = std::sqrt(0.5 * power);
      spectrum[k][0] = amp * gauss(rng);
      spectrum[k][1] = amp * gauss(rng);
    }
  }

  NoiseTrace trace{dt, std::vector<double>(n, 0.0), seed};
  if (!any_power) return trace;
  auto real = fftw_alloc<double>(n);
  fftw_execute_dft_c2r(cached_plan(PlanKind::kComplexToReal, n), spectrum.get(), real.get());
  std::copy(real.get(), real.get() + n, trace.samples.begin());
  return trace;
}

// ---------------------------------------------------------------------------
// Estimation

PsdSpec estimate_psd(const NoiseTrace& trace, const WelchOptions& options) {
  const std::size_t len = options.segment_length;
  require(is_power_of_two(len), ErrorCode::kInvalidParameter,
          "Welch segment length must be a power of two");
  require(options.overlap >= 0.0 && options.overlap < 1.0, ErrorCode::kInvalidParameter,
          "Welch overlap must lie in [0, 1)");
  require(trace.dt > 0.0, ErrorCode::kInvalidParameter, "trace dt must be positive");
  require(trace.size() >= 1024 && trace.size() >= len, ErrorCode::kInsufficientData,
          fmt::format("PSD estimation needs at least max(1024, {}) samples, got {}", len,
                      trace.size()));

  std::vector<double> window(len, 1.0);
  if (options.window == Window::kHann) {
    for (std::size_t i = 0; i < len; ++i) {
      window[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(len)));
    }
  }
  double window_power = 0.0;
  for (double w : window) window_power += w * w;

  const auto step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(static_cast<double>(len) * (1.0 - options.overlap))));
  const std::size_t segments = (trace.size() - len) / step + 1;

  const std::size_t bins = len / 2 + 1;
  std::vector<double> accum(bins, 0.0);
  auto real = fftw_alloc<double>(len);
  auto spectrum = fftw_alloc<fftw_complex>(bins);
  const fftw_plan plan = cached_plan(PlanKind::kRealToComplex, len);
  for (std::size_t s = 0; s < segments; ++s) {
    const double* src = trace.samples.data() + s * step;
    for (std::size_t i = 0; i < len; ++i) real[i] = src[i] * window[i];
    fftw_execute_dft_r2c(plan, real.get(), spectrum.get());
    for (std::size_t k = 0; k < bins; ++k) {
      accum[k] += spectrum[k][0] * spectrum[k][0] + spectrum[k][1] * spectrum[k][1];
    }
  }

  // Per-Hz two-sided density is dt |X_k|^2 / sum(w^2); divide by 2 pi for rad/s.
  const double scale = trace.dt / (window_power * kTwoPi * static_cast<double>(segments));
  std::vector<double> omega(bins);
  std::vector<double> value(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    omega[k] = kTwoPi * static_cast<double>(k) / (static_cast<double>(len) * trace.dt);
    value[k] = accum[k] * scale;
  }
  return PsdSpec::tabulated(std::move(omega), std::move(value));
}

}  // namespace sgdephase::noise
