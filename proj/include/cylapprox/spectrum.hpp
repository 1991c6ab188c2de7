#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cylapprox/errors.hpp"
#include "cylapprox/grid.hpp"

namespace cylapprox {

// ---------------------------------------------------------------------------
// Random streams
//
// Every sampled function gets its own generator. The seed of sub-stream
// (seed, tag, index) is splitmix64(splitmix64(seed ^ tag) + index), which
// feeds a std::mt19937_64. Uniform doubles take the top 53 bits of one draw,
// so the whole chain is specified by the standard and reproducible across
// platforms and schedules.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream tags so that theta, eta and Monte Carlo draws never share a sub-stream.
enum class StreamTag : std::uint64_t {
  Theta = 0x7468657461ULL,
  Eta = 0x657461ULL,
  MonteCarlo = 0x6d63ULL,
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed ^ static_cast<std::uint64_t>(tag)) + index));
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box-Muller; pairs are cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

/// Nonnegative-mode Fourier coefficients c_0..c_N of a real periodic function;
/// c_{-k} = conj(c_k) is implied, so theta(x) = c_0 + 2 sum_k Re(c_k e^{ikx}).
struct FourierSpectrum {
  std::vector<std::complex<double>> c;

  FourierSpectrum() : c(1, 0.0) {}
  explicit FourierSpectrum(std::size_t max_mode) : c(max_mode + 1, 0.0) {}
  explicit FourierSpectrum(std::vector<std::complex<double>> coeffs) : c(std::move(coeffs)) {
    if (c.empty()) throw InvalidArgument("FourierSpectrum: needs at least c_0");
    c[0] = c[0].real();
  }

  std::size_t max_mode() const noexcept { return c.size() - 1; }

  friend bool operator==(const FourierSpectrum&, const FourierSpectrum&) = default;
};

enum class SpectrumKind { Algebraic, Exponential };

inline const char* to_string(SpectrumKind k) { return k == SpectrumKind::Algebraic ? "algebraic" : "exponential"; }

inline SpectrumKind parse_spectrum_kind(const std::string& s) {
  if (s == "algebraic") return SpectrumKind::Algebraic;
  if (s == "exponential") return SpectrumKind::Exponential;
  throw InvalidArgument("unknown spectrum law '" + s + "' (expected algebraic|exponential)");
}

/// |c_k| = u_k / k^alpha (algebraic) or u_k / beta^k (exponential), u_k uniform,
/// uniform phases, c_0 uniform real.
struct SpectrumLaw {
  SpectrumKind kind = SpectrumKind::Algebraic;
  double param = 2.0;  // alpha or beta
  std::size_t max_mode = 1000;
  double amplitude_lo = 0.0;
  double amplitude_hi = 10.0;
  double constant_lo = -10.0;
  double constant_hi = 10.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (kind == SpectrumKind::Algebraic && !(param >= 1.0)) {
      throw InvalidArgument("algebraic law needs alpha >= 1, got " + std::to_string(param));
    }
    if (kind == SpectrumKind::Exponential && !(param > 1.0)) {
      throw InvalidArgument("exponential law needs beta > 1, got " + std::to_string(param));
    }
    if (max_mode < 1) throw InvalidArgument("spectrum law needs N >= 1");
    if (!(amplitude_lo <= amplitude_hi) || !(constant_lo <= constant_hi)) {
      throw InvalidArgument("spectrum law: empty amplitude range");
    }
  }

  /// Deterministic decay factor multiplying the uniform amplitude of mode k >= 1.
  double decay(std::size_t k) const {
    const double kk = static_cast<double>(k);
    return kind == SpectrumKind::Algebraic ? std::pow(kk, -param) : std::pow(param, -kk);
  }
};

/// Draws one spectrum. Draw order: c_0, then (amplitude, phase) for k = 1..N.
inline FourierSpectrum sample_spectrum(const SpectrumLaw& law, Rng& rng) {
  law.validate();
  FourierSpectrum s(law.max_mode);
  s.c[0] = rng.uniform(law.constant_lo, law.constant_hi);
  for (std::size_t k = 1; k <= law.max_mode; ++k) {
    const double amp = rng.uniform(law.amplitude_lo, law.amplitude_hi) * law.decay(k);
    const double phase = rng.uniform(0.0, kTwoPi);
    s.c[k] = std::polar(amp, phase);
  }
  return s;
}

/// The index-th member of the seeded ensemble of `law`.
inline FourierSpectrum sample_spectrum(const SpectrumLaw& law, StreamTag tag, std::uint64_t index) {
  Rng rng = Rng::substream(law.seed, tag, index);
  return sample_spectrum(law, rng);
}

/// Point evaluation by direct summation.
inline double eval_at(const FourierSpectrum& s, double x) {
  double v = s.c[0].real();
  for (std::size_t k = 1; k < s.c.size(); ++k) {
    const double kx = static_cast<double>(k) * x;
    v += 2.0 * (s.c[k].real() * std::cos(kx) - s.c[k].imag() * std::sin(kx));
  }
  return v;
}

/// cos/sin of 2 pi r / n for r = 0..n-1; e^{ik x_j} = table[(k j) mod n].
struct RootsOfUnity {
  std::vector<double> cos_t;
  std::vector<double> sin_t;

  explicit RootsOfUnity(std::size_t n) : cos_t(n), sin_t(n) {
    for (std::size_t r = 0; r < n; ++r) {
      const double a = kTwoPi * static_cast<double>(r) / static_cast<double>(n);
      cos_t[r] = std::cos(a);
      sin_t[r] = std::sin(a);
    }
  }
};

/// Samples the spectrum on `grid`, writing into `out` (length grid.size()).
inline void eval_on_grid(const FourierSpectrum& s, const RootsOfUnity& roots, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    std::size_t r = 0;  // (k * j) mod n, advanced incrementally
    for (std::size_t k = 1; k < s.c.size(); ++k) {
      r += j;
      if (r >= n) r %= n;
      acc += s.c[k].real() * roots.cos_t[r] - s.c[k].imag() * roots.sin_t[r];
    }
    out[j] = s.c[0].real() + 2.0 * acc;
  }
}

inline GridFunction eval_on_grid(const FourierSpectrum& s, const UniformGrid& grid) {
  GridFunction out(grid);
  eval_on_grid(s, RootsOfUnity(grid.size()), out.values);
  return out;
}

/// Exact translation: the returned spectrum represents theta(x - t).
inline FourierSpectrum shift(const FourierSpectrum& s, double t) {
  FourierSpectrum out = s;
  for (std::size_t k = 1; k < s.c.size(); ++k) out.c[k] *= std::polar(1.0, -static_cast<double>(k) * t);
  return out;
}

/// Spectrum of d theta / dx.
inline FourierSpectrum derivative(const FourierSpectrum& s) {
  FourierSpectrum out(s.max_mode());
  for (std::size_t k = 1; k < s.c.size(); ++k) out.c[k] = std::complex<double>(0.0, static_cast<double>(k)) * s.c[k];
  return out;
}

/// ||theta||^2 in L2([0, 2pi]) by Parseval.
inline double l2_norm_sq(const FourierSpectrum& s) {
  double acc = 0.0;
  for (std::size_t k = 1; k < s.c.size(); ++k) acc += std::norm(s.c[k]);
  return kTwoPi * (s.c[0].real() * s.c[0].real() + 2.0 * acc);
}

// ---------------------------------------------------------------------------
// Text format
//
//   cylapprox-spectrum 1
//   kind <algebraic|exponential|none>
//   param <alpha|beta>
//   N <max mode>
//   seed <u64>
//   <k> <re> <im>          (N + 1 lines, k = 0..N)
//
// Reals are written with 17 significant digits, which round-trips every double.
// ---------------------------------------------------------------------------

struct SpectrumHeader {
  std::string kind = "none";
  double param = 0.0;
  std::uint64_t seed = 0;

  static SpectrumHeader from(const SpectrumLaw& law) { return {to_string(law.kind), law.param, law.seed}; }
};

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_spectrum(std::ostream& os, const FourierSpectrum& s, const SpectrumHeader& h) {
  os << "cylapprox-spectrum 1\n";
  os << "kind " << h.kind << "\n";
  os << "param " << format_real(h.param) << "\n";
  os << "N " << s.max_mode() << "\n";
  os << "seed " << h.seed << "\n";
  for (std::size_t k = 0; k < s.c.size(); ++k) {
    os << k << ' ' << format_real(s.c[k].real()) << ' ' << format_real(s.c[k].imag()) << '\n';
  }
}

struct SpectrumFile {
  SpectrumHeader header;
  FourierSpectrum spectrum;
};

inline SpectrumFile read_spectrum(std::istream& is) {
  auto fail = [](const std::string& why) { throw InvalidArgument("spectrum file: " + why); };
  std::string line;
  auto next_kv = [&](const char* key) {
    if (!std::getline(is, line)) fail(std::string("missing '") + key + "' line");
    std::istringstream ls(line);
    std::string k, v;
    ls >> k >> v;
    if (k != key || v.empty()) fail(std::string("expected '") + key + "', got '" + line + "'");
    return v;
  };

  if (next_kv("cylapprox-spectrum") != "1") fail("unsupported version");
  SpectrumFile f;
  f.header.kind = next_kv("kind");
  f.header.param = std::strtod(next_kv("param").c_str(), nullptr);
  const auto n = std::stoull(next_kv("N"));
  f.header.seed = std::stoull(next_kv("seed"));

  std::vector<std::complex<double>> c(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    if (!std::getline(is, line)) fail("truncated coefficient list at k=" + std::to_string(k));
    std::istringstream ls(line);
    std::size_t idx;
    std::string re, im;
    if (!(ls >> idx >> re >> im) || idx != k) fail("bad coefficient line '" + line + "'");
    c[k] = {std::strtod(re.c_str(), nullptr), std::strtod(im.c_str(), nullptr)};
  }
  f.spectrum = FourierSpectrum(std::move(c));
  return f;
}

inline void write_spectrum_file(const std::string& path, const FourierSpectrum& s, const SpectrumHeader& h) {
  std::ofstream os(path);
  if (!os) throw IoError(path, "cannot open for writing");
  write_spectrum(os, s, h);
  if (!os) throw IoError(path, "write failed");
}

inline SpectrumFile read_spectrum_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError(path, "cannot open for reading");
  return read_spectrum(is);
}

}  // namespace cylapprox
