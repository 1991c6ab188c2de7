#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cylapprox/basis.hpp"
#include "cylapprox/errors.hpp"
#include "cylapprox/fde.hpp"
#include "cylapprox/functionals.hpp"
#include "cylapprox/grid.hpp"
#include "cylapprox/integral.hpp"
#include "cylapprox/projection.hpp"
#include "cylapprox/spectrum.hpp"

namespace cylapprox {

enum class Experiment {
  Functional,       // sup_theta |F(theta) - F(P_m theta)|
  Frechet,          // sup_theta sup_eta |F'(theta) eta - F'(P_m theta) eta| / ||eta||
  DerivativeField,  // sup_theta ||dF/dtheta(theta) - dF/dtheta(P_m theta)||
  Fde,              // sup_theta |F(theta, t) - f(a, t)|
  Integral,         // Gaussian cylinder integral per m
  Projection,       // sup_theta ||theta - P_m theta||
};

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::Functional: return "functional";
    case Experiment::Frechet: return "frechet";
    case Experiment::DerivativeField: return "derivative-field";
    case Experiment::Fde: return "fde";
    case Experiment::Integral: return "integral";
    case Experiment::Projection: return "projection";
  }
  return "?";
}

inline Experiment parse_experiment(const std::string& s) {
  for (auto e : {Experiment::Functional, Experiment::Frechet, Experiment::DerivativeField, Experiment::Fde,
                 Experiment::Integral, Experiment::Projection}) {
    if (s == to_string(e)) return e;
  }
  throw InvalidArgument("unknown experiment '" + s + "'");
}

struct ExperimentConfig {
  Experiment experiment = Experiment::Functional;
  SpectrumLaw law{};
  std::vector<std::size_t> m_values{8, 16, 32, 64, 128};
  std::size_t n_theta_samples = 200;
  std::size_t n_eta_samples = 1000;
  double t = std::numbers::pi;
  std::string model = "sinsq";
  std::uint64_t seed = 0;
  std::string output;
  BasisKind basis = BasisKind::TrigCardinal;
  std::optional<std::size_t> quad_points;

  // Integral experiment only
  IntegrationMethod method = IntegrationMethod::TensorGaussHermite;
  std::size_t gh_order = 64;
  std::size_t mc_samples = 100000;

  void validate() const {
    if (m_values.empty()) throw InvalidArgument("config: m list is empty");
    for (std::size_t i = 1; i < m_values.size(); ++i) {
      if (m_values[i] <= m_values[i - 1]) throw InvalidArgument("config: m values must be strictly increasing");
    }
    if (experiment != Experiment::Integral) {
      for (std::size_t m : m_values) {
        if (m % 2 != 0) throw InvalidArgument("config: basis index m must be even, got " + std::to_string(m));
      }
    }
    if (n_theta_samples == 0) throw InvalidArgument("config: samples must be positive");
    if (experiment == Experiment::Frechet && n_eta_samples == 0) {
      throw InvalidArgument("config: eta-samples must be positive");
    }
    if (!std::isfinite(t)) throw InvalidArgument("config: t must be finite");
    law.validate();
    make_model(model);
  }

  SpectrumLaw seeded_law() const {
    SpectrumLaw l = law;
    l.seed = seed;
    return l;
  }

  /// Shared quadrature size: the oversampling rule for the largest m, raised so
  /// that products of two spectra of N modes are integrated exactly.
  std::size_t quadrature_points() const {
    if (quad_points) return *quad_points;
    return std::max(default_quadrature_points(m_values.back()), 2 * law.max_mode + 2);
  }
};

struct ConvergenceRecord {
  Experiment experiment = Experiment::Functional;
  SpectrumKind law = SpectrumKind::Algebraic;
  double param = 0.0;
  std::size_t m = 0;
  BasisKind basis = BasisKind::TrigCardinal;
  double t = 0.0;
  double error = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const ConvergenceRecord&, const ConvergenceRecord&) = default;
};

/// One fixed theta ensemble sampled on one quadrature grid, reused at every m.
class ConvergenceStudy {
 public:
  explicit ConvergenceStudy(ExperimentConfig config)
      : config_(validated(std::move(config))),
        grid_(make_grid(config_.quadrature_points())),
        model_(make_model(config_.model)) {
    for (std::size_t m : config_.m_values) require_quadrature(BasisSpec(config_.basis, m), grid_);
    const SpectrumLaw law = config_.seeded_law();
    const RootsOfUnity roots(grid_.size());
    samples_.resize(static_cast<Eigen::Index>(grid_.size()), static_cast<Eigen::Index>(config_.n_theta_samples));
    spectra_.reserve(config_.n_theta_samples);
    for (std::size_t s = 0; s < config_.n_theta_samples; ++s) {
      spectra_.push_back(sample_spectrum(law, StreamTag::Theta, s));
      eval_on_grid(spectra_.back(), roots, column_span(samples_, s));
    }
  }

  const ExperimentConfig& config() const noexcept { return config_; }
  const UniformGrid& grid() const noexcept { return grid_; }
  const std::vector<FourierSpectrum>& spectra() const noexcept { return spectra_; }
  const Eigen::MatrixXd& samples() const noexcept { return samples_; }

  std::vector<ConvergenceRecord> projection() const {
    return sweep(Experiment::Projection, 0.0, [&](const Projector&, const Eigen::MatrixXd& projected) {
      return max_column_norm(samples_ - projected);
    });
  }

  std::vector<ConvergenceRecord> functional() const {
    const std::vector<double> exact = evaluate_columns(samples_);
    return sweep(Experiment::Functional, 0.0, [&](const Projector&, const Eigen::MatrixXd& projected) {
      const std::vector<double> approx = evaluate_columns(projected);
      double worst = 0.0;
      for (std::size_t s = 0; s < exact.size(); ++s) worst = std::max(worst, std::abs(exact[s] - approx[s]));
      return worst;
    });
  }

  std::vector<ConvergenceRecord> derivative_field() const {
    const Eigen::MatrixXd exact = field_columns(samples_);
    return sweep(Experiment::DerivativeField, 0.0, [&](const Projector&, const Eigen::MatrixXd& projected) {
      return max_column_norm(exact - field_columns(projected));
    });
  }

  /// The eta ensemble shares the law of theta on its own sub-streams and is
  /// reused for every theta and every m.
  std::vector<ConvergenceRecord> frechet() const {
    const SpectrumLaw law = config_.seeded_law();
    const RootsOfUnity roots(grid_.size());
    Eigen::MatrixXd eta(static_cast<Eigen::Index>(grid_.size()), static_cast<Eigen::Index>(config_.n_eta_samples));
    for (std::size_t e = 0; e < config_.n_eta_samples; ++e) {
      eval_on_grid(sample_spectrum(law, StreamTag::Eta, e), roots, column_span(eta, e));
    }
    const Eigen::RowVectorXd inv_norm = (grid_.weight() * eta.colwise().squaredNorm()).cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd exact = field_columns(samples_);
    return sweep(Experiment::Frechet, 0.0, [&](const Projector&, const Eigen::MatrixXd& projected) {
      const Eigen::MatrixXd diff = exact - field_columns(projected);
      const Eigen::MatrixXd actions = grid_.weight() * (diff.transpose() * eta);  // theta x eta
      return (actions.array().abs().rowwise() * inv_norm.array()).maxCoeff();
    });
  }

  /// FDE error at time t. Every cylindrical value is checked against the model's
  /// sup bound; a violation throws NumericFailure.
  std::vector<ConvergenceRecord> fde(double t) const {
    const RootsOfUnity roots(grid_.size());
    Eigen::MatrixXd shifted(samples_.rows(), samples_.cols());
    for (std::size_t s = 0; s < spectra_.size(); ++s) {
      eval_on_grid(shift(spectra_[s], t), roots, column_span(shifted, s));
    }
    const std::vector<double> exact = evaluate_columns(shifted);
    const std::optional<double> bound = model_->sup_bound();
    return sweep(Experiment::Fde, t, [&](const Projector& p, const Eigen::MatrixXd&) {
      const PropagatorCache prop = matrix_exponential(assemble_C(p.basis(), grid_), t);
      const Eigen::MatrixXd coeffs = prop.propagate_columns(p.project_columns(samples_));
      const std::vector<double> approx = evaluate_columns(p.synthesize_columns(coeffs));
      double worst = 0.0;
      for (std::size_t s = 0; s < exact.size(); ++s) {
        if (bound && !(std::abs(approx[s]) <= *bound)) {
          throw NumericFailure("stability bound violated: |f| = " + std::to_string(std::abs(approx[s])) + " > " +
                               std::to_string(*bound) + " at m=" + std::to_string(p.basis().m()));
        }
        worst = std::max(worst, std::abs(exact[s] - approx[s]));
      }
      return worst;
    });
  }

  std::vector<ConvergenceRecord> run() const {
    switch (config_.experiment) {
      case Experiment::Functional: return functional();
      case Experiment::Frechet: return frechet();
      case Experiment::DerivativeField: return derivative_field();
      case Experiment::Fde: return fde(config_.t);
      case Experiment::Projection: return projection();
      case Experiment::Integral: break;
    }
    throw InvalidArgument("ConvergenceStudy: integral experiments are run by run_integral_sweep");
  }

 private:
  static ExperimentConfig validated(ExperimentConfig c) {
    c.validate();
    return c;
  }

  static std::span<double> column_span(Eigen::MatrixXd& m, std::size_t col) {
    return {m.col(static_cast<Eigen::Index>(col)).data(), static_cast<std::size_t>(m.rows())};
  }

  GridFunction column(const Eigen::MatrixXd& m, Eigen::Index col) const {
    return GridFunction(grid_, std::vector<double>(m.col(col).data(), m.col(col).data() + m.rows()));
  }

  std::vector<double> evaluate_columns(const Eigen::MatrixXd& m) const {
    std::vector<double> out(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index s = 0; s < m.cols(); ++s) out[static_cast<std::size_t>(s)] = model_->evaluate(column(m, s));
    return out;
  }

  Eigen::MatrixXd field_columns(const Eigen::MatrixXd& m) const {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index s = 0; s < m.cols(); ++s) {
      const GridFunction f = model_->derivative_field(column(m, s));
      out.col(s) = Eigen::Map<const Eigen::VectorXd>(f.values.data(), m.rows());
    }
    return out;
  }

  double max_column_norm(const Eigen::MatrixXd& m) const {
    return std::sqrt(grid_.weight() * m.colwise().squaredNorm().maxCoeff());
  }

  template <class ErrorFn>
  std::vector<ConvergenceRecord> sweep(Experiment experiment, double t, ErrorFn&& error_at) const {
    std::vector<ConvergenceRecord> out;
    for (std::size_t m : config_.m_values) {
      const Projector p(BasisSpec(config_.basis, m), grid_);
      const Eigen::MatrixXd projected = p.synthesize_columns(p.project_columns(samples_));
      ConvergenceRecord r;
      r.experiment = experiment;
      r.law = config_.law.kind;
      r.param = config_.law.param;
      r.m = m;
      r.basis = config_.basis;
      r.t = t;
      r.error = error_at(p, projected);
      r.seed = config_.seed;
      out.push_back(r);
    }
    return out;
  }

  ExperimentConfig config_;
  UniformGrid grid_;
  ModelPtr model_;
  std::vector<FourierSpectrum> spectra_;
  Eigen::MatrixXd samples_;  // grid points x theta samples
};

inline std::vector<ConvergenceRecord> run_functional_convergence(ExperimentConfig c) {
  c.experiment = Experiment::Functional;
  return ConvergenceStudy(std::move(c)).functional();
}

inline std::vector<ConvergenceRecord> run_frechet_convergence(ExperimentConfig c) {
  c.experiment = Experiment::Frechet;
  return ConvergenceStudy(std::move(c)).frechet();
}

inline std::vector<ConvergenceRecord> run_derivative_field_convergence(ExperimentConfig c) {
  c.experiment = Experiment::DerivativeField;
  return ConvergenceStudy(std::move(c)).derivative_field();
}

inline std::vector<ConvergenceRecord> run_fde_convergence(ExperimentConfig c) {
  c.experiment = Experiment::Fde;
  const double t = c.t;
  return ConvergenceStudy(std::move(c)).fde(t);
}

inline std::vector<ConvergenceRecord> run_projection_convergence(ExperimentConfig c) {
  c.experiment = Experiment::Projection;
  return ConvergenceStudy(std::move(c)).projection();
}

// ---------------------------------------------------------------------------
// Integral sweeps
// ---------------------------------------------------------------------------

struct IntegralRecord {
  std::string model;
  IntegrationMethod method = IntegrationMethod::TensorGaussHermite;
  std::size_t m = 0;  // harmonics; the RealFourier basis has 2m + 1 coordinates
  double estimate = 0.0;
  double std_error = 0.0;

  friend bool operator==(const IntegralRecord&, const IntegralRecord&) = default;
};

inline std::vector<IntegralRecord> run_integral_sweep(const ExperimentConfig& c) {
  std::vector<IntegralRecord> out;
  for (std::size_t h : c.m_values) {
    CylinderIntegralSpec spec;
    spec.model = c.model;
    spec.basis = BasisSpec(BasisKind::RealFourier, 2 * h);
    spec.method = c.method;
    spec.order = c.gh_order;
    spec.samples = c.mc_samples;
    spec.seed = c.seed;
    spec.quad_points = c.quad_points;
    const IntegralResult r = integrate_cylinder(spec);
    out.push_back({c.model, c.method, h, r.estimate, r.std_error});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rate fits
// ---------------------------------------------------------------------------

enum class RateModel { Algebraic, Exponential };

inline const char* to_string(RateModel m) { return m == RateModel::Algebraic ? "algebraic" : "exponential"; }

inline RateModel parse_rate_model(const std::string& s) {
  if (s == "algebraic") return RateModel::Algebraic;
  if (s == "exponential") return RateModel::Exponential;
  throw InvalidArgument("unknown fit model '" + s + "'");
}

/// Records below this error are quadrature noise and left out of fits.
inline constexpr double kFitFloor = 1e-12;

struct RateFit {
  RateModel model = RateModel::Algebraic;
  double slope = 0.0;  // d log(error) / d log(m), or d log(error) / dm
  double r_squared = 0.0;
  std::size_t m_lo = 0;
  std::size_t m_hi = 0;
  std::size_t points = 0;
};

/// Least-squares slope of log(error) against log(m) (algebraic) or m (exponential).
inline RateFit fit_rate(const std::vector<ConvergenceRecord>& records, RateModel model, double floor = kFitFloor) {
  std::vector<double> xs, ys;
  RateFit fit;
  fit.model = model;
  for (const auto& r : records) {
    if (floor > 0.0 && r.error < floor) continue;
    if (!(r.error > 0.0)) throw FitUndefined("fit_rate: nonpositive error at m=" + std::to_string(r.m));
    xs.push_back(model == RateModel::Algebraic ? std::log(static_cast<double>(r.m)) : static_cast<double>(r.m));
    ys.push_back(std::log(r.error));
    fit.m_lo = fit.points == 0 ? r.m : std::min(fit.m_lo, r.m);
    fit.m_hi = std::max(fit.m_hi, r.m);
    ++fit.points;
  }
  if (xs.size() < 3) {
    throw FitUndefined("fit_rate: " + std::to_string(xs.size()) + " usable records, need at least 3");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw FitUndefined("fit_rate: all records share one m");
  fit.slope = sxy / sxx;
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

// ---------------------------------------------------------------------------
// CSV
//
//   records:   experiment,law,param,m,basis,t,error,seed
//   fits:      experiment,law,param,fit_model,slope,r2,m_lo,m_hi
//   integrals: model,method,m,estimate,stderr
// ---------------------------------------------------------------------------

inline constexpr const char* kRecordsHeader = "experiment,law,param,m,basis,t,error,seed";
inline constexpr const char* kFitsHeader = "experiment,law,param,fit_model,slope,r2,m_lo,m_hi";
inline constexpr const char* kIntegralHeader = "model,method,m,estimate,stderr";

struct FitRecord {
  Experiment experiment = Experiment::Functional;
  SpectrumKind law = SpectrumKind::Algebraic;
  double param = 0.0;
  RateFit fit;
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InvalidArgument("csv: bad number '" + s + "'");
  return v;
}

inline std::uint64_t parse_u64(const std::string& s) {
  std::size_t pos = 0;
  const auto v = std::stoull(s, &pos);
  if (pos != s.size()) throw InvalidArgument("csv: bad integer '" + s + "'");
  return v;
}

inline std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw IoError(path, "cannot open for writing");
  return os;
}

}  // namespace detail

/// Records in output order: grouped by experiment, law, parameter, basis and t, ascending m.
inline std::vector<ConvergenceRecord> sorted_records(std::vector<ConvergenceRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tuple(static_cast<int>(a.experiment), static_cast<int>(a.law), a.param, static_cast<int>(a.basis), a.t,
                      a.m) < std::tuple(static_cast<int>(b.experiment), static_cast<int>(b.law), b.param,
                                        static_cast<int>(b.basis), b.t, b.m);
  });
  return records;
}

inline void write_records_csv(std::ostream& os, const std::vector<ConvergenceRecord>& records) {
  os << kRecordsHeader << '\n';
  for (const auto& r : sorted_records(records)) {
    os << to_string(r.experiment) << ',' << to_string(r.law) << ',' << format_real(r.param) << ',' << r.m << ','
       << to_string(r.basis) << ',' << format_real(r.t) << ',' << format_real(r.error) << ',' << r.seed << '\n';
  }
}

inline void emit_csv(const std::vector<ConvergenceRecord>& records, const std::string& path) {
  auto os = detail::open_out(path);
  write_records_csv(os, records);
  if (!os.flush()) throw IoError(path, "write failed");
}

inline std::vector<ConvergenceRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kRecordsHeader) throw InvalidArgument("records csv: missing header");
  std::vector<ConvergenceRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv(line);
    if (f.size() != 8) throw InvalidArgument("records csv: expected 8 fields in '" + line + "'");
    ConvergenceRecord r;
    r.experiment = parse_experiment(f[0]);
    r.law = parse_spectrum_kind(f[1]);
    r.param = detail::parse_real(f[2]);
    r.m = detail::parse_u64(f[3]);
    r.basis = parse_basis_kind(f[4]);
    r.t = detail::parse_real(f[5]);
    r.error = detail::parse_real(f[6]);
    r.seed = detail::parse_u64(f[7]);
    out.push_back(r);
  }
  return out;
}

inline std::vector<ConvergenceRecord> read_records_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError(path, "cannot open for reading");
  return read_records_csv(is);
}

inline void write_fit_row(std::ostream& os, const FitRecord& f) {
  os << to_string(f.experiment) << ',' << to_string(f.law) << ',' << format_real(f.param) << ','
     << to_string(f.fit.model) << ',' << format_real(f.fit.slope) << ',' << format_real(f.fit.r_squared) << ','
     << f.fit.m_lo << ',' << f.fit.m_hi << '\n';
}

/// Writes fits to `path`, appending when the file already holds a fits table.
inline void emit_fits_csv(const std::vector<FitRecord>& fits, const std::string& path) {
  bool has_header = false;
  {
    std::ifstream probe(path);
    std::string first;
    has_header = probe && std::getline(probe, first) && first == kFitsHeader;
  }
  auto os = detail::open_out(path, has_header ? std::ios::app : std::ios::out);
  if (!has_header) os << kFitsHeader << '\n';
  for (const auto& f : fits) write_fit_row(os, f);
  if (!os.flush()) throw IoError(path, "write failed");
}

inline void write_integral_csv(std::ostream& os, const std::vector<IntegralRecord>& rows) {
  os << kIntegralHeader << '\n';
  for (const auto& r : rows) {
    os << r.model << ',' << to_string(r.method) << ',' << r.m << ',' << format_real(r.estimate) << ','
       << format_real(r.std_error) << '\n';
  }
}

inline void emit_integral_csv(const std::vector<IntegralRecord>& rows, const std::string& path) {
  auto os = detail::open_out(path);
  write_integral_csv(os, rows);
  if (!os.flush()) throw IoError(path, "write failed");
}

/// Fits every (experiment, law, param) group of `records`. The law picks the
/// rate model unless one is forced. Groups without enough points are skipped.
inline std::vector<FitRecord> fit_groups(const std::vector<ConvergenceRecord>& records,
                                         std::optional<RateModel> forced = std::nullopt,
                                         std::vector<std::string>* skipped = nullptr) {
  std::map<std::tuple<int, int, double>, std::vector<ConvergenceRecord>> groups;
  for (const auto& r : sorted_records(records)) {
    groups[{static_cast<int>(r.experiment), static_cast<int>(r.law), r.param}].push_back(r);
  }
  std::vector<FitRecord> out;
  for (const auto& [key, group] : groups) {
    const auto& head = group.front();
    const RateModel model =
        forced.value_or(head.law == SpectrumKind::Algebraic ? RateModel::Algebraic : RateModel::Exponential);
    try {
      out.push_back({head.experiment, head.law, head.param, fit_rate(group, model)});
    } catch (const FitUndefined& e) {
      if (skipped) {
        skipped->push_back(std::string(to_string(head.experiment)) + " " + to_string(head.law) + " " +
                           format_real(head.param) + ": " + e.what());
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config files: one "key = value" per line, '#' starts a comment. Keys are the
// long flag names of the CLI (law, param, m, samples, eta-samples, t, model,
// seed, out, basis, quad, N, experiment, method, order, mc-samples).
// ---------------------------------------------------------------------------

inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline std::vector<std::size_t> parse_m_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& cell : detail::split_csv(s)) {
    if (cell.empty()) throw InvalidArgument("m list: empty entry in '" + s + "'");
    out.push_back(detail::parse_u64(cell));
  }
  return out;
}

/// Applies one key/value pair to a config; unknown keys throw.
inline void apply_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "law") c.law.kind = parse_spectrum_kind(value);
  else if (key == "param") c.law.param = detail::parse_real(value);
  else if (key == "N") c.law.max_mode = detail::parse_u64(value);
  else if (key == "m") c.m_values = parse_m_list(value);
  else if (key == "samples") c.n_theta_samples = detail::parse_u64(value);
  else if (key == "eta-samples") c.n_eta_samples = detail::parse_u64(value);
  else if (key == "t") c.t = detail::parse_real(value);
  else if (key == "model") c.model = value;
  else if (key == "seed") c.seed = detail::parse_u64(value);
  else if (key == "out") c.output = value;
  else if (key == "basis") c.basis = parse_basis_kind(value);
  else if (key == "quad") c.quad_points = detail::parse_u64(value);
  else if (key == "experiment") c.experiment = parse_experiment(value);
  else if (key == "method") c.method = parse_integration_method(value);
  else if (key == "order") c.gh_order = detail::parse_u64(value);
  else if (key == "mc-samples") c.mc_samples = detail::parse_u64(value);
  else throw InvalidArgument("config: unknown key '" + key + "'");
}

inline ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {}) {
  std::ifstream is(path);
  if (!is) throw IoError(path, "cannot open for reading");
  std::stringstream ss;
  ss << is.rdbuf();
  for (const auto& [k, v] : parse_config_text(ss.str())) apply_config_value(base, k, v);
  return base;
}

}  // namespace cylapprox
