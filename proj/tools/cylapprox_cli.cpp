// Experiment runner for cylindrical functional approximations.
//
//   cylapprox sample    --law algebraic --param 2 --N 1000 --seed 7 [--index 0] [--out theta.txt]
//   cylapprox converge  --experiment functional --law algebraic --param 2.5 --m 8,16,32 --out eps0.csv
//   cylapprox fde       --t 3.14159 ... (converge with --experiment fde)
//   cylapprox integral  --model cauchy-sin --m 1,3,5 --method gh --order 64
//   cylapprox fit       --in eps0.csv [--fit-model algebraic] [--out fits.csv]
//
// `converge`, `fde` and `integral` accept --config <file> with "key = value" lines
// using the long flag names; flags given on the command line win.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "cylapprox/cylapprox.hpp"

namespace {

using namespace cylapprox;

/// Raw flag values; only flags that were actually given are applied on top of the config file.
struct ExperimentFlags {
  std::string config_file;
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>("--" + key, [this, key](const std::string& v) { values[key] = v; }, help);
  }

  void add_all(CLI::App* app, bool with_experiment) {
    app->add_option("--config", config_file, "key = value file mirroring these flags");
    if (with_experiment) add(app, "experiment", "functional|frechet|derivative-field|fde|projection|integral");
    add(app, "law", "spectrum law: algebraic|exponential");
    add(app, "param", "alpha (algebraic) or beta (exponential)");
    add(app, "N", "number of Fourier modes per sampled function");
    add(app, "m", "comma separated basis indices (even), or harmonics for integrals");
    add(app, "samples", "theta samples");
    add(app, "eta-samples", "eta samples (frechet)");
    add(app, "t", "time for the fde experiment");
    add(app, "model", "sinsq|sinsq-invariant|cauchy-sin");
    add(app, "seed", "64-bit seed");
    add(app, "out", "output CSV path (stdout when omitted)");
    add(app, "basis", "cardinal|fourier");
    add(app, "quad", "quadrature grid points");
    add(app, "method", "integral backend: gh|mc");
    add(app, "order", "Gauss-Hermite order per coordinate");
    add(app, "mc-samples", "Monte Carlo samples");
  }

  ExperimentConfig resolve(ExperimentConfig base) const {
    if (!config_file.empty()) base = load_config_file(config_file, base);
    for (const auto& [k, v] : values) apply_config_value(base, k, v);
    return base;
  }
};

template <class Writer>
void write_output(const std::string& path, Writer&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path);
  if (!os) throw IoError(path, "cannot open for writing");
  write(os);
  if (!os.flush()) throw IoError(path, "write failed");
}

void run_converge(const ExperimentConfig& c) {
  if (c.experiment == Experiment::Integral) {
    const auto rows = run_integral_sweep(c);
    write_output(c.output, [&](std::ostream& os) { write_integral_csv(os, rows); });
    return;
  }
  const auto records = ConvergenceStudy(c).run();
  write_output(c.output, [&](std::ostream& os) { write_records_csv(os, records); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cylindrical approximation of functionals and functional differential equations"};
  app.require_subcommand(1);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "write one sampled spectrum in the text format");
  std::string law_name = "algebraic", sample_out;
  double param = 2.0;
  std::size_t modes = 1000;
  std::uint64_t seed = 0, index = 0;
  sample_cmd->add_option("--law", law_name, "algebraic|exponential")->capture_default_str();
  sample_cmd->add_option("--param", param, "alpha or beta")->capture_default_str();
  sample_cmd->add_option("--N", modes, "max Fourier mode")->capture_default_str();
  sample_cmd->add_option("--seed", seed, "ensemble seed")->capture_default_str();
  sample_cmd->add_option("--index", index, "member of the seeded ensemble")->capture_default_str();
  sample_cmd->add_option("--out", sample_out, "output path (stdout when omitted)");

  // converge / fde / integral
  ExperimentFlags converge_flags, fde_flags, integral_flags;
  auto* converge_cmd = app.add_subcommand("converge", "run one convergence experiment and emit records CSV");
  converge_flags.add_all(converge_cmd, true);
  auto* fde_cmd = app.add_subcommand("fde", "FDE convergence at time t (converge --experiment fde)");
  fde_flags.add_all(fde_cmd, false);
  auto* integral_cmd = app.add_subcommand("integral", "Gaussian cylinder integrals over m harmonics");
  integral_flags.add_all(integral_cmd, false);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit decay rates to a records CSV");
  std::string fit_in, fit_out, fit_model = "auto";
  fit_cmd->add_option("--in", fit_in, "records CSV")->required();
  fit_cmd->add_option("--fit-model", fit_model, "auto|algebraic|exponential")->capture_default_str();
  fit_cmd->add_option("--out", fit_out, "fits CSV; appended to when it already holds fits");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample_cmd) {
      SpectrumLaw law;
      law.kind = parse_spectrum_kind(law_name);
      law.param = param;
      law.max_mode = modes;
      law.seed = seed;
      const FourierSpectrum s = sample_spectrum(law, StreamTag::Theta, index);
      write_output(sample_out, [&](std::ostream& os) { write_spectrum(os, s, SpectrumHeader::from(law)); });
    } else if (*converge_cmd) {
      run_converge(converge_flags.resolve({}));
    } else if (*fde_cmd) {
      ExperimentConfig base;
      base.experiment = Experiment::Fde;
      ExperimentConfig c = fde_flags.resolve(base);
      c.experiment = Experiment::Fde;
      run_converge(c);
    } else if (*integral_cmd) {
      ExperimentConfig base;
      base.experiment = Experiment::Integral;
      base.model = "cauchy-sin";
      base.m_values = {1, 3, 5};
      ExperimentConfig c = integral_flags.resolve(base);
      c.experiment = Experiment::Integral;
      c.validate();
      if (c.method == IntegrationMethod::TensorGaussHermite) {
        for (std::size_t h : c.m_values) {
          CylinderIntegralSpec spec;
          spec.model = c.model;
          spec.basis = BasisSpec(BasisKind::RealFourier, 2 * h);
          spec.order = c.gh_order;
          spec.quad_points = c.quad_points;
          std::fprintf(stderr, "m=%zu order doubling delta %.3e\n", h, gauss_hermite_doubling_delta(spec));
        }
      }
      run_converge(c);
    } else if (*fit_cmd) {
      const auto records = read_records_csv(fit_in);
      std::optional<RateModel> forced;
      if (fit_model != "auto") forced = parse_rate_model(fit_model);
      std::vector<std::string> skipped;
      const auto fits = fit_groups(records, forced, &skipped);
      for (const auto& s : skipped) std::fprintf(stderr, "fit skipped: %s\n", s.c_str());
      if (fit_out.empty()) {
        std::cout << kFitsHeader << '\n';
        for (const auto& f : fits) write_fit_row(std::cout, f);
      } else {
        emit_fits_csv(fits, fit_out);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
