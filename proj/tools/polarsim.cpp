// Command-line front end: code design, BLER sweeps and built-in reference
// vector checks.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "polar/simulation.hpp"

namespace {

using polar::SimConfig;

std::vector<double> parse_snr_range(const std::string& text) {
  // start:step:stop, inclusive of the endpoint within a small tolerance
  double start = 0, step = 0, stop = 0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(text);
  if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0)
    throw polar::ConfigError("bad --snr-range, expected start:step:stop");
  std::vector<double> grid;
  for (double v = start; v <= stop + step * 1e-9; v += step) grid.push_back(v);
  return grid;
}

void apply_config_file(SimConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw polar::ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw polar::ConfigError(std::string("bad config JSON: ") + e.what());
  }
  if (j.contains("N")) cfg.n_tx = j["N"].get<std::uint32_t>();
  if (j.contains("K")) cfg.k = j["K"].get<std::uint32_t>();
  if (j.contains("scheme")) cfg.scheme = polar::scheme_from_string(j["scheme"].get<std::string>());
  if (j.contains("crc_len")) cfg.crc_len = j["crc_len"].get<int>();
  if (j.contains("list_size")) cfg.list_size = j["list_size"].get<int>();
  if (j.contains("snr_grid")) cfg.snr_grid_db = j["snr_grid"].get<std::vector<double>>();
  if (j.contains("snr_convention"))
    cfg.snr_convention = polar::snr_convention_from_string(j["snr_convention"].get<std::string>());
  if (j.contains("max_frames")) cfg.max_frames = j["max_frames"].get<std::uint64_t>();
  if (j.contains("max_errors")) cfg.max_errors = j["max_errors"].get<std::uint64_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("combine_mode"))
    cfg.combine_mode = j["combine_mode"].get<std::string>() == "exact" ? polar::CombineMode::exact
                                                                       : polar::CombineMode::minsum;
  if (j.contains("design_snr")) cfg.design_snr_db = j["design_snr"].get<double>();
}

std::string default_csv_name(const SimConfig& cfg) {
  std::ostringstream name;
  name << polar::to_string(cfg.scheme) << "_N" << cfg.n_tx << "_K" << cfg.k << "_L"
       << cfg.list_size << "_seed" << cfg.seed << ".csv";
  return name.str();
}

bool check_vector(const char* label, const polar::BitVector& got,
                  const std::vector<int>& expect) {
  bool ok = got.size() == expect.size();
  for (std::size_t i = 0; ok && i < got.size(); ++i) ok = got[i] == expect[i];
  std::cout << (ok ? "PASS" : "FAIL") << "  " << label << '\n';
  return ok;
}

bool check_set(const char* label, const std::vector<std::uint32_t>& got,
               const std::vector<std::uint32_t>& expect) {
  const bool ok = got == expect;
  std::cout << (ok ? "PASS" : "FAIL") << "  " << label << '\n';
  return ok;
}

int run_golden() {
  using namespace polar;
  int failures = 0;
  auto tally = [&](bool ok) { failures += ok ? 0 : 1; };

  tally(check_set("bit-reversal permutation of length 8",
                  bit_reversal_permutation(3), {1, 5, 3, 7, 2, 6, 4, 8}));
  tally(check_set("reliability order of length 8",
                  reliability_profile(8, 2.0).order, {1, 2, 3, 5, 4, 6, 7, 8}));

  const BitVector word{1, 0, 1, 0};

  const CodeSpec punct = design_code(6, 4, SchemeId::proposed_punctured);
  tally(check_set("(6,4) punctured pattern", punct.pattern_set, {1, 5}));
  tally(check_set("(6,4) punctured frozen set", punct.frozen_set, {1, 2, 3, 5}));
  tally(check_vector("(6,4) punctured input vector", expand_information(punct, word),
                     {0, 0, 0, 1, 0, 0, 1, 0}));
  const BitVector x_p = encode(punct, word);
  tally(check_vector("(6,4) punctured mother codeword", x_p, {0, 1, 0, 1, 1, 0, 1, 0}));
  tally(check_vector("(6,4) punctured transmitted bits", rate_match(x_p, punct),
                     {1, 0, 1, 0, 1, 0}));

  const CodeSpec shortd = design_code(6, 4, SchemeId::proposed_shortened);
  tally(check_set("(6,4) shortened pattern", shortd.pattern_set, {4, 8}));
  tally(check_set("(6,4) shortened frozen set", shortd.frozen_set, {1, 2, 4, 8}));
  tally(check_vector("(6,4) shortened input vector", expand_information(shortd, word),
                     {0, 0, 1, 0, 0, 1, 0, 0}));
  const BitVector x_s = encode(shortd, word);
  tally(check_vector("(6,4) shortened mother codeword", x_s, {0, 1, 1, 0, 1, 1, 0, 0}));
  tally(check_vector("(6,4) shortened transmitted bits", rate_match(x_s, shortd),
                     {0, 1, 1, 1, 1, 0}));

  if (failures) std::cout << failures << " check(s) failed\n";
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polar code construction and BLER simulation"};
  app.require_subcommand(1);

  // design
  auto* design = app.add_subcommand("design", "print the code description for (N, K, scheme)");
  std::uint32_t d_n = 0, d_k = 0;
  std::string d_scheme = "proposed-punctured";
  double d_design_snr = 2.0;
  std::string d_output;
  design->add_option("-N,--length", d_n, "transmitted length N")->required();
  design->add_option("-K,--dimension", d_k, "information length K (CRC included)")->required();
  design->add_option("-s,--scheme", d_scheme, "design scheme id");
  design->add_option("--design-snr", d_design_snr, "Es/N0 in dB for the reliability order");
  design->add_option("-o,--output", d_output, "write JSON here instead of stdout");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a Monte Carlo BLER sweep and emit CSV");
  SimConfig cfg;
  std::string s_scheme = "proposed-punctured";
  std::string s_convention = "esn0";
  std::string s_combine = "minsum";
  std::string s_range, s_config, s_output;
  bool s_serial = false;
  sim->add_option("-N,--length", cfg.n_tx, "transmitted length N");
  sim->add_option("-K,--dimension", cfg.k, "information length K (CRC included)");
  sim->add_option("-s,--scheme", s_scheme, "design scheme id");
  sim->add_option("--crc", cfg.crc_len, "CRC length (0, 8, 16, 24)");
  sim->add_option("-L,--list", cfg.list_size, "list size");
  sim->add_option("--snr", cfg.snr_grid_db, "SNR grid values in dB")->delimiter(',');
  sim->add_option("--snr-range", s_range, "SNR grid as start:step:stop in dB");
  sim->add_option("--snr-convention", s_convention, "esn0 or ebn0");
  sim->add_option("--max-frames", cfg.max_frames, "frame budget per point");
  sim->add_option("--max-errors", cfg.max_errors, "early stop after this many frame errors");
  sim->add_option("--seed", cfg.seed, "master seed");
  sim->add_option("--combine", s_combine, "LLR combine rule: minsum or exact");
  sim->add_option("--design-snr", cfg.design_snr_db, "Es/N0 in dB for the reliability order");
  sim->add_option("-c,--config", s_config, "JSON config file; flags override its values");
  sim->add_option("-o,--output", s_output, "CSV path ('-' for stdout)");
  sim->add_flag("--serial", s_serial, "force the serial frame loop");

  // golden
  app.add_subcommand("golden", "check the built-in reference vectors");

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed()) {
      const polar::CodeSpec spec =
          polar::design_code(d_n, d_k, polar::scheme_from_string(d_scheme), {d_design_snr});
      const std::string text = polar::codespec_to_json(spec);
      if (d_output.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream out(d_output);
        if (!out) throw polar::ConfigError("cannot write " + d_output);
        out << text << '\n';
      }
      return 0;
    }

    if (sim->parsed()) {
      if (!s_config.empty()) {
        SimConfig from_file = cfg;
        apply_config_file(from_file, s_config);
        // command-line flags win over file values
        if (!sim->count("--length")) cfg.n_tx = from_file.n_tx;
        if (!sim->count("--dimension")) cfg.k = from_file.k;
        if (!sim->count("--scheme")) cfg.scheme = from_file.scheme;
        if (!sim->count("--crc")) cfg.crc_len = from_file.crc_len;
        if (!sim->count("--list")) cfg.list_size = from_file.list_size;
        if (!sim->count("--snr")) cfg.snr_grid_db = from_file.snr_grid_db;
        if (!sim->count("--snr-convention")) cfg.snr_convention = from_file.snr_convention;
        if (!sim->count("--max-frames")) cfg.max_frames = from_file.max_frames;
        if (!sim->count("--max-errors")) cfg.max_errors = from_file.max_errors;
        if (!sim->count("--seed")) cfg.seed = from_file.seed;
        if (!sim->count("--combine")) cfg.combine_mode = from_file.combine_mode;
        if (!sim->count("--design-snr")) cfg.design_snr_db = from_file.design_snr_db;
      }
      if (sim->count("--scheme")) cfg.scheme = polar::scheme_from_string(s_scheme);
      if (sim->count("--snr-convention"))
        cfg.snr_convention = polar::snr_convention_from_string(s_convention);
      if (sim->count("--combine")) {
        if (s_combine != "minsum" && s_combine != "exact")
          throw polar::ConfigError("--combine must be minsum or exact");
        cfg.combine_mode =
            s_combine == "exact" ? polar::CombineMode::exact : polar::CombineMode::minsum;
      }
      if (!s_range.empty()) cfg.snr_grid_db = parse_snr_range(s_range);
      cfg.validate();

      std::ofstream file;
      std::ostream* out = &std::cout;
      if (s_output.empty()) {
        if (const char* dir = std::getenv("POLARSIM_OUTDIR")) s_output = std::string(dir) + "/" + default_csv_name(cfg);
      }
      if (!s_output.empty() && s_output != "-") {
        file.open(s_output);
        if (!file) throw polar::ConfigError("cannot write " + s_output);
        out = &file;
      }
      const auto points = polar::run_sweep(
          cfg, out, s_serial ? polar::ExecPolicy::serial : polar::ExecPolicy::parallel);
      if (out != &std::cout) {
        std::cerr << "wrote " << points.size() << " point(s) to " << s_output << '\n';
      }
      return 0;
    }

    return run_golden();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
