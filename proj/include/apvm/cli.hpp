#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "apvm/dispersion.hpp"
#include "apvm/runner.hpp"

namespace apvm {
namespace detail {

inline void print_usage(std::ostream& os) {
  os << "usage: apvm <subcommand> [flags]\n"
        "\n"
        "subcommands:\n"
        "  run         time-step one scenario, write the diagnostics time series\n"
        "  csweep      full model vs asymptotic model errors over a list of c\n"
        "  orderstudy  Richardson self-convergence over a list of dt\n"
        "  dispersion  Weibel growth-rate scan over c from the linear theory\n"
        "\n"
        "common flags (override config-file keys; the flag always wins):\n"
        "  --config PATH        key=value file ('#' comments)\n"
        "  --scenario NAME      landau | weibel\n"
        "  --relativistic BOOL  true | false\n"
        "  --c X                light-speed parameter (csweep: comma list)\n"
        "  --dt X               time step (dispersion: semidiscrete step)\n"
        "  --t-final X          final time\n"
        "  --nx N --np1 N --np2 N\n"
        "  --method NAME        exact | cranknicolson | euler | radau3 | sdirk2\n"
        "  --order NAME         first | strang\n"
        "  --sample-every N\n"
        "  --out PATH           output CSV\n"
        "\n"
        "orderstudy: --dt-list X,X,...    dispersion: --scan-c LO:HI:STEP\n"
        "env: APVM_THREADS caps worker threads (0 = auto)\n";
}

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_double(item, 0));
  }
  if (out.empty()) throw config_error("empty list '" + text + "'");
  return out;
}

inline std::vector<double> parse_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw config_error("expected LO:HI:STEP, got '" + text + "'");
  const double lo = parse_double(text.substr(0, c1), 0);
  const double hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1), 0);
  const double step = parse_double(text.substr(c2 + 1), 0);
  if (step <= 0.0 || hi < lo) throw config_error("bad range '" + text + "'");
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-12 * step; v += step) out.push_back(v);
  return out;
}

inline run_config config_from_flags(const std::map<std::string, std::string>& flags) {
  run_config cfg;
  bool have_scenario = false;
  if (auto it = flags.find("config"); it != flags.end()) {
    std::ifstream in(it->second);
    if (!in) throw config_error("cannot open config file '" + it->second + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = parse_config(buf.str());
    have_scenario = true;
  }
  for (const auto& [key, value] : flags) {
    if (key == "config" || key == "dt-list" || key == "scan-c") continue;
    std::string k = key;
    if (k == "t-final") k = "t_final";
    if (k == "sample-every") k = "sample_every";
    if (k == "c" && value.find(',') != std::string::npos) continue;  // csweep list
    apply_key(cfg, k, value, 0, have_scenario);
  }
  if (!have_scenario) throw config_error("no scenario given (config file or --scenario)");
  cfg.validate();
  return cfg;
}

inline int cmd_run(const std::map<std::string, std::string>& flags) {
  const run_config cfg = config_from_flags(flags);
  const run_result res = run(cfg);
  std::ofstream out(cfg.out);
  if (!out) throw config_error("cannot write '" + cfg.out + "'");
  res.series.write_csv(out);
  std::cout << "wrote " << res.series.rows.size() << " samples to " << cfg.out << "\n";
  return 0;
}

inline int cmd_csweep(const std::map<std::string, std::string>& flags) {
  const run_config cfg = config_from_flags(flags);
  std::vector<double> cs{1.0, 5.0, 25.0, 125.0, 625.0, 3125.0};
  if (auto it = flags.find("c"); it != flags.end()) cs = parse_list(it->second);
  const auto rows = run_convergence_in_c(cfg, cs);
  std::ofstream out(cfg.out);
  if (!out) throw config_error("cannot write '" + cfg.out + "'");
  write_csweep_csv(out, rows);
  std::cout << "wrote " << rows.size() << " rows to " << cfg.out << "\n";
  return 0;
}

inline int cmd_orderstudy(const std::map<std::string, std::string>& flags) {
  const run_config cfg = config_from_flags(flags);
  std::vector<double> dts{0.2, 0.1, 0.05, 0.025};
  if (auto it = flags.find("dt-list"); it != flags.end()) dts = parse_list(it->second);
  const auto res = run_order_study(cfg, dts);
  std::ofstream out(cfg.out);
  if (!out) throw config_error("cannot write '" + cfg.out + "'");
  write_order_csv(out, res);
  std::cout << "fitted slope " << res.slope << "; wrote " << res.rows.size() << " rows to "
            << cfg.out << "\n";
  return 0;
}

inline int cmd_dispersion(const std::map<std::string, std::string>& flags) {
  dispersion_params base;  // Weibel parameters
  std::vector<double> cs = parse_range("0.5:5:0.25");
  if (auto it = flags.find("scan-c"); it != flags.end()) cs = parse_range(it->second);
  relation_kind kind = relation_kind::continuous;
  if (auto it = flags.find("dt"); it != flags.end()) {
    base.dt = parse_double(it->second, 0);
    kind = relation_kind::semidiscrete;
  }
  std::string path = "dispersion.csv";
  if (auto it = flags.find("out"); it != flags.end()) path = it->second;
  const auto rows = growth_rate_scan(base, cs, kind);
  std::ofstream out(path);
  if (!out) throw config_error("cannot write '" + path + "'");
  write_scan_csv(out, rows);
  std::cout << "wrote " << rows.size() << " rows to " << path << "\n";
  return 0;
}

}  // namespace detail

inline int cli_main(int argc, char** argv) {
  if (argc < 2) {
    detail::print_usage(std::cerr);
    return 2;
  }
  const std::string sub = argv[1];
  if (sub == "--help" || sub == "-h" || sub == "help") {
    detail::print_usage(std::cout);
    return 0;
  }
  std::map<std::string, std::string> flags;
  for (int i = 2; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0) {
      std::cerr << "unexpected argument '" << arg << "'\n";
      detail::print_usage(std::cerr);
      return 2;
    }
    arg = arg.substr(2);
    std::string value;
    if (const auto eq = arg.find('='); eq != std::string::npos) {
      value = arg.substr(eq + 1);
      arg = arg.substr(0, eq);
    } else if (i + 1 < argc) {
      value = argv[++i];
    } else {
      std::cerr << "flag --" << arg << " needs a value\n";
      return 2;
    }
    flags[arg] = value;
  }
  try {
    if (sub == "run") return detail::cmd_run(flags);
    if (sub == "csweep") return detail::cmd_csweep(flags);
    if (sub == "orderstudy") return detail::cmd_orderstudy(flags);
    if (sub == "dispersion") return detail::cmd_dispersion(flags);
  } catch (const std::exception& e) {
    std::cerr << "apvm " << sub << ": " << e.what() << "\n";
    return 1;
  }
  std::cerr << "unknown subcommand '" << sub << "'\n";
  detail::print_usage(std::cerr);
  return 2;
}

}  // namespace apvm
